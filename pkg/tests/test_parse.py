import random
import unittest
from fractions import Fraction

from idlab.errors import PolySyntaxError, UnknownVariable
from idlab.exact import MultiPoly
from idlab.parse import Token, parse_poly, tokenize

VARIABLES = ('r', 's', 'x', 'y')


class TestTokenize(unittest.TestCase):
    def test_kinds(self):
        kinds = [t.kind for t in tokenize('3/4*z^2 − z')]
        self.assertEqual(kinds, [Token.NUMBER, Token.SLASH, Token.NUMBER, Token.STAR, Token.NAME, Token.CARET,
                                 Token.NUMBER, Token.MINUS, Token.NAME, Token.END])

    def test_positions(self):
        tokens = tokenize('z  + 1')
        self.assertEqual([t.position for t in tokens], [0, 3, 5, 6])


class TestParsePoly(unittest.TestCase):
    def test_examples(self):
        z, = MultiPoly.gens(('z',))
        self.assertEqual(parse_poly('z^2 - 1').poly, z ** 2 - 1)
        self.assertEqual(parse_poly('3/4 z^2').poly, Fraction(3, 4) * z ** 2)
        self.assertEqual(parse_poly('−z + 1').render(), '-z + 1')
        self.assertEqual(parse_poly('2*z*z').render(), '2*z^2')
        self.assertEqual(parse_poly(' 0 ').poly, MultiPoly(('z',)))

    def test_declared_variables(self):
        expr = parse_poly('1/8*r^2*s + 1/8*r*s^2 - 1/4*r*s', ('r', 's'))
        self.assertEqual(expr.render(), '1/8*r^2*s + 1/8*r*s^2 - 1/4*r*s')
        self.assertEqual(expr.poly.variables, ('r', 's'))

    def test_syntax_errors(self):
        cases = {
            '': 0,
            '   ': 0,
            'z^': 2,
            '1/0': 2,
            'z $ 1': 2,
            'z + ': 4,
            '2*3': 2,
            'z z^x': 4,
            '1/': 2,
        }
        for text, position in cases.items():
            with self.subTest(text=text):
                with self.assertRaises(PolySyntaxError) as cm:
                    parse_poly(text)
                self.assertEqual(cm.exception.position, position)

    def test_unknown_variable(self):
        with self.assertRaises(UnknownVariable):
            parse_poly('z + w')

    def test_canonical_text_parses_back(self):
        rng = random.Random(17)
        for _ in range(1000):
            terms = {}
            for _ in range(rng.randint(0, 4)):
                exps = tuple(rng.randint(0, 3) for _ in VARIABLES)
                terms[exps] = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
            poly = MultiPoly(VARIABLES, terms)
            self.assertEqual(parse_poly(poly.render(), VARIABLES).poly, poly)


if __name__ == '__main__':
    unittest.main()
