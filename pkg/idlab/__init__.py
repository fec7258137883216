"""
idlab audits cyclic vanishing identities for Appell and q-Appell polynomial
families, together with the period polynomials and analytic Bernoulli
functions around them, computing the exact defect wherever an identity fails.
"""

__version__ = '0.1.0'
