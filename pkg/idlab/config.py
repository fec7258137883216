"""Audit configuration: every tunable, its default, and validation."""

import os
from dataclasses import asdict, dataclass, fields

from idlab.cyclic import MAX_N
from idlab.errors import ConfigError
from idlab.modular import WEIGHT_CEILING

GROUPS = ('classical', 'binomial', 'q', 'modular', 'numeric', 'analytic')

LOG_FILE = 'idlab.log'
HISTORY_DB = 'idlab-history.db'


def log_file() -> str:
    return os.getenv('IDLAB_LOG_FILE', LOG_FILE)


def history_db() -> str:
    return os.getenv('IDLAB_HISTORY_DB', HISTORY_DB)


def split_once(s, sep):
    i = s.find(sep)
    if i == -1:
        return s, None
    return s[:i], s[i + len(sep):]


def parse_weights(text) -> tuple[int, ...]:
    """
    Weights from "k", "a..b" (even weights between a and b) or a
    comma-separated list of either.
    """
    weights = []
    for part in str(text).split(','):
        match [x.strip() for x in split_once(part, '..')]:
            case [single, None]:
                weights.append(int(single))
            case [low, high]:
                low, high = int(low), int(high)
                weights.extend(k for k in range(low, high + 1) if k % 2 == 0)
    return tuple(dict.fromkeys(weights))


def parse_groups(text) -> tuple[str, ...]:
    return tuple(g.strip() for g in str(text).split(',') if g.strip())


@dataclass(frozen=True)
class AuditConfig:
    groups: tuple[str, ...] = GROUPS
    n_ceiling: int = 10
    family_ceiling: int = 4
    transpose_ceiling: int = 8
    binomial_ceiling: int = 4
    q_ceiling: int = 4
    q_sample_ceiling: int = 6
    q_binomial_ceiling: int = 2
    weights: tuple[int, ...] = tuple(range(4, 31, 2))
    weight_ceiling: int = WEIGHT_CEILING
    truncation: int = 40
    tol: float = 1e-10
    seed: int = 42
    samples: int = 5
    jobs: int = 1
    expect_known: bool = False
    timings: bool = False

    @classmethod
    def from_args(cls, args):
        """Build a configuration from parsed `audit` flags; absent flags keep their defaults."""
        changes = {}
        if getattr(args, 'groups', None) is not None:
            changes['groups'] = parse_groups(args.groups)
        if getattr(args, 'weight', None):
            try:
                changes['weights'] = parse_weights(args.weight)
            except ValueError as e:
                raise ConfigError(f"bad weight selection {args.weight!r}") from e
        if getattr(args, 'n', None) is not None:
            changes['n_ceiling'] = args.n
        for name in ('truncation', 'tol', 'seed', 'samples', 'jobs'):
            value = getattr(args, name, None)
            if value is not None:
                changes[name] = value
        changes['expect_known'] = bool(getattr(args, 'expect_known', False))
        changes['timings'] = bool(getattr(args, 'timings', False))
        try:
            config = cls(**changes)
        except (TypeError, ValueError) as e:
            raise ConfigError(str(e)) from e
        return config.validate()

    def validate(self):
        if not self.groups:
            raise ConfigError("empty check selection")
        unknown = [g for g in self.groups if g not in GROUPS]
        if unknown:
            raise ConfigError(f"unknown check groups {unknown}; choose from {', '.join(GROUPS)}")
        for name in ('n_ceiling', 'family_ceiling', 'transpose_ceiling'):
            value = getattr(self, name)
            if not 0 <= value <= MAX_N:
                raise ConfigError(f"{name}={value} outside 0..{MAX_N}")
        if not 0 <= self.binomial_ceiling <= MAX_N:
            raise ConfigError(f"binomial_ceiling={self.binomial_ceiling} outside 0..{MAX_N}")
        if not 0 <= self.q_ceiling <= self.q_sample_ceiling:
            raise ConfigError("q_ceiling must lie between 0 and q_sample_ceiling")
        if self.q_binomial_ceiling < 0:
            raise ConfigError("q_binomial_ceiling must be >= 0")
        if not self.weights:
            raise ConfigError("empty weight selection")
        for k in self.weights:
            if k % 2 or k < 4:
                raise ConfigError(f"weight {k} must be even and >= 4")
            if k > self.weight_ceiling:
                raise ConfigError(f"weight {k} exceeds the ceiling {self.weight_ceiling}")
        if self.truncation < 10:
            raise ConfigError("truncation must be >= 10")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.samples < 1 or self.jobs < 1:
            raise ConfigError("samples and jobs must be >= 1")
        return self

    def echo(self) -> dict:
        """The configuration as it appears in reports; `jobs` and `timings` do not change results."""
        doc = asdict(self)
        for name in ('jobs', 'timings'):
            doc.pop(name)
        for f in fields(self):
            if isinstance(doc.get(f.name), tuple):
                doc[f.name] = list(doc[f.name])
        return doc
