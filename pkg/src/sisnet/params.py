"""SIS model parameters and adoption-rule names."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidArgumentError

NON_MONOPHILIC = "non-monophilic"
MONOPHILIC = "monophilic"
RULES = (NON_MONOPHILIC, MONOPHILIC)


def check_rule(rule):
    if rule not in RULES:
        raise InvalidArgumentError("rule must be one of %s, got %r" % (RULES, rule))
    return rule


def check_sampler(sampler):
    if sampler not in ("X", "Y", "Z"):
        raise InvalidArgumentError("sampler must be 'X', 'Y' or 'Z', got %r" % (sampler,))
    return sampler


@dataclass(frozen=True)
class SisParams:
    """Infection scale ``nu``, recovery probability ``delta`` and max degree ``D``.

    A susceptible node that observes ``a`` infected agents is infected with
    probability ``nu * a / D``; an infected node recovers with probability
    ``delta``. ``delta = 0`` is allowed so that, with ``nu = 0``, the
    population state can be held fixed.
    """

    nu: float
    delta: float
    max_degree: int

    def __post_init__(self):
        if not 0.0 <= self.nu <= 1.0:
            raise InvalidArgumentError("nu must lie in [0, 1]")
        if not 0.0 <= self.delta <= 1.0:
            raise InvalidArgumentError("delta must lie in [0, 1]")
        if int(self.max_degree) < 1:
            raise InvalidArgumentError("max_degree must be >= 1")

    @property
    def lam(self):
        """Effective spreading rate ``nu / delta`` (infinite when ``delta = 0``)."""
        return self.nu / self.delta if self.delta > 0 else float("inf")

    @classmethod
    def from_lambda(cls, lam, max_degree, nu=1.0):
        """Parameters with rate ``lam``, keeping ``nu`` unless that forces ``delta > 1``."""
        if lam <= 0:
            raise InvalidArgumentError("lambda must be positive")
        if nu / lam <= 1.0:
            return cls(nu, nu / lam, max_degree)
        return cls(lam, 1.0, max_degree)
