"""Working-precision policy and upper-bound radius arithmetic.

All high-precision values are mpmath mpf/mpc computed at ``working_bits``.
Error radii ride along as plain floats; every operation on radii rounds
upward (multiplies in a small slack factor), so a radius is always a valid
upper bound even though float arithmetic itself rounds to nearest.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass

import mpmath
from mpmath import mp

# Slack applied to every radius operation so float rounding cannot shave
# an upper bound.
_UP = 1.0 + 2.0 ** -30
_TINY = 5e-324


def up(x: float) -> float:
    """Round a nonnegative bound upward."""
    if x == 0.0:
        return 0.0
    return x * _UP + _TINY


def rad_add(*rs: float) -> float:
    return up(sum(rs))


def rad_scale(r: float, factor: float) -> float:
    return up(r * abs(factor))


@dataclass(frozen=True)
class PrecisionPolicy:
    """Working precision (bits) and the certified output target.

    The working precision must leave at least 64 guard bits above the
    target so that rounding never eats into certified digits.
    """

    working_bits: int = 256
    target_bits: int = 128

    def __post_init__(self):
        if self.working_bits < self.target_bits + 64:
            raise ValueError(
                f"working_bits={self.working_bits} must be >= target_bits+64={self.target_bits + 64}"
            )

    def escalate(self, factor: float = 1.5) -> "PrecisionPolicy":
        return PrecisionPolicy(int(self.working_bits * factor) + 32, self.target_bits)

    @property
    def decimal_digits(self) -> int:
        return int(self.target_bits * 0.30103) + 2


DEFAULT_POLICY = PrecisionPolicy()


@contextlib.contextmanager
def workbits(bits: int):
    """Temporarily set mpmath binary precision."""
    old = mp.prec
    mp.prec = bits
    try:
        yield
    finally:
        mp.prec = old


def ensure_bits(minimum: int = 192):
    """Raise mpmath precision to at least ``minimum`` bits (never lower it).

    Public entry points use this so that calling them from an unconfigured
    context cannot silently degrade to double precision.
    """
    return workbits(max(mp.prec, minimum))


def rounding_radius(value, terms: int = 1) -> float:
    """Crude bound for accumulated rounding in ``terms`` operations at mp.prec."""
    mag = abs(value)
    scale = float(mpmath.mpf(2) ** (8 - mp.prec))
    return up(float(mag) * scale * max(terms, 1))


def to_decimal_string(x, digits: int) -> str:
    """Deterministic decimal rendering used in all file outputs."""
    return mpmath.nstr(x, digits, strip_zeros=False)
