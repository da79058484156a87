"""Construction of the period polynomials from a table of critical L-values.

Coefficients are stored in the normalized scale, where the even part is
    sum_n (-1)^n (2 pi X)^{2n}/(2n)! L(f, w-2n+1)        (degrees 0..w, even)
and the odd part is
    sum_n (-1)^n (2 pi X)^{2n+1}/(2n+1)! L(f, w-2n)      (degrees 1..w-1, odd),
with w = k-2. The classical polynomials differ from these only by the global
scalars recorded in the ``scale`` metadata, so zero sets are unchanged. The
full polynomial is stored as even_part + i * odd_part, again up to a scalar.

Absent-parity coefficients are exact zeros by construction, never rounded
small values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
from mpmath import mpf, mpc

from .newforms import Newform
from .lfunction import LValueTable
from .precision import PrecisionPolicy, DEFAULT_POLICY, ensure_bits, rad_add, up, workbits

PLUS, MINUS = "plus", "minus"

KINDS = ("full", "even", "odd", "q_plus", "q_minus")


@dataclass(frozen=True)
class PeriodContext:
    level: int
    weight: int
    fricke_sign: int

    @property
    def w(self) -> int:
        return self.weight - 2

    @property
    def m(self) -> int:
        return (self.weight - 2) // 2

    @property
    def k_mod_4(self) -> int:
        return self.weight % 4

    def __post_init__(self):
        if self.weight % 2:
            raise ValueError("weight must be even")


@dataclass(frozen=True)
class PeriodPolynomial:
    kind: str
    context: PeriodContext
    coefficients: tuple        # index = degree; mpf for real kinds, mpc for full
    radii: tuple               # per-coefficient error radius (floats)
    scale: str = ""            # human-readable description of the omitted prefactor
    label: str | None = None

    @property
    def degree(self) -> int:
        d = len(self.coefficients) - 1
        while d > 0 and self.coefficients[d] == 0:
            d -= 1
        return d

    @property
    def parity(self) -> str | None:
        if self.kind in ("even", "q_plus"):
            return PLUS
        if self.kind in ("odd", "q_minus"):
            return MINUS
        return None

    def coefficient_norm(self) -> float:
        return max(float(abs(c)) for c in self.coefficients)


def _require_table(table: LValueTable, needed: list[int]) -> None:
    missing = [s for s in needed if not table.covers(s)]
    if missing:
        raise ValueError(f"L-value table does not cover s = {missing}")


def build_even(nf: Newform, table: LValueTable,
               policy: PrecisionPolicy = DEFAULT_POLICY) -> PeriodPolynomial:
    """Normalized even period polynomial; real coefficients at even degrees."""
    ctx = PeriodContext(nf.level, nf.weight, nf.fricke_sign)
    w = ctx.w
    _require_table(table, [w - 2 * n + 1 for n in range(w // 2 + 1)])
    coeffs = [mpf(0)] * (w + 1)
    radii = [0.0] * (w + 1)
    with workbits(policy.working_bits):
        two_pi = 2 * mpmath.pi
        for n in range(w // 2 + 1):
            factor = (-1) ** n * two_pi ** (2 * n) / mpmath.factorial(2 * n)
            coeffs[2 * n] = factor * table.value(w - 2 * n + 1)
            radii[2 * n] = up(float(abs(factor)) * table.radius(w - 2 * n + 1))
    return PeriodPolynomial(
        kind="even", context=ctx, coefficients=tuple(coeffs), radii=tuple(radii),
        scale="even part of the classical polynomial divided by (-1)^{w/2} (2 pi)^{-w-1} w!",
        label=nf.label,
    )


def build_odd(nf: Newform, table: LValueTable,
              policy: PrecisionPolicy = DEFAULT_POLICY) -> PeriodPolynomial:
    """Normalized odd period polynomial; real coefficients at odd degrees, zero at 0."""
    ctx = PeriodContext(nf.level, nf.weight, nf.fricke_sign)
    w = ctx.w
    _require_table(table, [w - 2 * n for n in range(w // 2)])
    coeffs = [mpf(0)] * (w + 1)
    radii = [0.0] * (w + 1)
    with workbits(policy.working_bits):
        two_pi = 2 * mpmath.pi
        for n in range(w // 2):
            factor = (-1) ** n * two_pi ** (2 * n + 1) / mpmath.factorial(2 * n + 1)
            coeffs[2 * n + 1] = factor * table.value(w - 2 * n)
            radii[2 * n + 1] = up(float(abs(factor)) * table.radius(w - 2 * n))
    coeffs = coeffs[:w] if w >= 1 else coeffs  # degree w-1
    radii = radii[:w] if w >= 1 else radii
    return PeriodPolynomial(
        kind="odd", context=ctx, coefficients=tuple(coeffs), radii=tuple(radii),
        scale="odd part of the classical polynomial divided by -(-1)^{w/2} (2 pi)^{-w-1} w!",
        label=nf.label,
    )


def build_q(nf: Newform, table: LValueTable, parity: str,
            policy: PrecisionPolicy = DEFAULT_POLICY) -> PeriodPolynomial:
    """Lower-degree part q of the normalized polynomial, by the weight-mod-4 case split.

    When the split lands on the central coefficient (degree w/2), that term
    carries the factor 1/2 and the central value L(f, k/2).
    """
    if parity not in (PLUS, MINUS):
        raise ValueError(f"parity must be 'plus' or 'minus', got {parity!r}")
    ctx = PeriodContext(nf.level, nf.weight, nf.fricke_sign)
    w, k = ctx.w, nf.weight
    coeffs = [mpf(0)] * (w // 2 + 1)
    radii = [0.0] * (w // 2 + 1)
    with workbits(policy.working_bits):
        two_pi = 2 * mpmath.pi
        if parity == PLUS:
            top = (w // 4 - 1) if k % 4 == 2 else (w - 2) // 4
            _require_table(table, [w - 2 * n + 1 for n in range(top + 1)])
            for n in range(top + 1):
                factor = (-1) ** n * two_pi ** (2 * n) / mpmath.factorial(2 * n)
                coeffs[2 * n] = factor * table.value(w - 2 * n + 1)
                radii[2 * n] = up(float(abs(factor)) * table.radius(w - 2 * n + 1))
            if k % 4 == 2:
                # halved central term at degree w/2, n = w/4
                n = w // 4
                _require_table(table, [k // 2])
                factor = (-1) ** n * two_pi ** (2 * n) / (2 * mpmath.factorial(2 * n))
                coeffs[2 * n] = factor * table.value(k // 2)
                radii[2 * n] = up(float(abs(factor)) * table.radius(k // 2))
            kind = "q_plus"
        else:
            top = (w - 6) // 4 if k % 4 == 0 else w // 4 - 1
            _require_table(table, [w - 2 * n for n in range(top + 1)])
            for n in range(top + 1):
                factor = (-1) ** n * two_pi ** (2 * n + 1) / mpmath.factorial(2 * n + 1)
                coeffs[2 * n + 1] = factor * table.value(w - 2 * n)
                radii[2 * n + 1] = up(float(abs(factor)) * table.radius(w - 2 * n))
            if k % 4 == 0:
                # halved central term at degree w/2, n = (w-2)/4
                n = (w - 2) // 4
                _require_table(table, [k // 2])
                factor = (-1) ** n * two_pi ** (2 * n + 1) / (2 * mpmath.factorial(2 * n + 1))
                coeffs[2 * n + 1] = factor * table.value(k // 2)
                radii[2 * n + 1] = up(float(abs(factor)) * table.radius(k // 2))
            kind = "q_minus"
    return PeriodPolynomial(
        kind=kind, context=ctx, coefficients=tuple(coeffs), radii=tuple(radii),
        scale="lower-degree part in the normalized scale", label=nf.label,
    )


def build_full(nf: Newform, table: LValueTable,
               policy: PrecisionPolicy = DEFAULT_POLICY) -> PeriodPolynomial:
    """Full period polynomial up to the scalar -(k-2)!/(2 pi i)^{k-1}.

    Stored coefficients are (2 pi i X)^n / n! * L(f, k-n-1); the even-degree
    part equals the normalized even polynomial and the odd-degree part is i
    times the normalized odd one.
    """
    ctx = PeriodContext(nf.level, nf.weight, nf.fricke_sign)
    w, k = ctx.w, nf.weight
    _require_table(table, list(range(1, k)))
    coeffs = [mpc(0)] * (w + 1)
    radii = [0.0] * (w + 1)
    with workbits(policy.working_bits):
        two_pi_i = 2j * mpmath.pi
        for n in range(w + 1):
            factor = two_pi_i ** n / mpmath.factorial(n)
            coeffs[n] = factor * table.value(k - n - 1)
            radii[n] = up(float(abs(factor)) * table.radius(k - n - 1))
    return PeriodPolynomial(
        kind="full", context=ctx, coefficients=tuple(coeffs), radii=tuple(radii),
        scale="classical full polynomial divided by -(k-2)!/(2 pi i)^{k-1}",
        label=nf.label,
    )


def evaluate(poly: PeriodPolynomial, x):
    """Horner evaluation with a propagated radius Sum r_d |x|^d."""
    with ensure_bits():
        acc = mpc(0) if poly.kind == "full" else mpf(0)
        for c in reversed(poly.coefficients):
            acc = acc * x + c
        ax = float(abs(x))
    rad, power = 0.0, 1.0
    for r in poly.radii:
        rad += r * power
        power *= ax
    return acc, up(rad)


def derivative(poly: PeriodPolynomial) -> PeriodPolynomial:
    coeffs = tuple(d * c for d, c in enumerate(poly.coefficients) if d >= 1)
    radii = tuple(up(d * r) for d, r in enumerate(poly.radii) if d >= 1)
    return PeriodPolynomial(
        kind=poly.kind, context=poly.context, coefficients=coeffs, radii=radii,
        scale=poly.scale + " (derivative)", label=poly.label,
    )


def functional_equation_residual(poly: PeriodPolynomial, theta) -> float:
    """Residual of the self-inversive relation at X = e^{i theta}/sqrt(N).

    full/even: g(X) + eps (sqrt(N) X)^w g(-1/(N X));
    odd:       g(X) - eps (sqrt(N) X)^w g(+1/(N X)).
    """
    ctx = poly.context
    with ensure_bits():
        x_pt = mpmath.exp(1j * mpf(theta)) / mpmath.sqrt(ctx.level)
        w, eps = ctx.w, ctx.fricke_sign
        factor = eps * (mpmath.sqrt(ctx.level) * x_pt) ** w
        if poly.kind in ("full", "even"):
            reflected = -1 / (ctx.level * x_pt)
            v1, _ = evaluate(poly, x_pt)
            v2, _ = evaluate(poly, reflected)
            return float(abs(v1 + factor * v2))
        if poly.kind == "odd":
            reflected = 1 / (ctx.level * x_pt)
            v1, _ = evaluate(poly, x_pt)
            v2, _ = evaluate(poly, reflected)
            return float(abs(v1 - factor * v2))
    raise ValueError(f"no functional equation for kind {poly.kind!r}")


def decomposition_residual(p_poly: PeriodPolynomial, q_poly: PeriodPolynomial, theta) -> float:
    """Residual of p(X) = q(X) -+ eps (sqrt(N) X)^w q(1/(N X)) at a circle point.

    Minus sign for the even pair, plus for the odd pair.
    """
    ctx = p_poly.context
    with ensure_bits():
        x_pt = mpmath.exp(1j * mpf(theta)) / mpmath.sqrt(ctx.level)
        w, eps = ctx.w, ctx.fricke_sign
        factor = eps * (mpmath.sqrt(ctx.level) * x_pt) ** w
        pv, _ = evaluate(p_poly, x_pt)
        qv, _ = evaluate(q_poly, x_pt)
        qref, _ = evaluate(q_poly, 1 / (ctx.level * x_pt))
        sign = -1 if p_poly.kind == "even" else 1
        return float(abs(pv - (qv + sign * factor * qref)))
