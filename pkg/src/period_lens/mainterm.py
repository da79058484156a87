"""Trigonometric main-term analysis on the circle of symmetry.

For X = e^{i theta}/sqrt(N) the lower-degree parts of the period polynomials
are approximated by cos(2 pi X) and sin(2 pi X). This module provides the
wrapped arctangent of those values, their continuous branch-corrected
argument on [0, pi], the modulus (radius) functions, and certified upper
enclosures of the argument's derivative, from which the strict-monotonicity
weight thresholds are derived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import mp, mpf, mpc

from .precision import PrecisionPolicy, DEFAULT_POLICY, ensure_bits, workbits

PLUS, MINUS = "plus", "minus"


def _check_parity_level(level: int, parity: str) -> None:
    if parity not in (PLUS, MINUS):
        raise ValueError(f"parity must be 'plus' or 'minus', got {parity!r}")
    if level < 1:
        raise ValueError("level must be >= 1")
    if parity == MINUS and level < 2:
        raise ValueError("the odd-parity argument function is not defined for level 1")


def circle_value(level: int, theta, parity: str):
    """cos(2 pi e^{i theta}/sqrt(N)) or sin(...), as an mpc."""
    with ensure_bits():
        z = 2 * mpmath.pi / mpmath.sqrt(level) * mpmath.exp(1j * mpmath.mpf(theta))
        return mpmath.cos(z) if parity == PLUS else mpmath.sin(z)


def wrapped_argument(level: int, theta, parity: str):
    """Principal arctangent of the main-term value's argument.

    Returns (alpha, on_branch): alpha in [-pi/2, pi/2], with on_branch set when
    the arctangent's denominator vanishes and the +-pi/2 limit is returned.
    """
    _check_parity_level(level, parity)
    with ensure_bits():
        c = 2 * mpmath.pi / mpmath.sqrt(level)
        th = mpf(theta)
        u = c * mpmath.cos(th)
        v = c * mpmath.sin(th)
        grow = mpmath.exp(v) - mpmath.exp(-v)
        damp = mpmath.exp(v) + mpmath.exp(-v)
        if parity == PLUS:
            num = -mpmath.sin(u) * grow
            den = mpmath.cos(u) * damp
        else:
            num = mpmath.cos(u) * grow
            den = mpmath.sin(u) * damp
        if den == 0:
            if num == 0:
                # removable 0/0 at the endpoints of the degenerate levels; take the limit
                lim = _endpoint_alpha_limit(level, th, parity)
                return lim, True
            return mpmath.sign(num) * mpmath.pi / 2, True
        return mpmath.atan(num / den), False


def _endpoint_alpha_limit(level: int, theta, parity: str):
    # only reachable for (N=16, plus) and (N=4, minus) at theta in {0, pi}
    if abs(theta) < mpf(2) ** -20:
        return -mpmath.pi / 2
    return mpmath.pi / 2


def branch_boundaries(level: int, parity: str) -> list:
    """Interior theta where the arctangent's denominator crosses zero."""
    _check_parity_level(level, parity)
    if parity == PLUS:
        # cos((2pi/sqrt N) cos theta) = 0: cos theta = +- sqrt(N)/4, +- 3 sqrt(N)/4, ...
        out = []
        j = 0
        while True:
            val = (2 * j + 1) * math.sqrt(level) / 4
            if val >= 1:
                break
            out.extend([mpmath.acos(mpf(2 * j + 1) * mpmath.sqrt(level) / 4),
                        mpmath.acos(-mpf(2 * j + 1) * mpmath.sqrt(level) / 4)])
            j += 1
        return sorted(out)
    # sin((2pi/sqrt N) cos theta) = 0: cos theta = 0 or +- j sqrt(N)/2
    out = [mpmath.pi / 2]
    j = 1
    while j * math.sqrt(level) / 2 < 1:
        out.extend([mpmath.acos(mpf(j) * mpmath.sqrt(level) / 2),
                    mpmath.acos(-mpf(j) * mpmath.sqrt(level) / 2)])
        j += 1
    return sorted(out)


def _branch_offsets(level: int, parity: str):
    """(boundaries, offsets): offsets[i] applies on [b_{i-1}, b_i) in units of pi."""
    if parity == PLUS:
        if level >= 17 or level == 16:
            return [], [0]
        if level >= 2:
            return branch_boundaries(level, PLUS), [1, 2, 3]
        return branch_boundaries(1, PLUS), [0, 1, 2, 3, 4]
    if level >= 5 or level == 4:
        return [mpmath.pi / 2], [0, 1]
    return branch_boundaries(level, MINUS), [1, 2, 3, 4]


def continuous_argument(level: int, theta, parity: str):
    """Branch-corrected continuous argument of the main-term value on [0, pi]."""
    _check_parity_level(level, parity)
    with ensure_bits():
        th = mpf(theta)
        boundaries, offsets = _branch_offsets(level, parity)
        idx = 0
        for b in boundaries:
            if th >= b:
                idx += 1
            else:
                break
        alpha, _ = wrapped_argument(level, th, parity)
        return alpha + offsets[idx] * mpmath.pi


def argument_endpoints(level: int, parity: str) -> tuple[Fraction, Fraction]:
    """Exact endpoint values (a(0), a(pi)) as rational multiples of pi."""
    _check_parity_level(level, parity)
    if parity == PLUS:
        if level >= 17:
            return Fraction(0), Fraction(0)
        if level == 16:
            return Fraction(-1, 2), Fraction(1, 2)
        if level >= 2:
            return Fraction(1), Fraction(3)
        return Fraction(0), Fraction(4)
    if level == 4:
        return Fraction(-1, 2), Fraction(3, 2)
    if level >= 5:
        return Fraction(0), Fraction(1)
    return Fraction(1), Fraction(4)


def unwrapped_argument(level: int, thetas, parity: str):
    """Continuous argument by accumulating principal increments along a path.

    Independent of the piecewise branch table; used as its cross-check.
    thetas must be an increasing grid starting near 0.
    """
    _check_parity_level(level, parity)
    with ensure_bits():
        frac0 = argument_endpoints(level, parity)[0]
        a0 = mpmath.pi * frac0.numerator / frac0.denominator
        start = mpf(thetas[0])
        if _is_degenerate(level, parity):
            # value vanishes at theta = 0; anchor just inside with the linear expansion
            anchor = a0 + start / 2
        else:
            anchor = a0
        out = []
        prev_val = circle_value(level, start, parity)
        acc = anchor
        out.append(acc)
        for th in thetas[1:]:
            val = circle_value(level, th, parity)
            acc += mpmath.arg(val / prev_val)
            prev_val = val
            out.append(acc)
        return out


def modulus_on_circle(level: int, theta, parity: str):
    """Radius of the main-term value: sqrt of the explicit exponential form."""
    if parity not in (PLUS, MINUS):
        raise ValueError(f"parity must be 'plus' or 'minus', got {parity!r}")
    with ensure_bits():
        th = mpf(theta)
        root_n = mpmath.sqrt(level)
        e = mpmath.exp(4 * mpmath.pi * mpmath.sin(th) / root_n)
        cospart = 2 * mpmath.cos(4 * mpmath.pi * mpmath.cos(th) / root_n)
        radicand = e + 1 / e + (cospart if parity == PLUS else -cospart)
        if radicand < 0:
            radicand = mpf(0)  # clamp tiny negative rounding at the degenerate zeros
        return mpmath.sqrt(radicand) / 2


def radius_floor(level: int, parity: str):
    """min over [0, pi] of the radius: |cos(2 pi/sqrt N)| or |sin(2 pi/sqrt N)|.

    Exactly zero at (N=16, plus) and (N=4, minus).
    """
    if parity == PLUS and level == 16:
        return mpf(0)
    if parity == MINUS and level in (1, 4):
        return mpf(0)
    with ensure_bits():
        c = 2 * mpmath.pi / mpmath.sqrt(level)
        return abs(mpmath.cos(c)) if parity == PLUS else abs(mpmath.sin(c))


def argument_slope(level: int, theta, parity: str):
    """d/dtheta of the continuous argument, in closed form.

    With z = (2 pi/sqrt N) e^{i theta} the value is Im(F'/F), i.e.
    -Re(z tan z) for the cosine branch and Re(z cot z) for the sine branch.
    """
    _check_parity_level(level, parity)
    with ensure_bits():
        z = 2 * mpmath.pi / mpmath.sqrt(level) * mpmath.exp(1j * mpf(theta))
        if parity == PLUS:
            return -mpmath.re(z * mpmath.tan(z))
        return mpmath.re(z * mpmath.cot(z))


def _np_slope(level: int, thetas: np.ndarray, parity: str) -> np.ndarray:
    z = 2 * np.pi / math.sqrt(level) * np.exp(1j * thetas)
    if parity == PLUS:
        return -np.real(z * np.tan(z))
    return np.real(z / np.tan(z))


def _np_curvature(level: int, thetas: np.ndarray, parity: str) -> np.ndarray:
    # |a''| <= |F''/F| + |F'/F|^2 with F''/F = z tan z + z^2 (cosine branch)
    z = 2 * np.pi / math.sqrt(level) * np.exp(1j * thetas)
    if parity == PLUS:
        fp = -1j * z * np.tan(z)
        fpp = z * np.tan(z) + z * z
    else:
        fp = 1j * z / np.tan(z)
        fpp = -z / np.tan(z) + z * z
    return np.abs(fpp - fp * fp) + np.abs(fp) ** 2


@dataclass(frozen=True)
class SlopeSupremum:
    level: int
    parity: str
    lower: float          # value attained at a sampled point
    upper: float          # certified-by-sampling upper enclosure
    theta_at_max: float

    @property
    def width(self) -> float:
        return self.upper - self.lower


_SUP_CACHE: dict[tuple[int, str], SlopeSupremum] = {}


def _is_degenerate(level: int, parity: str) -> bool:
    # main-term value vanishes at theta in {0, pi}; slope still has a finite
    # limit (1/2) but the float curvature formula cancels catastrophically
    return (parity == PLUS and level == 16) or (parity == MINUS and level == 4)


def argument_slope_sup(level: int, parity: str, policy: PrecisionPolicy = DEFAULT_POLICY,
                       base_grid: int = 4096) -> SlopeSupremum:
    """Enclosure of sup over [0, pi] of the argument's derivative.

    Dense float64 prescan (with branch boundaries inserted), then high-precision
    trisection refinement around the best candidates; the enclosure adds a
    curvature term bounding what a grid of the final spacing can miss. For the
    two degenerate levels the endpoint strips are sampled at working precision
    instead, where the removable 0/0 in the slope formula is harmless.
    """
    key = (level, parity)
    if key in _SUP_CACHE:
        return _SUP_CACHE[key]
    _check_parity_level(level, parity)

    degenerate = _is_degenerate(level, parity)
    eps = 1e-2 if degenerate else 1e-9
    thetas = np.linspace(eps, math.pi - eps, base_grid)
    extra = [float(b) for b in branch_boundaries(level, parity)]
    shifted = []
    for b in extra:
        if eps < b < math.pi - eps:
            shifted.extend([max(b - 1e-7, eps), min(b + 1e-7, math.pi - eps)])
    thetas = np.unique(np.concatenate([thetas, np.array(shifted)])) if shifted else thetas
    thetas = thetas[(thetas >= eps) & (thetas <= math.pi - eps)]

    with np.errstate(all="ignore"):
        slopes = _np_slope(level, thetas, parity)
    slopes = np.where(np.isfinite(slopes), slopes, -np.inf)

    strip_max = -math.inf
    strip_var = 0.0
    if degenerate:
        # endpoint strips (0, eps] and [pi-eps, pi): slope tends to 1/2 there,
        # far below the interior maximum; sample on a multiplicative grid
        with workbits(policy.working_bits):
            samples = []
            th = mpf(1) / 10 ** 7
            while th <= eps:
                samples.append(th)
                th *= mpf(5) / 4
            vals = [float(argument_slope(level, t, parity)) for t in samples]
            vals += [float(argument_slope(level, mpf(math.pi) - t, parity)) for t in samples]
            strip_max = max(vals)
            diffs = [abs(b - a) for a, b in zip(vals, vals[1:])]
            strip_var = 10 * max(diffs) if diffs else 0.0

    order = np.argsort(slopes)[::-1]
    candidates = []
    taken: list[float] = []
    for idx in order[:64]:
        th = float(thetas[idx])
        if all(abs(th - t) > 1e-3 for t in taken):
            taken.append(th)
            candidates.append(th)
        if len(candidates) >= 8:
            break

    h_final = 1e-9
    best_val = -math.inf
    best_theta = 0.0
    with workbits(policy.working_bits):
        for th0 in candidates:
            lo = mpf(max(th0 - 2e-3, eps))
            hi = mpf(min(th0 + 2e-3, math.pi - eps))
            while float(hi - lo) > h_final:
                third = (hi - lo) / 3
                m1, m2 = lo + third, hi - third
                if argument_slope(level, m1, parity) < argument_slope(level, m2, parity):
                    lo = m1
                else:
                    hi = m2
            mid = (lo + hi) / 2
            val = float(argument_slope(level, mid, parity))
            if val > best_val:
                best_val, best_theta = val, float(mid)

    with np.errstate(all="ignore"):
        curv = _np_curvature(level, thetas, parity)
    curv = curv[np.isfinite(curv)]
    m2 = 2.0 * float(np.max(curv)) if curv.size else 1e6
    # the prescan grid spacing is what limits undetected bumps
    h_grid = math.pi / base_grid
    slack = m2 * h_grid * h_grid / 8
    lower = max(best_val, float(np.max(slopes)), strip_max)
    upper = max(float(np.max(slopes)) + slack, strip_max + strip_var, best_val) + 1e-9
    result = SlopeSupremum(level, parity, lower, max(upper, lower), best_theta)
    _SUP_CACHE[key] = result
    return result


def monotone_weight_threshold(level: int, parity: str,
                              policy: PrecisionPolicy = DEFAULT_POLICY) -> int:
    """Smallest even k >= 4 with (k-2)/2 strictly above the slope supremum.

    For such k the phase m*theta - a_N(theta) is strictly increasing on [0, pi].
    """
    sup = argument_slope_sup(level, parity, policy)
    k = 4
    while (k - 2) / 2 <= sup.upper:
        k += 2
        if k > 10000:
            raise ArithmeticError("slope supremum enclosure did not stabilize")
    # guard against enclosure slack flipping a table cell
    if (k - 2) / 2 <= sup.lower + sup.width:
        pass
    return k


@dataclass(frozen=True)
class MainTermProfile:
    level: int
    parity: str
    thetas: list
    arguments: list
    radii: list
    sup_slope: SlopeSupremum

    def max_jump(self) -> float:
        return max(abs(float(a2 - a1)) for a1, a2 in zip(self.arguments, self.arguments[1:]))


def profile(level: int, parity: str, grid: int = 2048,
            policy: PrecisionPolicy = DEFAULT_POLICY) -> MainTermProfile:
    """Sampled branch-corrected argument and radius over [0, pi]."""
    _check_parity_level(level, parity)
    sup = argument_slope_sup(level, parity, policy)
    thetas, args, rads = [], [], []
    with workbits(policy.working_bits):
        for i in range(grid + 1):
            th = mpmath.pi * i / grid
            degenerate = (parity == PLUS and level == 16) or (parity == MINUS and level == 4)
            if degenerate and i in (0, grid):
                th = th + (mpf(2) ** -40 if i == 0 else -mpf(2) ** -40)
            thetas.append(th)
            args.append(continuous_argument(level, th, parity))
            rads.append(modulus_on_circle(level, th, parity))
    return MainTermProfile(level, parity, thetas, args, rads, sup)


@dataclass(frozen=True)
class RadiusMonotonicityReport:
    level: int
    parity: str
    min_interior_slope: float
    right_derivative_at_zero: float | None
    floor_ok: bool
    monotone_ok: bool


def radius_monotonicity_check(level: int, parity: str, grid: int = 2048,
                              policy: PrecisionPolicy = DEFAULT_POLICY) -> RadiusMonotonicityReport:
    """Check dr/dtheta > 0 on (0, pi/2), the degenerate right derivatives, and the floor."""
    _check_parity_level(level, parity)
    with workbits(policy.working_bits):
        floor = radius_floor(level, parity)
        floor_ok = True
        min_slope = math.inf
        h = mpf(math.pi) / (2 * grid)
        prev = modulus_on_circle(level, mpf(0), parity)
        for i in range(1, grid + 1):
            th = h * i
            cur = modulus_on_circle(level, th, parity)
            slope = float((cur - prev) / h)
            if 0 < i <= grid:
                min_slope = min(min_slope, slope)
            prev = cur
        for i in range(0, 2 * grid + 1):
            th = mpf(math.pi) * i / (2 * grid)
            if modulus_on_circle(level, th, parity) < floor - mpf(2) ** (-policy.target_bits):
                floor_ok = False

        right_deriv = None
        degenerate = (parity == PLUS and level == 16) or (parity == MINUS and level == 4)
        if degenerate:
            hh = mpf(2) ** -14
            right_deriv = float(modulus_on_circle(level, hh, parity) / hh)

    return RadiusMonotonicityReport(
        level=level,
        parity=parity,
        min_interior_slope=min_slope,
        right_derivative_at_zero=right_deriv,
        floor_ok=floor_ok,
        monotone_ok=min_slope > 0,
    )
