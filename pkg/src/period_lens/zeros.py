"""Sign-change engine: certified counts of period-polynomial zeros on the circle.

On the upper half circle X = e^{i theta}/sqrt(N) the relevant real target is
the real or imaginary part (fixed by the Fricke sign) of

    W(theta) = e^{i m theta} q(conj(X)),

whose main term is radius * sin/cos of the phase m*theta - a_N(theta). When
the phase is certified strictly increasing, each crossing of the alternation
lattice pins a probe point; certified alternating signs of the target at the
probes give a lower bound on the number of zeros, doubled by conjugation
symmetry and completed by the endpoint multiplicities at +-1/sqrt(N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import mpf, mpc

from . import golden
from .lfunction import LValueTable, build_l_table
from .mainterm import (PLUS, MINUS, argument_endpoints, argument_slope_sup,
                       continuous_argument, modulus_on_circle)
from .newforms import Newform
from .periodpoly import PeriodPolynomial, build_even, build_odd, build_q, derivative, evaluate
from .precision import PrecisionPolicy, DEFAULT_POLICY, up, workbits
from .roots import all_roots, classify, ON_CIRCLE, ORIGIN

ROUTE_MAIN, ROUTE_ORACLE, ROUTE_BOTH = "main_term", "oracle", "both"


@dataclass(frozen=True)
class SignProbe:
    phase_over_pi: Fraction          # target value of (m theta - a(theta))/pi
    theta: float
    value: float
    radius: float
    certified: bool
    kind: str = "lattice"            # "lattice" | "extra"

    @property
    def margin(self) -> float:
        return abs(self.value) - self.radius


@dataclass(frozen=True)
class SignSequence:
    probes: tuple
    changes: int
    all_certified: bool

    def min_margin(self) -> float:
        return min((p.margin for p in self.probes), default=float("inf"))


@dataclass(frozen=True)
class EndpointReport:
    point: str                       # "+1/sqrt(N)" | "-1/sqrt(N)"
    multiplicity: int
    structural: bool                 # forced by the functional equation
    value_abs: float
    value_radius: float
    derivative_abs: float
    derivative_radius: float
    inconclusive: bool = False


@dataclass(frozen=True)
class ZeroVerdict:
    label: str | None
    level: int
    weight: int
    fricke_sign: int
    parity: str
    degree: int
    on_circle_count: int
    exceptional_upper_bound: int
    endpoint_multiplicities: tuple
    certified: bool
    route: str
    predicted_on_circle: int | None
    predicted_exceptional_max: int | None
    sign_sequence: SignSequence | None = field(default=None, compare=False)
    notes: tuple = ()

    def consistent(self) -> bool:
        return self.on_circle_count + self.exceptional_upper_bound == self.degree


class MainTermUnavailable(ValueError):
    """The odd-parity argument function has no level-1 branch table."""


def _target_parts(parity: str, fricke: int) -> str:
    # which real part of W carries the zeros
    if parity == PLUS:
        return "im" if fricke == 1 else "re"
    return "re" if fricke == 1 else "im"


def target_value(q_poly: PeriodPolynomial, theta, policy: PrecisionPolicy = DEFAULT_POLICY):
    """(value, radius) of the real target at theta, plus the complex W for audits."""
    ctx = q_poly.context
    with workbits(policy.working_bits):
        conj_x = mpmath.exp(-1j * mpf(theta)) / mpmath.sqrt(ctx.level)
        qv, q_rad = evaluate(q_poly, conj_x)
        w_val = mpmath.exp(1j * ctx.m * mpf(theta)) * qv
    part = _target_parts(q_poly.parity, ctx.fricke_sign)
    val = mpmath.im(w_val) if part == "im" else mpmath.re(w_val)
    radius = up(q_rad + float(abs(w_val)) * 2.0 ** (-policy.working_bits + 8))
    return val, radius, w_val


def main_term_value(level: int, weight: int, theta, parity: str, fricke: int):
    """radius(theta) * sin or cos of the phase, the trig skeleton of the target."""
    m = (weight - 2) // 2
    phase = m * mpf(theta) - continuous_argument(level, theta, parity)
    r = modulus_on_circle(level, theta, parity)
    part = _target_parts(parity, fricke)
    return r * (mpmath.sin(phase) if part == "im" else mpmath.cos(phase))


def _phase_endpoints(level: int, weight: int, parity: str) -> tuple[Fraction, Fraction]:
    m = (weight - 2) // 2
    a0, a_pi = argument_endpoints(level, parity)
    return -a0, m - a_pi  # in units of pi


def _lattice_targets(phi0: Fraction, phi1: Fraction, part: str) -> list[Fraction]:
    """Alternation-lattice values strictly inside (phi0, phi1), in units of pi."""
    out = []
    if part == "im":
        # half-integers j + 1/2
        j = math.floor(phi0 - Fraction(1, 2)) + 1
        while Fraction(j) + Fraction(1, 2) < phi1:
            t = Fraction(j) + Fraction(1, 2)
            if t > phi0:
                out.append(t)
            j += 1
    else:
        j = math.floor(phi0) + 1
        while Fraction(j) < phi1:
            if Fraction(j) > phi0:
                out.append(Fraction(j))
            j += 1
    return out


def _extra_targets(level: int, parity: str, fricke: int, weight: int,
                   phi0: Fraction, phi1: Fraction) -> list[Fraction]:
    """The probes protecting the vanishing-floor levels near the endpoints."""
    m = (weight - 2) // 2
    out = []
    if parity == PLUS and level == 16 and fricke == 1:
        out = [Fraction(3, 4), Fraction(m) - Fraction(3, 4)]
    if parity == MINUS and level == 4 and fricke == -1:
        out = [Fraction(3, 4), Fraction(m - 1) - Fraction(3, 4)]
    return [t for t in out if phi0 < t < phi1]


def _solve_phase(level: int, weight: int, parity: str, target_over_pi: Fraction,
                 policy: PrecisionPolicy) -> mpmath.mpf:
    """Invert the strictly increasing phase by bisection."""
    m = (weight - 2) // 2

    def phase(th):
        return m * th - continuous_argument(level, th, parity)

    with workbits(policy.working_bits):
        target = mpmath.pi * target_over_pi.numerator / target_over_pi.denominator
        lo, hi = mpf(2) ** -60, mpmath.pi - mpf(2) ** -60
        if not (phase(lo) < target < phase(hi)):
            raise ValueError(f"phase target {target_over_pi} pi out of range")
        tol = mpf(2) ** (-policy.working_bits // 2)
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if phase(mid) < target:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2


def endpoint_reports(poly: PeriodPolynomial,
                     policy: PrecisionPolicy = DEFAULT_POLICY,
                     sharper_poly=None) -> tuple[EndpointReport, EndpointReport]:
    """Endpoint-zero reports for an even/odd polynomial at X = +-1/sqrt(N).

    The functional equation forces vanishing for (even, fricke +1) and
    (odd, fricke -1); in the two cross cases a certified vanishing is
    automatically a double zero. ``sharper_poly`` optionally supplies a
    rebuilt polynomial at escalated precision for near-zero candidates.
    """
    parity = poly.parity
    if parity is None:
        raise ValueError("endpoint analysis applies to the even/odd polynomials")
    fricke = poly.context.fricke_sign
    structural = (parity == PLUS and fricke == 1) or (parity == MINUS and fricke == -1)
    return tuple(
        _one_endpoint(poly, sign, name, structural, policy, sharper_poly)
        for sign, name in ((1, "+1/sqrt(N)"), (-1, "-1/sqrt(N)"))
    )


def endpoint_multiplicity(nf: Newform, parity: str,
                          table: LValueTable | None = None,
                          policy: PrecisionPolicy = DEFAULT_POLICY) -> tuple[EndpointReport, EndpointReport]:
    """Multiplicity (0, 1, or 2) of the zero at X = +1/sqrt(N) and -1/sqrt(N)."""
    if table is None:
        table = build_l_table(nf, policy)
    build = build_even if parity == PLUS else build_odd

    def sharper_poly(sharper: PrecisionPolicy) -> PeriodPolynomial:
        return build(nf, build_l_table(nf, sharper), sharper)

    return endpoint_reports(build(nf, table, policy), policy, sharper_poly)


def _one_endpoint(poly, sign, name, structural, policy, sharper_poly) -> EndpointReport:
    dpoly = derivative(poly)
    level = poly.context.level
    with workbits(policy.working_bits):
        x0 = mpf(sign) / mpmath.sqrt(level)
        v, v_rad = evaluate(poly, x0)
        dv, dv_rad = evaluate(dpoly, x0)
    norm = poly.coefficient_norm()
    near_zero_threshold = norm * 2.0 ** (-policy.target_bits // 4)

    def looks_zero(val, rad):
        return float(abs(val)) < max(rad, near_zero_threshold)

    value_zero = structural or looks_zero(v, v_rad)
    if value_zero and not structural and sharper_poly is not None:
        sharper = policy.escalate()
        poly2 = sharper_poly(sharper)
        with workbits(sharper.working_bits):
            x0 = mpf(sign) / mpmath.sqrt(level)
            v2, v2_rad = evaluate(poly2, x0)
        value_zero = float(abs(v2)) < max(v2_rad, norm * 2.0 ** (-sharper.target_bits // 4))
        v, v_rad = v2, v2_rad

    if not value_zero:
        return EndpointReport(name, 0, False, float(abs(v)), v_rad,
                              float(abs(dv)), dv_rad)
    if structural:
        mult = 1
        inconclusive = looks_zero(dv, dv_rad)  # would mean an even deeper zero
        return EndpointReport(name, mult, True, float(abs(v)), v_rad,
                              float(abs(dv)), dv_rad, inconclusive)
    # cross case: certified vanishing forces a double zero; confirm the derivative
    deriv_zero = looks_zero(dv, dv_rad)
    return EndpointReport(name, 2, False, float(abs(v)), v_rad,
                          float(abs(dv)), dv_rad, inconclusive=not deriv_zero)


@dataclass(frozen=True)
class Prediction:
    on_circle_min: int
    exceptional_max: int
    source: str


def predicted_count(level: int, weight: int, fricke: int, parity: str) -> Prediction | None:
    """On-circle guarantee of the applicable theorem, or None outside all hypotheses."""
    w = weight - 2
    if parity == PLUS:
        if level >= 17:
            need = max(golden.reference_d_plus(level), golden.reference_k_plus(level))
            if weight >= need:
                return Prediction(w, 0, "even, large level")
            return None
        k_min, budget = golden.EXCEPTIONAL_BUDGET_PLUS[level]
        if weight >= k_min:
            return Prediction(w - budget, budget, "even, small level")
        return None
    if level >= 5:
        need = golden.reference_k_minus(level)
        if need is not None and weight >= need:
            return Prediction(w - 2, 1, "odd, large level")
        return None
    k_min, budget = golden.EXCEPTIONAL_BUDGET_MINUS[level]
    if weight >= k_min:
        return Prediction((w - 1) - budget, budget, "odd, small level")
    return None


def _heuristic_changes(q_poly: PeriodPolynomial, samples: int = 16384) -> int:
    """Uncertified sign-change count of the target from a dense float scan."""
    ctx = q_poly.context
    coeffs = np.array([complex(c) for c in q_poly.coefficients])
    thetas = np.linspace(1e-9, math.pi - 1e-9, samples)
    conj_x = np.exp(-1j * thetas) / math.sqrt(ctx.level)
    vals = np.zeros_like(conj_x)
    for c in coeffs[::-1]:
        vals = vals * conj_x + c
    w_vals = np.exp(1j * ctx.m * thetas) * vals
    part = _target_parts(q_poly.parity, ctx.fricke_sign)
    g = w_vals.imag if part == "im" else w_vals.real
    signs = np.sign(g)
    signs = signs[signs != 0]
    return int(np.sum(signs[1:] != signs[:-1]))


def _main_term_sequence(nf: Newform, q_poly: PeriodPolynomial,
                        policy: PrecisionPolicy) -> tuple[SignSequence, bool, list]:
    level, weight, fricke = nf.level, nf.weight, nf.fricke_sign
    parity = q_poly.parity
    m = (weight - 2) // 2
    notes = []

    sup = argument_slope_sup(level, parity, policy)
    monotone = m > sup.upper
    if not monotone:
        notes.append(f"phase not certified monotone: m={m} <= sup enclosure {sup.upper:.3f}")

    phi0, phi1 = _phase_endpoints(level, weight, parity)
    part = _target_parts(parity, fricke)
    targets = _lattice_targets(phi0, phi1, part)
    extras = _extra_targets(level, parity, fricke, weight, phi0, phi1)
    merged = sorted(set(targets) | set(extras))

    probes = []
    for t in merged:
        theta = _solve_phase(level, weight, parity, t, policy)
        val, rad, _ = target_value(q_poly, theta, policy)
        certified = abs(float(val)) > rad
        probes.append(SignProbe(
            phase_over_pi=t,
            theta=float(theta),
            value=float(val),
            radius=rad,
            certified=certified,
            kind="extra" if t in extras else "lattice",
        ))

    changes = 0
    prev = 0.0
    for p in probes:
        s = math.copysign(1.0, p.value) if p.value != 0 else 0.0
        if prev != 0.0 and s != 0.0 and s != prev:
            changes += 1
        if s != 0.0:
            prev = s
    all_cert = monotone and all(p.certified for p in probes)
    return SignSequence(tuple(probes), changes, all_cert), monotone, notes


def count_on_circle(nf: Newform, parity: str,
                    policy: PrecisionPolicy = DEFAULT_POLICY,
                    route: str = ROUTE_BOTH,
                    table: LValueTable | None = None) -> ZeroVerdict:
    """Certified verdict for the even or odd period polynomial of a newform."""
    if parity not in (PLUS, MINUS):
        raise ValueError(f"parity must be 'plus' or 'minus', got {parity!r}")
    if parity == PLUS and nf.weight < 4:
        raise ValueError("even parity requires weight >= 4")
    if parity == MINUS and nf.weight < 6:
        raise ValueError("odd parity requires weight >= 6 (lower weights are degenerate)")
    if route not in (ROUTE_MAIN, ROUTE_ORACLE, ROUTE_BOTH):
        raise ValueError(f"unknown route {route!r}")

    main_possible = not (parity == MINUS and nf.level == 1)
    if route == ROUTE_MAIN and not main_possible:
        raise MainTermUnavailable("no odd-parity argument function at level 1; use the oracle route")

    if table is None:
        table = build_l_table(nf, policy)
    parity_poly = build_even(nf, table, policy) if parity == PLUS else build_odd(nf, table, policy)
    q_poly = build_q(nf, table, parity, policy)
    degree = parity_poly.degree

    endpoints = endpoint_multiplicity(nf, parity, table, policy)
    endpoint_total = sum(e.multiplicity for e in endpoints)
    endpoints_ok = not any(e.inconclusive for e in endpoints)

    notes: list[str] = []
    seq = None
    main_count = None
    main_certified = False
    if route in (ROUTE_MAIN, ROUTE_BOTH) and main_possible:
        seq, monotone, mt_notes = _main_term_sequence(nf, q_poly, policy)
        notes.extend(mt_notes)
        if monotone:
            main_count = 2 * seq.changes + endpoint_total
            main_certified = seq.all_certified and endpoints_ok
        else:
            heur = _heuristic_changes(q_poly)
            main_count = 2 * heur + endpoint_total
            notes.append("dense-scan heuristic count; no monotonicity certificate")

    oracle_count = None
    oracle_certified = False
    if route in (ROUTE_ORACLE, ROUTE_BOTH):
        known = []
        with workbits(policy.working_bits):
            sqrt_n = mpmath.sqrt(nf.level)
            for e, sgn in zip(endpoints, (1, -1)):
                if e.multiplicity:
                    known.append((mpf(sgn) / sqrt_n, e.multiplicity))
            if parity == MINUS:
                known.append((mpf(0), 1))
        rs = classify(all_roots(parity_poly, policy, known_roots=known), nf.level, policy=policy)
        counts = rs.counts()
        oracle_count = counts[ON_CIRCLE]
        oracle_certified = rs.max_residual() <= parity_poly.coefficient_norm() * 2.0 ** (-policy.target_bits)
        if any(r.borderline for r in rs.roots):
            oracle_certified = False
            notes.append("borderline root classification")

    if route == ROUTE_MAIN:
        count, certified, used = main_count, main_certified, ROUTE_MAIN
    elif route == ROUTE_ORACLE:
        count, certified, used = oracle_count, oracle_certified, ROUTE_ORACLE
    else:
        if main_count is not None and oracle_count is not None and main_certified and oracle_certified:
            if main_count != oracle_count:
                notes.append(f"route disagreement: main {main_count} vs oracle {oracle_count}")
            count, certified, used = oracle_count, main_count == oracle_count, ROUTE_BOTH
        elif oracle_count is not None and oracle_certified:
            count, certified, used = oracle_count, True, ROUTE_ORACLE
        elif main_count is not None:
            count, certified, used = main_count, main_certified, ROUTE_MAIN
        else:
            count, certified, used = 0, False, route

    prediction = predicted_count(nf.level, nf.weight, nf.fricke_sign, parity)
    return ZeroVerdict(
        label=nf.label,
        level=nf.level,
        weight=nf.weight,
        fricke_sign=nf.fricke_sign,
        parity=parity,
        degree=degree,
        on_circle_count=count,
        exceptional_upper_bound=degree - count,
        endpoint_multiplicities=tuple(e.multiplicity for e in endpoints),
        certified=certified,
        route=used,
        predicted_on_circle=None if prediction is None else prediction.on_circle_min,
        predicted_exceptional_max=None if prediction is None else prediction.exceptional_max,
        sign_sequence=seq,
        notes=tuple(notes),
    )
