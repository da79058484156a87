"""Arbitrary-precision computation of all roots of a period polynomial.

Simultaneous Weierstrass/Durand-Kerner iteration from perturbed-circle
starting values, with residual certification against the original
coefficients (no deflation enters the certificate) and precision escalation
on stagnation. Known endpoint zeros may be deflated beforehand to keep
double roots from stalling the simultaneous iteration.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf, mpc

from .periodpoly import PeriodPolynomial, evaluate as poly_evaluate
from .precision import PrecisionPolicy, DEFAULT_POLICY, up, workbits

ON_CIRCLE, EXCEPTIONAL, ORIGIN = "on_circle", "exceptional", "origin"


class RootFindingError(ArithmeticError):
    pass


@dataclass(frozen=True)
class RootRecord:
    value: mpmath.mpc
    residual: float
    multiplicity: int
    classification: str | None = None
    conjugate_index: int | None = None
    borderline: bool = False


@dataclass(frozen=True)
class RootSet:
    polynomial_label: str | None
    level: int
    degree: int
    roots: tuple
    coefficient_norm: float

    def max_residual(self) -> float:
        return max((r.residual for r in self.roots), default=0.0)

    def counts(self) -> dict:
        out = {ON_CIRCLE: 0, EXCEPTIONAL: 0, ORIGIN: 0}
        for r in self.roots:
            if r.classification:
                out[r.classification] += r.multiplicity
        return out


def _horner(coeffs, x):
    acc = mpc(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _synthetic_divide(coeffs, root):
    """coeffs / (X - root); remainder discarded (root assumed accurate)."""
    out = [mpc(0)] * (len(coeffs) - 1)
    carry = mpc(0)
    for d in range(len(coeffs) - 1, 0, -1):
        carry = coeffs[d] + carry * root
        out[d - 1] = carry
    return out


def _initial_points(degree: int, radius: float):
    pts = []
    golden = 0.6180339887498949
    for j in range(degree):
        ang = 2 * mpmath.pi * (j * golden + 0.13)
        r = radius * (1 + mpf(1) / 4 + (j % 3) * mpf(1) / 50)
        pts.append(r * mpmath.exp(1j * ang))
    return pts


def _durand_kerner(coeffs, prec_bits: int, max_steps: int = 400):
    """All roots of the monic-normalized coefficient list, or None on stagnation."""
    degree = len(coeffs) - 1
    with workbits(prec_bits):
        lead = coeffs[-1]
        monic = [mpc(c) / lead for c in coeffs]
        cauchy = 1 + max(abs(c) for c in monic[:-1])
        start_radius = min(float(cauchy), 4.0)
        z = _initial_points(degree, start_radius * 0.8)
        tol = mpf(2) ** (-prec_bits + 12)
        for _ in range(max_steps):
            moved = mpf(0)
            for i in range(degree):
                num = _horner(monic, z[i])
                den = mpc(1)
                for j in range(degree):
                    if j != i:
                        den *= (z[i] - z[j])
                if den == 0:
                    z[i] = z[i] * (1 + mpf(1) / 997) + mpf(1) / 1009
                    moved = mpf(1)
                    continue
                step = num / den
                z[i] -= step
                moved = max(moved, abs(step))
            if moved < tol * max(1, max(abs(w) for w in z)):
                return [mpc(w) for w in z]
    return None


def all_roots(poly: PeriodPolynomial, policy: PrecisionPolicy = DEFAULT_POLICY,
              known_roots: list | None = None) -> RootSet:
    """Certified root set of a period polynomial.

    known_roots (value, multiplicity) are deflated before iteration; every
    reported root is still residual-checked against the original polynomial.
    Precision escalates until max |p(root)| <= 2^{-target} * ||p||.
    """
    degree = poly.degree
    if degree < 1:
        raise ValueError("constant polynomial has no roots to locate")
    lead = poly.coefficients[degree]
    if float(abs(lead)) <= poly.radii[degree]:
        raise RootFindingError("leading coefficient is not certified away from zero")

    norm = poly.coefficient_norm()
    target_residual = norm * 2.0 ** (-policy.target_bits // 1)

    work = list(poly.coefficients[: degree + 1])
    fixed: list[tuple[mpmath.mpc, int]] = []
    if known_roots:
        with workbits(policy.working_bits + 64):
            for value, mult in known_roots:
                for _ in range(mult):
                    work = _synthetic_divide(work, value)
                fixed.append((mpc(value), mult))

    bits = policy.working_bits
    for _attempt in range(5):
        found = _durand_kerner(work, bits) if len(work) > 1 else []
        if found is None:
            bits = int(bits * 1.6) + 32
            continue
        with workbits(bits):
            # a couple of Newton polish steps against the original polynomial
            deriv = [d * poly.coefficients[d] for d in range(1, degree + 1)]
            polished = []
            for z0 in found:
                z = z0
                for _ in range(3):
                    pv = _horner(poly.coefficients, z)
                    dv = _horner(deriv, z)
                    if dv == 0 or abs(pv) == 0:
                        break
                    step = pv / dv
                    if abs(step) > mpf(1) / 2:
                        break
                    z -= step
                polished.append(z)
            records = [(z, float(abs(_horner(poly.coefficients, z)))) for z in polished]
            for value, mult in fixed:
                res = float(abs(_horner(poly.coefficients, value)))
                records.extend([(value, res)] * mult)
        worst = max((r for _, r in records), default=0.0)
        if worst <= target_residual:
            break
        bits = int(bits * 1.6) + 32
    else:
        raise RootFindingError(
            f"simultaneous iteration failed to certify residuals below {target_residual:.3e}"
        )

    clustered = _cluster(records, policy)
    paired = _pair_conjugates(clustered)
    return RootSet(
        polynomial_label=poly.label,
        level=poly.context.level,
        degree=degree,
        roots=tuple(paired),
        coefficient_norm=norm,
    )


def _cluster(records, policy: PrecisionPolicy):
    """Merge numerically coincident roots into multiplicity clusters."""
    gap = 2.0 ** (-policy.target_bits // 3)
    out = []
    used = [False] * len(records)
    with workbits(policy.working_bits):
        for i, (z, res) in enumerate(records):
            if used[i]:
                continue
            members = [(z, res)]
            used[i] = True
            for j in range(i + 1, len(records)):
                if not used[j] and abs(records[j][0] - z) < gap * max(1.0, float(abs(z))):
                    members.append(records[j])
                    used[j] = True
            # singletons keep their polished value untouched
            center = z if len(members) == 1 else sum(w for w, _ in members) / len(members)
            out.append(RootRecord(
                value=center,
                residual=up(max(r for _, r in members)),
                multiplicity=len(members),
            ))
    return out


def _pair_conjugates(records):
    """Attach conjugate-pair indices (real-coefficient polynomials only)."""
    out = list(records)
    for i, r in enumerate(out):
        if r.conjugate_index is not None:
            continue
        if abs(float(mpmath.im(r.value))) < 1e-30:
            out[i] = RootRecord(r.value, r.residual, r.multiplicity, r.classification, i)
            continue
        target = mpmath.conj(r.value)
        best, best_gap = None, None
        for j in range(i + 1, len(out)):
            if out[j].conjugate_index is not None:
                continue
            gap = float(abs(out[j].value - target))
            if best is None or gap < best_gap:
                best, best_gap = j, gap
        if best is not None and best_gap < 1e-10 * max(1.0, float(abs(r.value))):
            out[i] = RootRecord(r.value, r.residual, r.multiplicity, r.classification, best)
            rb = out[best]
            out[best] = RootRecord(rb.value, rb.residual, rb.multiplicity, rb.classification, i)
        else:
            out[i] = RootRecord(r.value, r.residual, r.multiplicity, r.classification, i)
    return out


def classify(roots: RootSet, level: int, tol: float | None = None,
             policy: PrecisionPolicy = DEFAULT_POLICY) -> RootSet:
    """Partition roots into on-circle / origin / exceptional at |X| = 1/sqrt(N).

    tol defaults to max(1e-18, a perturbation estimate from the residuals);
    roots within 10x tol of the boundary are flagged borderline.
    """
    if tol is None:
        cond = max((r.residual for r in roots.roots), default=0.0) / max(roots.coefficient_norm, 1e-300)
        tol = max(1e-18, cond * 10)
    with workbits(policy.working_bits):
        sqrt_n = mpmath.sqrt(level)
        new = []
        for r in roots.roots:
            dist = float(abs(abs(r.value) * sqrt_n - 1))
            mag = float(abs(r.value))
            if mag < tol:
                cls = ORIGIN
            elif dist < tol:
                cls = ON_CIRCLE
            else:
                cls = EXCEPTIONAL
            borderline = cls == EXCEPTIONAL and dist < 10 * tol
            new.append(RootRecord(r.value, r.residual, r.multiplicity, cls, r.conjugate_index, borderline))
    return RootSet(roots.polynomial_label, level, roots.degree, tuple(new), roots.coefficient_norm)
