"""Newform data model, validation, and the local JSON file format.

A Newform is the sole external input of the pipeline: level, even weight,
Fricke sign, and Fourier coefficients, either exact rationals or decimal
strings of a fixed real embedding.
"""

from __future__ import annotations

import json
import os
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

import mpmath

from . import qseries

VALID_SOURCES = ("file", "generated", "lmfdb")


class NewformError(ValueError):
    """Raised when a newform record violates a structural invariant."""


class DelignewWarning(UserWarning):
    """Deligne bound violated on embedded (inexact) coefficient data."""


@dataclass(frozen=True)
class Newform:
    level: int
    weight: int
    fricke_sign: int
    fe_sign: int
    coeff_kind: str                      # "rational" | "embedded"
    an: tuple                            # Fraction (rational) or str (embedded), a(1) first
    label: str | None = None
    source: str = "file"
    precision_decimal_digits: int | None = None
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def n_coefficients(self) -> int:
        return len(self.an)

    @property
    def w(self) -> int:
        return self.weight - 2

    @property
    def m(self) -> int:
        return (self.weight - 2) // 2

    def a(self, n: int):
        """Coefficient a(n), exact Fraction or decimal string."""
        if not 1 <= n <= len(self.an):
            raise IndexError(f"coefficient a({n}) not available (have 1..{len(self.an)})")
        return self.an[n - 1]

    def a_mpf(self, n: int) -> mpmath.mpf:
        """Coefficient a(n) at the current mpmath precision."""
        v = self.a(n)
        if isinstance(v, Fraction):
            return mpmath.mpf(v.numerator) / v.denominator
        return mpmath.mpf(v)

    def is_exact(self) -> bool:
        return self.coeff_kind == "rational"


def expected_fe_sign(weight: int, fricke_sign: int) -> int:
    """Sign of the L-function functional equation: i^k * fricke for even k."""
    return fricke_sign if weight % 4 == 0 else -fricke_sign


def _check_deligne(nf: Newform) -> None:
    k = nf.weight
    if nf.is_exact():
        for p in _primes_up_to(nf.n_coefficients):
            ap = nf.an[p - 1]
            # |a(p)| <= 2 p^{(k-1)/2}, squared to stay in exact arithmetic
            if ap * ap > 4 * Fraction(p) ** (k - 1):
                raise NewformError(f"coefficient a({p}) = {ap} violates the Deligne bound")
    else:
        for p in _primes_up_to(nf.n_coefficients):
            ap = float(mpmath.mpf(nf.an[p - 1]))
            bound = 2.0 * p ** ((k - 1) / 2)
            if abs(ap) > bound * (1 + 1e-9):
                warnings.warn(
                    f"embedded coefficient a({p}) = {ap} exceeds the Deligne bound {bound}",
                    DelignewWarning,
                )


def _primes_up_to(m: int):
    sieve = bytearray([1]) * (m + 1)
    for p in range(2, m + 1):
        if sieve[p]:
            yield p
            for q in range(p * p, m + 1, p):
                sieve[q] = 0


def validate_newform(nf: Newform) -> Newform:
    if nf.level < 1:
        raise NewformError(f"level must be positive, got {nf.level}")
    if nf.weight < 4 or nf.weight % 2:
        raise NewformError(f"weight must be an even integer >= 4, got {nf.weight}")
    if nf.fricke_sign not in (1, -1):
        raise NewformError(f"fricke_sign must be +-1, got {nf.fricke_sign}")
    if nf.fe_sign != expected_fe_sign(nf.weight, nf.fricke_sign):
        raise NewformError(
            f"inconsistent sign triple: fe_sign={nf.fe_sign} but weight {nf.weight} "
            f"and fricke_sign {nf.fricke_sign} force {expected_fe_sign(nf.weight, nf.fricke_sign)}"
        )
    if nf.level == 4 and nf.fricke_sign != -1:
        raise NewformError("level-4 newforms have Fricke sign -1")
    if nf.level == 1 and nf.fricke_sign != 1:
        raise NewformError("level-1 forms have Fricke sign +1")
    if nf.coeff_kind not in ("rational", "embedded"):
        raise NewformError(f"unknown coeff_kind {nf.coeff_kind!r}")
    if nf.source not in VALID_SOURCES:
        raise NewformError(f"unknown source {nf.source!r}")
    if not nf.an:
        raise NewformError("empty coefficient list")
    if nf.coeff_kind == "embedded" and nf.precision_decimal_digits is None:
        raise NewformError("embedded coefficients must declare precision_decimal_digits")
    a1 = nf.an[0]
    if isinstance(a1, Fraction):
        if a1 != 1:
            raise NewformError(f"a(1) = {a1}, expected 1 (normalized newform)")
    else:
        if mpmath.mpf(a1) != 1:
            raise NewformError(f"a(1) = {a1}, expected 1 (normalized newform)")
    _check_deligne(nf)
    return nf


def _fraction_to_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _str_to_fraction(s: str) -> Fraction:
    return Fraction(s)


def serialize_newform(nf: Newform) -> str:
    """Render the canonical JSON file format (fixed field order)."""
    doc = {
        "label": nf.label,
        "level": nf.level,
        "weight": nf.weight,
        "fricke_sign": nf.fricke_sign,
        "fe_sign": nf.fe_sign,
        "coeff_kind": nf.coeff_kind,
    }
    if nf.coeff_kind == "embedded":
        doc["precision_decimal_digits"] = nf.precision_decimal_digits
    if nf.coeff_kind == "rational":
        doc["an"] = [_fraction_to_str(x) for x in nf.an]
    else:
        doc["an"] = list(nf.an)
    return json.dumps(doc, indent=1) + "\n"


def save_newform(nf: Newform, path: str | os.PathLike) -> None:
    Path(path).write_text(serialize_newform(nf), encoding="utf-8")


def newform_from_dict(doc: dict, source: str = "file") -> Newform:
    try:
        kind = doc["coeff_kind"]
        raw = doc["an"]
        if kind == "rational":
            an = tuple(_str_to_fraction(str(x)) for x in raw)
        else:
            an = tuple(str(x) for x in raw)
        nf = Newform(
            level=int(doc["level"]),
            weight=int(doc["weight"]),
            fricke_sign=int(doc["fricke_sign"]),
            fe_sign=int(doc["fe_sign"]),
            coeff_kind=kind,
            an=an,
            label=doc.get("label"),
            source=source,
            precision_decimal_digits=doc.get("precision_decimal_digits"),
        )
    except NewformError:
        raise
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise NewformError(f"malformed newform record: {exc}") from exc
    return validate_newform(nf)


def parse_newform(path: str | os.PathLike) -> Newform:
    """Read and validate a newform file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NewformError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise NewformError("newform file must contain a JSON object")
    return newform_from_dict(doc, source="file")


def generate_level_one(k: int, m: int) -> Newform:
    """The unique normalized eigenform of weight k in {12,16,18,20,22,26}, exactly.

    Coefficients come from integer arithmetic on Eisenstein series and the
    discriminant form; the Fricke involution fixes every level-1 form, so
    the sign is +1.
    """
    if m < 1:
        raise ValueError("need at least one coefficient")
    coeffs = qseries.level_one_coefficients(k, m)
    nf = Newform(
        level=1,
        weight=k,
        fricke_sign=1,
        fe_sign=expected_fe_sign(k, 1),
        coeff_kind="rational",
        an=tuple(Fraction(c) for c in coeffs),
        label=f"1.{k}.a.a",
        source="generated",
    )
    return validate_newform(nf)


def generate_level7_weight4(m: int) -> Newform:
    """The unique weight-4 newform on Gamma_0(7) (label 7.4.a.a), exactly.

    Coefficients come from the Hecke projection of the Eisenstein products
    spanning the weight-4 forms of level 7. The Fricke sign follows from the
    Atkin-Lehner relation at the prime level: a(7) = -eps * 7^{k/2-1}, and
    the construction yields a(7) = -7, so eps = +1.
    """
    coeffs = qseries.level7_weight4_coefficients(max(m, 7))
    eps = -1 if coeffs[7 - 1] > 0 else 1
    if abs(coeffs[7 - 1]) != 7 ** (4 // 2 - 1):
        raise NewformError("a(7) inconsistent with an Atkin-Lehner eigenform at prime level")
    nf = Newform(
        level=7,
        weight=4,
        fricke_sign=eps,
        fe_sign=expected_fe_sign(4, eps),
        coeff_kind="rational",
        an=tuple(Fraction(c) for c in coeffs[:m]),
        label="7.4.a.a",
        source="generated",
    )
    return validate_newform(nf)


def normalized(nf: Newform) -> Newform:
    """Rescale so a(1) = 1, recording the scaling factor in metadata."""
    a1 = nf.an[0]
    if isinstance(a1, Fraction):
        if a1 == 1:
            return nf
        if a1 == 0:
            raise NewformError("a(1) = 0, cannot normalize")
        an = tuple(x / a1 for x in nf.an)
        meta = dict(nf.metadata)
        meta["rescaled_by"] = _fraction_to_str(a1)
        return replace(nf, an=an, metadata=meta)
    a1v = mpmath.mpf(a1)
    if a1v == 1:
        return nf
    if a1v == 0:
        raise NewformError("a(1) = 0, cannot normalize")
    digits = nf.precision_decimal_digits or 30
    an = tuple(mpmath.nstr(mpmath.mpf(x) / a1v, digits) for x in nf.an)
    meta = dict(nf.metadata)
    meta["rescaled_by"] = str(a1)
    return replace(nf, an=an, metadata=meta)
