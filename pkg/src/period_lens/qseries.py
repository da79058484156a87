"""Exact integer q-expansion arithmetic for the bundled eigenform generators.

Everything here is exact: coefficients are Python ints, truncated at a fixed
order M (arrays hold coefficients of q^0..q^M). Large convolutions go through
a CRT/FFT path whose float stage is validated both by residue spot checks and
by a nearest-integer distance guard.
"""

from __future__ import annotations

import numpy as np

_SCHOOLBOOK_CUTOFF = 600


def divisor_power_sums(power: int, m: int) -> list[int]:
    """sigma_power(n) for n = 0..m (index 0 unused, set to 0)."""
    out = [0] * (m + 1)
    for d in range(1, m + 1):
        dp = d ** power
        for n in range(d, m + 1, d):
            out[n] += dp
    return out


def divisor_counts(m: int) -> list[int]:
    """d(n) for n = 0..m by sieve."""
    out = [0] * (m + 1)
    for d in range(1, m + 1):
        for n in range(d, m + 1, d):
            out[n] += 1
    return out


def eisenstein_e4(m: int) -> list[int]:
    s3 = divisor_power_sums(3, m)
    return [1] + [240 * s3[n] for n in range(1, m + 1)]


def eisenstein_e6(m: int) -> list[int]:
    s5 = divisor_power_sums(5, m)
    return [1] + [-504 * s5[n] for n in range(1, m + 1)]


def _conv_schoolbook(a: list[int], b: list[int], m: int) -> list[int]:
    out = [0] * (m + 1)
    for i, ai in enumerate(a):
        if ai == 0 or i > m:
            continue
        top = min(len(b) - 1, m - i)
        for j in range(top + 1):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def _small_primes(lo: int, count: int) -> list[int]:
    primes, n = [], lo
    while len(primes) < count:
        n += 1
        if all(n % p for p in range(2, int(n ** 0.5) + 1)):
            primes.append(n)
    return primes


_CRT_PRIMES = _small_primes(600, 40)  # ~2^9.3 each; float FFT stays exact


def _conv_crt_fft(a: list[int], b: list[int], m: int) -> list[int]:
    # Coefficient magnitude bound decides how many residue channels we need.
    bound = min(sum(abs(x) for x in a) * max((abs(x) for x in b), default=0),
                sum(abs(x) for x in b) * max((abs(x) for x in a), default=0))
    need = 2 * bound + 1
    primes, prod = [], 1
    for p in _CRT_PRIMES:
        primes.append(p)
        prod *= p
        if prod > 2 * need:
            break
    if prod <= 2 * need:
        raise ValueError("coefficient bound exceeds CRT channel capacity")

    n_out = min(len(a) + len(b) - 1, m + 1)
    size = 1
    while size < len(a) + len(b) - 1:
        size *= 2

    residues = []
    for p in primes:
        fa = np.array([x % p for x in a], dtype=np.float64)
        fb = np.array([x % p for x in b], dtype=np.float64)
        conv = np.fft.irfft(np.fft.rfft(fa, size) * np.fft.rfft(fb, size), size)[:n_out]
        rounded = np.rint(conv)
        if np.max(np.abs(conv - rounded)) > 0.05:
            raise ArithmeticError("FFT convolution lost integrality; reduce channel size")
        residues.append((p, np.mod(rounded.astype(np.int64), p)))

    # Garner-style recombination into exact ints.
    out = [0] * (m + 1)
    for idx in range(n_out):
        acc, mod = 0, 1
        for p, res in residues:
            r = int(res[idx])
            t = ((r - acc) * pow(mod, -1, p)) % p
            acc += mod * t
            mod *= p
        if acc > mod // 2:
            acc -= mod
        out[idx] = acc

    # Spot-check a few coefficients against the exact dot product.
    rng = np.random.default_rng(12345)
    for idx in rng.integers(0, n_out, size=min(8, n_out)):
        idx = int(idx)
        exact = sum(a[i] * b[idx - i] for i in range(max(0, idx - len(b) + 1), min(idx, len(a) - 1) + 1))
        if exact != out[idx]:
            raise ArithmeticError(f"CRT convolution self-check failed at index {idx}")
    return out


def conv_trunc(a: list[int], b: list[int], m: int) -> list[int]:
    """Exact truncated product of two integer q-series."""
    if min(len(a), len(b)) <= _SCHOOLBOOK_CUTOFF or (m + 1) <= _SCHOOLBOOK_CUTOFF:
        return _conv_schoolbook(a, b, m)
    return _conv_crt_fft(a, b, m)


def delta_series(m: int) -> list[int]:
    """Coefficients of (E4^3 - E6^2)/1728, the weight-12 discriminant form."""
    e4 = eisenstein_e4(m)
    e6 = eisenstein_e6(m)
    e4sq = conv_trunc(e4, e4, m)
    e4cu = conv_trunc(e4sq, e4, m)
    e6sq = conv_trunc(e6, e6, m)
    out = []
    for x, y in zip(e4cu, e6sq):
        q, r = divmod(x - y, 1728)
        if r:
            raise ArithmeticError("E4^3 - E6^2 not divisible by 1728; series corrupted")
        out.append(q)
    return out


LEVEL_ONE_WEIGHTS = (12, 16, 18, 20, 22, 26)


def level_one_coefficients(k: int, m: int) -> list[int]:
    """a(1..m) of the unique normalized eigenform of weight k on the full modular group.

    These weights have one-dimensional cusp spaces, so the product of the
    discriminant form with Eisenstein series is automatically the eigenform.
    """
    if k not in LEVEL_ONE_WEIGHTS:
        raise ValueError(f"weight {k} does not have a one-dimensional cusp space")
    delta = delta_series(m)
    if k == 12:
        series = delta
    else:
        e4 = eisenstein_e4(m) if k in (16, 20, 22, 26) else None
        e6 = eisenstein_e6(m) if k in (18, 22, 26) else None
        series = delta
        if k == 16:
            series = conv_trunc(series, e4, m)
        elif k == 18:
            series = conv_trunc(series, e6, m)
        elif k == 20:
            series = conv_trunc(conv_trunc(series, e4, m), e4, m)
        elif k == 22:
            series = conv_trunc(conv_trunc(series, e4, m), e6, m)
        elif k == 26:
            series = conv_trunc(conv_trunc(conv_trunc(series, e4, m), e4, m), e6, m)
    if series[0] != 0 or series[1] != 1:
        raise ArithmeticError("generated cusp form is not normalized")
    return series[1:]


def level7_weight4_coefficients(m: int) -> list[int]:
    """a(1..m) of the unique weight-4 newform on Gamma_0(7), exactly.

    The cusp space there is one-dimensional. Work inside weight-4 modular
    forms on Gamma_0(7): with E2_7(z) = E2(z) - 7 E2(7z) (weight 2 on the
    group), the combinations u = E4(z) - E4(7z) and v = E2_7^2 - 36 E4(7z)
    both have zero constant term and span cusp form + Eisenstein; the Hecke
    operator T_2 acts with eigenvalue 9 on the Eisenstein direction, so
    (T_2 - 9) projects onto the eigenform.
    """
    big = 2 * m  # T_2 consumes coefficients up to 2m
    s1 = divisor_power_sums(1, big)
    s3 = divisor_power_sums(3, big)
    e27 = [-6] + [-24 * (s1[n] - (7 * s1[n // 7] if n % 7 == 0 else 0)) for n in range(1, big + 1)]
    u = [0] + [240 * (s3[n] - (s3[n // 7] if n % 7 == 0 else 0)) for n in range(1, big + 1)]
    e27_sq = conv_trunc(e27, e27, big)
    v = [e27_sq[0] - 36] + [e27_sq[n] - 36 * (240 * s3[n // 7] if n % 7 == 0 else 0)
                            for n in range(1, big + 1)]

    def t2(a):
        return [a[2 * n] + (8 * a[n // 2] if n % 2 == 0 else 0) for n in range(m + 1)]

    f = [t2u - 9 * un for t2u, un in zip(t2(u), u)]
    if all(x == 0 for x in f):
        f = [t2v - 9 * vn for t2v, vn in zip(t2(v), v)]
    a1 = f[1]
    if a1 == 0 or any(x % a1 for x in f):
        raise ArithmeticError("Hecke projection did not produce an integral eigenform")
    f = [x // a1 for x in f]
    # eigenform sanity: T_2 f = a(2) f on everything we can see
    t2f = [f[2 * n] + (8 * f[n // 2] if n % 2 == 0 else 0) for n in range((m + 1) // 2)]
    for n in range(1, len(t2f)):
        if t2f[n] != f[2] * f[n]:
            raise ArithmeticError("projected form is not a T_2 eigenform")
    return f[1:m + 1]


def hecke_multiplicativity_violations(an: list[int], k: int, limit: int | None = None) -> list[tuple[int, int]]:
    """Pairs of coprime (m, n) with a(m)a(n) != a(mn); empty for an eigenform.

    ``an`` is 1-indexed conceptually: an[0] = a(1).
    """
    import math

    top = len(an)
    if limit is not None:
        top = min(top, limit)
    bad = []
    for p in range(2, int(top ** 0.5) + 1):
        for q in range(p + 1, top // p + 1):
            if math.gcd(p, q) != 1:
                continue
            if an[p - 1] * an[q - 1] != an[p * q - 1]:
                bad.append((p, q))
    return bad
