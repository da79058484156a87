import math

import pytest

from period_lens import qseries


def test_divisor_power_sums_small():
    s3 = qseries.divisor_power_sums(3, 6)
    # sigma_3: 1, 9, 28, 73, 126, 252
    assert s3[1:] == [1, 9, 28, 73, 126, 252]


def test_divisor_counts():
    d = qseries.divisor_counts(12)
    assert d[1] == 1 and d[6] == 4 and d[12] == 6


def test_weight12_form_first_coefficients():
    # independent oracle: expand (E4^3 - E6^2)/1728 to q^2 by hand
    #   E4 = 1 + 240q + 2160q^2, E6 = 1 - 504q - 16632q^2
    #   [q^2] E4^3 = 3*2160 + 3*240^2 = 179280
    #   [q^2] E6^2 = 2*(-16632) + 504^2 = 220752
    #   => a(2) = (179280 - 220752)/1728 = -24
    a = qseries.level_one_coefficients(12, 10)
    assert a[0] == 1
    assert a[1] == -24
    assert a[2] == 252
    assert a[5] == a[1] * a[2]  # multiplicative at coprime 2*3


@pytest.mark.parametrize("k", qseries.LEVEL_ONE_WEIGHTS)
def test_level_one_hecke_multiplicativity(k):
    a = qseries.level_one_coefficients(k, 120)
    assert qseries.hecke_multiplicativity_violations(a, k) == []
    # prime-power recursion at p = 2: a(4) = a(2)^2 - 2^{k-1}
    assert a[3] == a[1] ** 2 - 2 ** (k - 1)


def test_level_one_rejects_other_weights():
    with pytest.raises(ValueError):
        qseries.level_one_coefficients(14, 10)


def test_conv_crt_fft_matches_schoolbook():
    import random

    rng = random.Random(7)
    a = [rng.randint(-10 ** 12, 10 ** 12) for _ in range(700)]
    b = [rng.randint(-10 ** 12, 10 ** 12) for _ in range(700)]
    m = 900
    assert qseries._conv_crt_fft(a, b, m) == qseries._conv_schoolbook(a, b, m)


def test_level7_weight4_is_the_classical_eigenform():
    a = qseries.level7_weight4_coefficients(60)
    assert a[:10] == [1, -1, -2, -7, 16, 2, -7, 15, -23, -16]
    assert qseries.hecke_multiplicativity_violations(a, 4) == []
    # Atkin-Lehner at the prime level: a(7) = -eps * 7
    assert a[6] == -7
    # p = 2 recursion
    assert a[3] == a[1] ** 2 - 2 ** 3


def test_level7_large_order_consistent():
    short = qseries.level7_weight4_coefficients(40)
    long = qseries.level7_weight4_coefficients(160)
    assert long[:40] == short
