"""Reference threshold tables the build must reproduce exactly.

d: smallest even weight making the phase m*theta - a_N(theta) strictly
increasing on [0, pi]. k: smallest even weight from which the radius floor
dominates the error bound (None where the floor is identically zero).
Exceptional-zero budgets give, per level, the weight threshold and the
maximum number of zeros off the circle of symmetry.
"""

from __future__ import annotations


def reference_d_plus(level: int) -> int:
    table = {1: 16, 2: 12, 3: 10, 4: 10, 5: 8, 6: 8, 7: 8, 8: 8,
             9: 10, 10: 12, 11: 14, 12: 18, 13: 24, 14: 34, 15: 66}
    if level in table:
        return table[level]
    if 16 <= level <= 27:
        return 6
    if level >= 28:
        return 4
    raise ValueError(f"level {level} out of range")


def reference_d_minus(level: int) -> int:
    if level == 2:
        return 12
    if level == 3:
        return 16
    if level == 4:
        return 10
    if 5 <= level <= 10:
        return 8
    if level >= 11:
        return 6
    raise ValueError(f"level {level} out of range (odd parity starts at 2)")


def reference_k_plus(level: int) -> int | None:
    table = {1: 84, 2: 44, 3: 28, 4: 20, 5: 20, 6: 18, 7: 16, 8: 14, 9: 14,
             10: 12, 11: 12, 12: 12, 13: 12, 14: 12, 15: 14, 16: None}
    if level in table:
        return table[level]
    if 17 <= level <= 22:
        return 12
    if 23 <= level <= 30:
        return 10
    if 31 <= level <= 56:
        return 8
    if 57 <= level <= 454:
        return 6
    if level >= 455:
        return 4
    raise ValueError(f"level {level} out of range")


def reference_k_minus(level: int) -> int | None:
    table = {2: 40, 3: 30, 4: None, 5: 22, 6: 16, 7: 16, 8: 16, 9: 14}
    if level in table:
        return table[level]
    if 10 <= level <= 12:
        return 12
    if 13 <= level <= 17:
        return 10
    if 18 <= level <= 145:
        return 8
    if level >= 146:
        return 6
    raise ValueError(f"level {level} out of range (odd parity starts at 2)")


# level -> (weight threshold, max zeros off the circle), even polynomials
EXCEPTIONAL_BUDGET_PLUS = {
    1: (84, 8), 2: (44, 4), 3: (28, 4), 4: (20, 4), 5: (20, 4), 6: (18, 4),
    7: (16, 4), 8: (14, 4), 9: (14, 4), 10: (12, 4), 11: (14, 4), 12: (18, 4),
    13: (24, 4), 14: (34, 4), 15: (66, 4), 16: (12, 0),
}

# level -> (weight threshold, max zeros off the circle), odd polynomials
EXCEPTIONAL_BUDGET_MINUS = {1: (52, 5), 2: (40, 5), 3: (30, 5), 4: (26, 1)}

D_PLUS_ACCEPTANCE_LEVELS = list(range(1, 31)) + [100, 455]
D_MINUS_ACCEPTANCE_LEVELS = list(range(2, 31))
K_PLUS_ACCEPTANCE_LEVELS = list(range(1, 61)) + [454, 455]
K_MINUS_ACCEPTANCE_LEVELS = list(range(2, 31)) + [145, 146]
