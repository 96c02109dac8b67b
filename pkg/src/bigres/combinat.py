"""Closed-form combinatorics that depend only on bidegrees, never on forms.

chi(d, a) is the Euler characteristic of the degree-a strand of the Koszul
complex on three forms of bidegree d; equivalently the x^a1 y^a2 coefficient
of (1 - x^d1 y^d2)^3 / ((1-x)^2 (1-y)^2).  nd(d, a) is the clamped expected
corank (dom - 3 cod)_+; the signed version is kept separately because the
two disagree exactly where the clamp bites.
"""

from __future__ import annotations

import numpy as np

from .bipoly import strand_dim


def pos_part(c):
    return max(c, 0)


def neg_part(c):
    return max(-c, 0)


def dom(d, a):
    d1, d2 = d
    a1, a2 = a
    return (pos_part(a1 - 3 * d1 + 1) * pos_part(3 * d2 - a2 - 1)
            + pos_part(3 * d1 - a1 - 1) * pos_part(a2 - 3 * d2 + 1))


def cod(d, a):
    d1, d2 = d
    a1, a2 = a
    return (pos_part(a1 - 2 * d1 + 1) * pos_part(2 * d2 - a2 - 1)
            + pos_part(2 * d1 - a1 - 1) * pos_part(a2 - 2 * d2 + 1))


def nd_signed(d, a):
    return dom(d, a) - 3 * cod(d, a)


def nd(d, a):
    if d[0] < 1 or d[1] < 1:
        raise ValueError("d must be >= (1,1)")
    return pos_part(nd_signed(d, a))


def chi(d, a):
    """Inclusion-exclusion strand Euler characteristic (the ground truth)."""
    d1, d2 = d
    a1, a2 = a
    return (strand_dim((a1, a2))
            - 3 * strand_dim((a1 - d1, a2 - d2))
            + 3 * strand_dim((a1 - 2 * d1, a2 - 2 * d2))
            - strand_dim((a1 - 3 * d1, a2 - 3 * d2)))


def chi_sign(d, a):
    c = chi(d, a)
    return (c > 0) - (c < 0)


def chi_region(d, a):
    """Region tag plus the piecewise polynomial value, None on the gap.

    The four published region predicates are tried in order A1..A4; they
    leave {a1 >= 3d1, 2d2 <= a2 < 3d2} unmatched, tagged Gap.  chi() is
    authoritative everywhere; the piecewise value is a cross-check.
    """
    d1, d2 = d
    a1, a2 = a
    if a1 < d1 or a2 < d2:
        return "A1", (a1 + 1) * (a2 + 1)
    if (d1 <= a1 < 2 * d1 and d2 <= a2) or (d1 <= a1 and d2 <= a2 < 2 * d2):
        return "A2", (a1 + 1) * (a2 + 1) - 3 * (a1 - d1 + 1) * (a2 - d2 + 1)
    if (2 * d1 <= a1 < 3 * d1 and 2 * d2 <= a2) or (a1 < 3 * d1 and 2 * d2 <= a2 < 3 * d2):
        return "A3", ((a1 + 1) * (a2 + 1)
                      - 3 * (a1 - d1 + 1) * (a2 - d2 + 1)
                      + 3 * (a1 - 2 * d1 + 1) * (a2 - 2 * d2 + 1))
    if a1 >= 3 * d1 and a2 >= 3 * d2:
        return "A4", 0
    return "Gap", None


def series_coeffs(d, box):
    """chi over [0,box1]x[0,box2] by truncated power series, plus chi_+ / chi_-.

    Expands (1 - x^d1 y^d2)^3 * 1/(1-x)^2 * 1/(1-y)^2 by shift-and-add on a
    dense coefficient array, independent of the chi() arithmetic.  Returns
    three grids indexed [a1][a2].
    """
    d1, d2 = d
    b1, b2 = box
    if b1 < 0 or b2 < 0:
        raise ValueError("box must be >= (0,0)")
    base = np.outer(np.arange(1, b1 + 2, dtype=np.int64),
                    np.arange(1, b2 + 2, dtype=np.int64))
    acc = np.zeros_like(base)
    for k, binom in ((0, 1), (1, -3), (2, 3), (3, -1)):
        s1, s2 = k * d1, k * d2
        if s1 <= b1 and s2 <= b2:
            acc[s1:, s2:] += binom * base[:b1 + 1 - s1, :b2 + 1 - s2]
    chi_grid = acc.tolist()
    pos_grid = np.maximum(acc, 0).tolist()
    neg_grid = np.maximum(-acc, 0).tolist()
    return chi_grid, pos_grid, neg_grid


def nd_grid(d, box):
    """nd values as a grid indexed [a1][a2] over [0,box1]x[0,box2]."""
    return [[nd(d, (a1, a2)) for a2 in range(box[1] + 1)]
            for a1 in range(box[0] + 1)]


def render_grid(grid):
    """Fixed-width text of an integer grid indexed [a1][a2].

    Rows are printed with a2 decreasing so the bottom row is a2 = 0 and the
    left column is a1 = 0.  Column widths adapt to the widest entry of each
    column; entries are left-justified and space-separated.
    """
    ncols = len(grid)
    nrows = len(grid[0])
    widths = [max(len(str(v)) for v in col) for col in grid]
    lines = []
    for a2 in range(nrows - 1, -1, -1):
        cells = [str(grid[a1][a2]).ljust(widths[a1]) for a1 in range(ncols)]
        lines.append("      | " + " ".join(cells) + " |")
    return "\n".join(lines) + "\n"
