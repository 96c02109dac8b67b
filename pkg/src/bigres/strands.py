"""Per-bidegree linear algebra attached to a three-form system.

The middle Koszul homology strand (H1)_a is computed in the inverse-monomial
model: a kernel of delta_a = diag(phi1, phi2) where each phi maps a mixed
polynomial/inverse-power space to three stacked copies of a smaller one.
Inverse powers 1/(u^(i+1) v^(j+1)) multiply by contraction, truncating to
zero whenever an exponent would leave the allowed range.

Everything here is a pure function of (system, bidegree); ranks are memoized
per system because the same strands recur across h1/hf/genericity sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass
from weakref import WeakKeyDictionary

import numpy as np

from .exactcore import ExactMatrix, mat_hstack, mat_rank, mat_vstack
from .bipoly import StrandMap, mul_matrix, strand_dim
from .combinat import chi, nd


@dataclass(frozen=True)
class InverseStrandBasis:
    """Basis s^c t^(st_deg-c) x 1/(u^(i+1) v^(j+1)), c and i descending.

    st_deg is the polynomial degree of the s,t part, uv_order = i + j the
    order of the inverse u,v part.  Negative parameters mean the space is 0.
    Mirror spaces (inverse s,t part, polynomial u,v part) reuse this record
    with flipped = True; the index arithmetic is symmetric.
    """

    st_deg: int
    uv_order: int
    flipped: bool = False

    @property
    def dim(self):
        if self.st_deg < 0 or self.uv_order < 0:
            return 0
        return (self.st_deg + 1) * (self.uv_order + 1)

    def describe(self):
        if self.dim == 0:
            return "0"
        if self.flipped:
            return f"inv-st order {self.st_deg} x uv-deg {self.uv_order}"
        return f"st-deg {self.st_deg} x inv-uv order {self.uv_order}"


def _v1_block(f, src: InverseStrandBasis):
    """Multiplication by f on (st polynomials) x (inverse uv powers)."""
    fld = f.field
    d1, d2 = f.degree
    tgt = InverseStrandBasis(src.st_deg + d1, src.uv_order - d2)
    nrows, ncols = tgt.dim, src.dim
    if fld.is_prime_field:
        mat = np.zeros((nrows, ncols), dtype=np.int64)
        if nrows and ncols:
            idx = np.arange(ncols)
            c = src.st_deg - idx // (src.uv_order + 1)
            i = src.uv_order - idx % (src.uv_order + 1)
            for (al, be, ga, de), coef in f.coeffs.items():
                ok = (i >= ga) & (src.uv_order - i >= de)
                if not ok.any():
                    continue
                rows = ((tgt.st_deg - (c[ok] + al)) * (tgt.uv_order + 1)
                        + (tgt.uv_order - (i[ok] - ga)))
                np.add.at(mat, (rows, idx[ok]), int(coef))
            mat %= fld.p
        return ExactMatrix(fld, nrows, ncols, mat)
    m = ExactMatrix.zeros(fld, nrows, ncols)
    for col in range(ncols):
        c = src.st_deg - col // (src.uv_order + 1)
        i = src.uv_order - col % (src.uv_order + 1)
        for (al, be, ga, de), coef in f.coeffs.items():
            if i >= ga and src.uv_order - i >= de:
                row = ((tgt.st_deg - (c + al)) * (tgt.uv_order + 1)
                       + (tgt.uv_order - (i - ga)))
                m.set(row, col, fld.add(m.get(row, col), coef))
    return m


def _v2_block(f, src: InverseStrandBasis):
    """Multiplication by f on (inverse st powers) x (uv polynomials)."""
    fld = f.field
    d1, d2 = f.degree
    tgt = InverseStrandBasis(src.st_deg - d1, src.uv_order + d2, flipped=True)
    nrows, ncols = tgt.dim, src.dim
    if fld.is_prime_field:
        mat = np.zeros((nrows, ncols), dtype=np.int64)
        if nrows and ncols:
            idx = np.arange(ncols)
            i = src.st_deg - idx // (src.uv_order + 1)
            k = src.uv_order - idx % (src.uv_order + 1)
            for (al, be, ga, de), coef in f.coeffs.items():
                ok = (i >= al) & (src.st_deg - i >= be)
                if not ok.any():
                    continue
                rows = ((tgt.st_deg - (i[ok] - al)) * (tgt.uv_order + 1)
                        + (tgt.uv_order - (k[ok] + ga)))
                np.add.at(mat, (rows, idx[ok]), int(coef))
            mat %= fld.p
        return ExactMatrix(fld, nrows, ncols, mat)
    m = ExactMatrix.zeros(fld, nrows, ncols)
    for col in range(ncols):
        i = src.st_deg - col // (src.uv_order + 1)
        k = src.uv_order - col % (src.uv_order + 1)
        for (al, be, ga, de), coef in f.coeffs.items():
            if i >= al and src.st_deg - i >= be:
                row = ((tgt.st_deg - (i - al)) * (tgt.uv_order + 1)
                       + (tgt.uv_order - (k + ga)))
                m.set(row, col, fld.add(m.get(row, col), coef))
    return m


def phi_matrices(sys, a):
    """(phi1, phi2) at bidegree a: three stacked multiplication blocks each.

    phi1 acts on st-polynomials of degree a1-3d1 tensored with inverse uv
    powers of order 3d2-a2-2; phi2 mirrors the two factors.  Empty strands
    give 0xk matrices, which count as full rank.
    """
    d1, d2 = sys.d
    a1, a2 = a
    src1 = InverseStrandBasis(a1 - 3 * d1, 3 * d2 - a2 - 2)
    tgt1 = InverseStrandBasis(a1 - 2 * d1, 2 * d2 - a2 - 2)
    src2 = InverseStrandBasis(3 * d1 - a1 - 2, a2 - 3 * d2, flipped=True)
    tgt2 = InverseStrandBasis(2 * d1 - a1 - 2, a2 - 2 * d2, flipped=True)
    m1 = mat_vstack(sys.field, [_v1_block(f, src1) for f in sys.polys])
    m2 = mat_vstack(sys.field, [_v2_block(f, src2) for f in sys.polys])
    phi1 = StrandMap(m1, src1.describe(), "3 x (" + tgt1.describe() + ")")
    phi2 = StrandMap(m2, src2.describe(), "3 x (" + tgt2.describe() + ")")
    return phi1, phi2


_rank_cache = WeakKeyDictionary()


def _phi_ranks(sys, a):
    """Per-system memo of (rows, cols, rank) for phi1 and phi2 at a."""
    cache = _rank_cache.setdefault(sys, {})
    key = ("phi", a)
    if key not in cache:
        phi1, phi2 = phi_matrices(sys, a)
        cache[key] = ((phi1.rows, phi1.cols, mat_rank(phi1.matrix)),
                      (phi2.rows, phi2.cols, mat_rank(phi2.matrix)))
    return cache[key]


def h1_dim(sys, a):
    """dim of the middle Koszul homology strand: ker(phi1) + ker(phi2)."""
    (_, c1, r1), (_, c2, r2) = _phi_ranks(sys, tuple(a))
    return (c1 - r1) + (c2 - r2)


def hf_quotient(sys, a):
    """Hilbert function of R/I at a: dim R_a minus rank of [f0 f1 f2]."""
    a = tuple(a)
    a1, a2 = a
    if a1 < 0 or a2 < 0:
        return 0
    cache = _rank_cache.setdefault(sys, {})
    key = ("hf", a)
    if key not in cache:
        b = (a1 - sys.d[0], a2 - sys.d[1])
        if strand_dim(b) == 0:
            cache[key] = strand_dim(a)
        else:
            stacked = mat_hstack(sys.field,
                                 [mul_matrix(f, b).matrix for f in sys.polys])
            cache[key] = strand_dim(a) - mat_rank(stacked)
    return cache[key]


def _koszul_strands(sys, a):
    """Strand matrices (delta1, delta2, delta3) of the length-3 Koszul complex.

    Exterior basis order e01, e02, e12 in the middle; signs follow
    delta2 = [[f1, f2, 0], [-f0, 0, f2], [0, -f0, -f1]], delta3 = (-f2, f1, -f0).
    """
    fld = sys.field
    d1, d2 = sys.d
    a1, a2 = a
    f0, f1, f2 = sys.polys

    def mmat(g, b, target):
        if strand_dim(b) == 0:
            return ExactMatrix.zeros(fld, strand_dim(target), 0)
        return mul_matrix(g, b).matrix

    def zmat(b, target):
        return ExactMatrix.zeros(fld, strand_dim(target), max(strand_dim(b), 0))

    b1 = (a1 - d1, a2 - d2)
    b2 = (a1 - 2 * d1, a2 - 2 * d2)
    b3 = (a1 - 3 * d1, a2 - 3 * d2)
    delta1 = mat_hstack(fld, [mmat(f, b1, a) for f in (f0, f1, f2)])
    neg = lambda m: ExactMatrix(fld, m.rows, m.cols,
                                (-m.data) % fld.p if fld.is_prime_field
                                else [[-x for x in row] for row in m.data])
    delta2 = mat_vstack(fld, [
        mat_hstack(fld, [mmat(f1, b2, b1), mmat(f2, b2, b1), zmat(b2, b1)]),
        mat_hstack(fld, [neg(mmat(f0, b2, b1)), zmat(b2, b1), mmat(f2, b2, b1)]),
        mat_hstack(fld, [zmat(b2, b1), neg(mmat(f0, b2, b1)), neg(mmat(f1, b2, b1))]),
    ])
    delta3 = mat_vstack(fld, [neg(mmat(f2, b3, b2)), mmat(f1, b3, b2),
                              neg(mmat(f0, b3, b2))])
    return delta1, delta2, delta3


def koszul_strand_homology(sys, a, i):
    """dim H_i of the degree-a strand of the Koszul complex, i in 0..3."""
    if i not in (0, 1, 2, 3):
        raise ValueError("homological index must be 0..3")
    a = tuple(a)
    cache = _rank_cache.setdefault(sys, {})
    key = ("koszul", a)
    if key not in cache:
        d1_, d2_, d3_ = _koszul_strands(sys, a)
        dims = (strand_dim(a), d1_.cols, d2_.cols, d3_.cols)
        ranks = (mat_rank(d1_), mat_rank(d2_), mat_rank(d3_))
        cache[key] = (dims, ranks)
    dims, ranks = cache[key]
    rk = (0,) + ranks + (0,)
    return dims[i] - rk[i] - rk[i + 1]


@dataclass(frozen=True)
class GenericityVerdict:
    generic: bool
    box: tuple
    witness: tuple | None

    def __str__(self):
        if self.generic:
            return f"GenericOnBox{self.box}"
        return f"NotGeneric(witness {self.witness})"


def critical_ranges(d, box):
    """Bidegrees <= box where full rank of phi1/phi2 is not automatic."""
    d1, d2 = d
    out = []
    for a1 in range(box[0] + 1):
        for a2 in range(box[1] + 1):
            if (a1 >= 3 * d1 and d2 <= a2 <= 2 * d2 - 2) or \
               (a2 >= 3 * d2 and d1 <= a1 <= 2 * d1 - 2):
                out.append((a1, a2))
    return out


def is_generic(sys, box=None):
    """Full-rank sweep of phi1, phi2 over [0, box]; verdict is box-relative.

    The default box (4d1, 4d2) covers the critical ranges; anything smaller
    than (3d1+1, 3d2+1) cannot and is rejected.
    """
    d1, d2 = sys.d
    if box is None:
        box = (4 * d1, 4 * d2)
    if box[0] < 3 * d1 + 1 or box[1] < 3 * d2 + 1:
        raise ValueError(f"box too small: need at least ({3 * d1 + 1},{3 * d2 + 1})")
    for a1 in range(box[0] + 1):
        for a2 in range(box[1] + 1):
            (n1, c1, r1), (n2, c2, r2) = _phi_ranks(sys, (a1, a2))
            if r1 != min(n1, c1) or r2 != min(n2, c2):
                return GenericityVerdict(False, tuple(box), (a1, a2))
    return GenericityVerdict(True, tuple(box), None)


def h1_support_box(d, box):
    """Bidegrees <= box where H1 can be nonzero; it vanishes outside the
    two strips (a1 <= 3d1-2, a2 >= 3d2) and (a1 >= 3d1, a2 <= 3d2-2)."""
    d1, d2 = d
    out = []
    for a1 in range(box[0] + 1):
        for a2 in range(box[1] + 1):
            if (a1 <= 3 * d1 - 2 and a2 >= 3 * d2) or \
               (a1 >= 3 * d1 and a2 <= 3 * d2 - 2):
                out.append((a1, a2))
    return out
