"""Exact dense linear algebra over Q and over prime fields GF(p).

Two backends share one deterministic pivoting rule (first nonzero entry,
columns scanned left to right), so ranks, kernels and reduced echelon forms
are bit-reproducible:

* GF(p): numpy int64 matrices with entries in [0, p).  Elimination is
  panel-blocked; the trailing update is a single float64 matmul per panel.
  With panel width 128 and p = 32003 every dot product is bounded by
  128*(p-1)^2 ~ 1.3e11 < 2^53, so the float path is exact.
* Q: fractions.Fraction entries.  Forward elimination is fraction-free
  (Bareiss) on denominator-cleared integer rows, then the staircase is
  normalized to reduced echelon form with exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

DEFAULT_PRIME = 32003
_PANEL = 128


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Ground field: kind is "rationals" or "prime" (with modulus p > 3)."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("rationals", "prime"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "prime":
            if self.p is None or self.p <= 3 or not _is_prime(self.p):
                raise ValueError(f"modulus must be a prime > 3, got {self.p}")
            # keep the blocked float64 elimination exact: _PANEL * (p-1)^2 < 2^53
            if _PANEL * (self.p - 1) ** 2 >= 2 ** 53:
                raise ValueError(f"modulus too large for exact elimination: {self.p}")
        elif self.p is not None:
            raise ValueError("rationals take no modulus")

    @property
    def is_prime_field(self):
        return self.kind == "prime"

    # scalar arithmetic; prime-field scalars are ints in [0, p), rational
    # scalars are Fractions
    def normalize(self, x):
        if self.is_prime_field:
            return int(x) % self.p
        return Fraction(x)

    def zero(self):
        return 0 if self.is_prime_field else Fraction(0)

    def one(self):
        return 1 if self.is_prime_field else Fraction(1)

    def add(self, a, b):
        return (a + b) % self.p if self.is_prime_field else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.is_prime_field else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.is_prime_field else a * b

    def neg(self, a):
        return (-a) % self.p if self.is_prime_field else -a

    def inv(self, a):
        if self.is_prime_field:
            if a % self.p == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(int(a), self.p - 2, self.p)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return (a % self.p == 0) if self.is_prime_field else a == 0

    def from_str(self, s):
        s = s.strip()
        if self.is_prime_field:
            return int(s) % self.p
        return Fraction(s)

    def to_str(self, x):
        return str(x)

    def rand(self, rng):
        """Uniform scalar: [0, p) over GF(p), integers in [-100, 100] over Q."""
        if self.is_prime_field:
            return rng.randrange(self.p)
        return Fraction(rng.randint(-100, 100))


QQ = FieldSpec("rationals")


def GF(p=DEFAULT_PRIME):
    return FieldSpec("prime", p)


@dataclass
class ExactMatrix:
    """Dense matrix over a FieldSpec.

    data is an int64 ndarray (prime field) or a list of Fraction rows (Q).
    Empty shapes (0 x n, n x 0) are legal throughout.
    """

    field: FieldSpec
    rows: int
    cols: int
    data: object

    @staticmethod
    def zeros(field, rows, cols):
        if field.is_prime_field:
            return ExactMatrix(field, rows, cols, np.zeros((rows, cols), dtype=np.int64))
        return ExactMatrix(field, rows, cols, [[Fraction(0)] * cols for _ in range(rows)])

    @staticmethod
    def identity(field, n):
        m = ExactMatrix.zeros(field, n, n)
        for i in range(n):
            m.set(i, i, field.one())
        return m

    @staticmethod
    def from_rows(field, rows):
        rows = [list(map(field.normalize, r)) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        if any(len(r) != nc for r in rows):
            raise ValueError("ragged rows")
        if field.is_prime_field:
            data = np.array(rows, dtype=np.int64).reshape(nr, nc) % field.p
            return ExactMatrix(field, nr, nc, data)
        return ExactMatrix(field, nr, nc, rows)

    def get(self, i, j):
        if self.field.is_prime_field:
            return int(self.data[i, j])
        return self.data[i][j]

    def set(self, i, j, v):
        if self.field.is_prime_field:
            self.data[i, j] = int(v) % self.field.p
        else:
            self.data[i][j] = Fraction(v)

    def row(self, i):
        if self.field.is_prime_field:
            return [int(x) for x in self.data[i]]
        return list(self.data[i])

    def col(self, j):
        return [self.get(i, j) for i in range(self.rows)]

    def to_lists(self):
        return [self.row(i) for i in range(self.rows)]

    def copy(self):
        if self.field.is_prime_field:
            return ExactMatrix(self.field, self.rows, self.cols, self.data.copy())
        return ExactMatrix(self.field, self.rows, self.cols, [list(r) for r in self.data])

    def transpose(self):
        if self.field.is_prime_field:
            return ExactMatrix(self.field, self.cols, self.rows,
                               np.ascontiguousarray(self.data.T))
        return ExactMatrix(self.field, self.cols, self.rows,
                           [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def is_zero(self):
        if self.field.is_prime_field:
            return not self.data.size or not (self.data % self.field.p).any()
        return all(x == 0 for r in self.data for x in r)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if (self.field, self.rows, self.cols) != (other.field, other.rows, other.cols):
            return False
        if self.field.is_prime_field:
            return bool(((self.data - other.data) % self.field.p == 0).all())
        return self.data == other.data


def mat_mul(a, b):
    if a.field != b.field or a.cols != b.rows:
        raise ValueError("shape/field mismatch")
    f = a.field
    if f.is_prime_field:
        # int64 matmul overflows for large inner dims; chunk the inner axis so
        # every partial sum stays below 2^62
        p = f.p
        n = a.cols
        chunk = max(1, (1 << 62) // (p * p))
        out = np.zeros((a.rows, b.cols), dtype=np.int64)
        for s in range(0, n, chunk):
            out = (out + a.data[:, s:s + chunk] @ b.data[s:s + chunk, :]) % p
        return ExactMatrix(f, a.rows, b.cols, out)
    out = ExactMatrix.zeros(f, a.rows, b.cols)
    for i in range(a.rows):
        ra = a.data[i]
        oi = out.data[i]
        for k in range(a.cols):
            x = ra[k]
            if x == 0:
                continue
            rb = b.data[k]
            for j in range(b.cols):
                if rb[j] != 0:
                    oi[j] += x * rb[j]
    return out


def mat_hstack(field, blocks):
    blocks = [b for b in blocks]
    if not blocks:
        raise ValueError("no blocks")
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise ValueError("row mismatch")
    if field.is_prime_field:
        data = np.hstack([b.data.reshape(rows, b.cols) for b in blocks])
        return ExactMatrix(field, rows, sum(b.cols for b in blocks), data)
    out = [[] for _ in range(rows)]
    for b in blocks:
        for i in range(rows):
            out[i].extend(b.data[i])
    return ExactMatrix(field, rows, sum(b.cols for b in blocks), out)


def mat_vstack(field, blocks):
    blocks = [b for b in blocks]
    if not blocks:
        raise ValueError("no blocks")
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise ValueError("col mismatch")
    if field.is_prime_field:
        data = np.vstack([b.data.reshape(b.rows, cols) for b in blocks])
        return ExactMatrix(field, sum(b.rows for b in blocks), cols, data)
    out = []
    for b in blocks:
        out.extend([list(r) for r in b.data])
    return ExactMatrix(field, sum(b.rows for b in blocks), cols, out)


def mat_from_cols(field, cols, nrows):
    m = ExactMatrix.zeros(field, nrows, len(cols))
    for j, c in enumerate(cols):
        for i, v in enumerate(c):
            m.set(i, j, v)
    return m


# ---------------------------------------------------------------- GF(p) RREF

def _rref_prime(a, p):
    """In-place style RREF over GF(p); returns (rref ndarray, pivot columns).

    Panel-blocked: pivots within a panel update panel columns immediately;
    the trailing block is updated once per panel via one float64 matmul.
    For each panel pivot j the multiplier column M[:, j] is the pivot
    column's pre-elimination values, with the pivot row's own entry replaced
    by (v_j - 1); then trailing -= M @ U reproduces the scale-and-eliminate
    row operations for every row, pivot rows included.
    """
    a = np.ascontiguousarray(np.asarray(a, dtype=np.int64) % p)
    m, n = a.shape
    pivots = []
    if m == 0 or n == 0:
        return a, pivots
    r = 0
    c0 = 0
    while c0 < n and r < m:
        c1 = min(c0 + _PANEL, n)
        M = np.zeros((m, c1 - c0), dtype=np.int64)
        invs = []
        panel_pivots = []
        for c in range(c0, c1):
            col = a[r:, c]
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                a[[r, i], :] = a[[i, r], :]
                M[[r, i], :] = M[[i, r], :]
            v = int(a[r, c])
            inv = pow(v, p - 2, p)
            urow = (a[r, c:c1] * inv) % p
            mcol = a[:, c].copy()
            mcol[r] = 0
            if c + 1 < c1:
                a[:, c + 1:c1] = (a[:, c + 1:c1] - np.outer(mcol, urow[1:])) % p
            a[r, c:c1] = urow
            a[:, c] = 0
            a[r, c] = 1
            j = len(panel_pivots)
            M[:, j] = mcol
            M[r, j] = v - 1
            invs.append(inv)
            panel_pivots.append((r, c))
            pivots.append(c)
            r += 1
            if r == m:
                break
        k = len(panel_pivots)
        if k and c1 < n:
            t = n - c1
            rs = [pr for pr, _ in panel_pivots]
            U = np.empty((k, t), dtype=np.int64)
            for j in range(k):
                pr = rs[j]
                row = a[pr, c1:].astype(np.int64)
                if j:
                    row = (row - M[pr, :j] @ U[:j]) % p
                U[j] = (row * invs[j]) % p
            prod = np.rint(M[:, :k].astype(np.float64) @ U.astype(np.float64)).astype(np.int64)
            a[:, c1:] = (a[:, c1:] - prod) % p
        c0 = c1
    return a, pivots


# -------------------------------------------------------------------- Q RREF

def _clear_rows(rows):
    """Scale each Fraction row to integers (row scaling keeps rank/kernel/rowspace)."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _rref_rational(rows):
    """RREF over Q with first-nonzero pivoting; returns (Fraction rows, pivots).

    Forward sweep is fraction-free (Bareiss): after step k every entry is a
    (k+1)-minor of the cleared input, so the division by the previous pivot
    is exact.  Only rows below the pivot are eliminated; the reduced form is
    then obtained by exact back-substitution over Q.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    if m == 0 or n == 0:
        return [list(r) for r in rows], []
    a = _clear_rows(rows)
    pivots = []
    prev = 1
    r = 0
    for c in range(n):
        pr = None
        for i in range(r, m):
            if a[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        piv = a[r][c]
        ar = a[r]
        for i in range(r + 1, m):
            ai = a[i]
            f = ai[c]
            for j in range(c, n):
                ai[j] = (piv * ai[j] - f * ar[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
        if r == m:
            break
    out = [[Fraction(0)] * n for _ in range(m)]
    for k in range(len(pivots) - 1, -1, -1):
        piv = a[k][pivots[k]]
        row = [Fraction(x, piv) for x in a[k]]
        for k2 in range(k + 1, len(pivots)):
            f = row[pivots[k2]]
            if f:
                row = [x - f * y for x, y in zip(row, out[k2])]
        out[k] = row
    return out, pivots


def rref(m):
    """Reduced row echelon form; returns (ExactMatrix, tuple of pivot columns)."""
    if m.field.is_prime_field:
        data, piv = _rref_prime(m.data, m.field.p)
        return ExactMatrix(m.field, m.rows, m.cols, data), tuple(piv)
    data, piv = _rref_rational(m.data)
    return ExactMatrix(m.field, m.rows, m.cols, data), tuple(piv)


# ------------------------------------------------------------------- the API

def mat_rank(m):
    if m.rows == 0 or m.cols == 0:
        return 0
    _, piv = rref(m)
    return len(piv)


def mat_select_rows(m, rows):
    """New matrix from the given row indices, in the given order."""
    f = m.field
    if f.is_prime_field:
        data = (m.data[list(rows), :].copy() if m.cols
                else np.zeros((len(rows), 0), dtype=np.int64))
        return ExactMatrix(f, len(rows), m.cols, data)
    return ExactMatrix(f, len(rows), m.cols, [list(m.data[r]) for r in rows])


def kernel_data(m):
    """(kernel matrix, free columns): the coordinate trick in one place.

    Kernel basis vectors carry the identity pattern on the free columns
    (vector for free column f has 1 at f and minus the echelon entries at
    the pivots), in increasing free-column order.  Consequently the
    coordinates of any kernel vector w in this basis are just w[free].
    """
    f = m.field
    n = m.cols
    if n == 0:
        return ExactMatrix.zeros(f, 0, 0), ()
    if m.rows == 0:
        return ExactMatrix.identity(f, n), tuple(range(n))
    R, piv = rref(m)
    free = tuple(c for c in range(n) if c not in set(piv))
    k = ExactMatrix.zeros(f, n, len(free))
    if f.is_prime_field:
        Rd = R.data
        for idx, fc in enumerate(free):
            k.data[fc, idx] = 1
            for i, pc in enumerate(piv):
                k.data[pc, idx] = (-Rd[i, fc]) % f.p
    else:
        for idx, fc in enumerate(free):
            k.data[fc][idx] = Fraction(1)
            for i, pc in enumerate(piv):
                k.data[pc][idx] = -R.data[i][fc]
    return k, free


def kernel_matrix(m):
    """Kernel as an ExactMatrix whose columns form the echelonized basis."""
    return kernel_data(m)[0]


def mat_kernel_basis(m):
    """Kernel basis as a list of column vectors (lists of scalars)."""
    k = kernel_matrix(m)
    return [k.col(j) for j in range(k.cols)]


def reduce_mod_span(v, basis):
    """Reduce v modulo the column span of `basis`.

    Returns (coeffs, residual): residual is the canonical representative with
    zeros at the pivot coordinates fixed by the echelon form of the span, and
    v == basis @ coeffs + residual.  coeffs are supported on the pivot
    columns of `basis` (zero at dependent columns), so they are unique under
    that convention.  residual == 0 iff v lies in the span.
    """
    f = basis.field
    if len(v) != basis.rows:
        raise ValueError("vector length must equal basis.rows")
    v = [f.normalize(x) for x in v]
    # canonical residual: eliminate pivot coordinates of the row space of basis^T
    R, piv = rref(basis.transpose())
    r = list(v)
    for i, pc in enumerate(piv):
        x = r[pc]
        if f.is_zero(x):
            continue
        row = R.row(i)
        for j in range(basis.rows):
            r[j] = f.sub(r[j], f.mul(x, row[j]))
    # express v - r in the basis columns: rref of [basis | v - r]
    w = [f.sub(v[j], r[j]) for j in range(basis.rows)]
    aug = mat_hstack(f, [basis, mat_from_cols(f, [w], basis.rows)])
    Ra, piva = rref(aug)
    coeffs = [f.zero()] * basis.cols
    for i, pc in enumerate(piva):
        if pc == basis.cols:
            raise AssertionError("residual reduction failed to land in span")
        coeffs[pc] = Ra.get(i, basis.cols)
    return coeffs, r


def mat_det(m):
    """Determinant of a square matrix (unblocked; used on small matrices)."""
    if m.rows != m.cols:
        raise ValueError("determinant of non-square matrix")
    n = m.rows
    f = m.field
    if n == 0:
        return f.one()
    if f.is_prime_field:
        p = f.p
        a = m.data.copy() % p
        det = 1
        for c in range(n):
            nz = np.nonzero(a[c:, c])[0]
            if nz.size == 0:
                return 0
            i = c + int(nz[0])
            if i != c:
                a[[c, i], :] = a[[i, c], :]
                det = (-det) % p
            v = int(a[c, c])
            det = (det * v) % p
            inv = pow(v, p - 2, p)
            below = a[c + 1:, c]
            if below.size:
                a[c + 1:, c:] = (a[c + 1:, c:] - np.outer((below * inv) % p, a[c, c:])) % p
        return det % p
    # Bareiss over integers after clearing denominators, scale back at the end
    rows = [list(r) for r in m.data]
    scale = Fraction(1)
    ints = []
    for row in rows:
        den = 1
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
        scale *= den
        ints.append([int(x * den) for x in row])
    sign = 1
    prev = 1
    for c in range(n):
        pr = None
        for i in range(c, n):
            if ints[i][c] != 0:
                pr = i
                break
        if pr is None:
            return Fraction(0)
        if pr != c:
            ints[c], ints[pr] = ints[pr], ints[c]
            sign = -sign
        piv = ints[c][c]
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                ints[i][j] = (piv * ints[i][j] - ints[i][c] * ints[c][j]) // prev
            ints[i][c] = 0
        prev = piv
    return Fraction(sign * prev) / scale
