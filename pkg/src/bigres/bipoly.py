"""Bihomogeneous polynomials in K[s,t;u,v] with deg s = t = (1,0), deg u = v = (0,1).

Monomials are exponent tuples (es, et, eu, ev).  The canonical basis of the
degree-(a1,a2) strand lists s-exponent descending, then u-exponent
descending; all matrices in the package index strands in that order.

Canonical text form of a polynomial: terms in basis order, each rendered as
coeff*s^i*t^j*u^k*v^l with every variable present and "^1" omitted; the zero
polynomial renders as "0".
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd as _int_gcd

import numpy as np

from .exactcore import ExactMatrix, FieldSpec, mat_rank


def strand_dim(a):
    """Dimension of the degree-a strand of the ring (0 for negative degrees)."""
    a1, a2 = a
    if a1 < 0 or a2 < 0:
        return 0
    return (a1 + 1) * (a2 + 1)


def strand_basis(a):
    """Monomial exponent tuples of degree a, s-exponent then u-exponent descending."""
    a1, a2 = a
    if a1 < 0 or a2 < 0:
        return []
    return [(es, a1 - es, eu, a2 - eu)
            for es in range(a1, -1, -1)
            for eu in range(a2, -1, -1)]


def strand_index(a, expt):
    """Position of monomial expt inside strand_basis(a)."""
    a1, a2 = a
    es, et, eu, ev = expt
    if es + et != a1 or eu + ev != a2 or min(expt) < 0:
        raise ValueError(f"{expt} is not in strand {a}")
    return (a1 - es) * (a2 + 1) + (a2 - eu)


@dataclass
class BiPoly:
    """Bihomogeneous polynomial: sparse exponent -> nonzero scalar map."""

    field: FieldSpec
    degree: tuple
    coeffs: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        a1, a2 = self.degree
        clean = {}
        for expt, c in self.coeffs.items():
            es, et, eu, ev = expt
            if min(expt) < 0 or es + et != a1 or eu + ev != a2:
                raise ValueError(f"monomial {expt} not bihomogeneous of degree {self.degree}")
            c = self.field.normalize(c)
            if not self.field.is_zero(c):
                clean[expt] = c
        self.coeffs = clean

    @staticmethod
    def zero(field, degree):
        return BiPoly(field, tuple(degree), {})

    @staticmethod
    def monomial(field, expt, coeff=1):
        es, et, eu, ev = expt
        return BiPoly(field, (es + et, eu + ev), {tuple(expt): coeff})

    @staticmethod
    def variable(field, name):
        return BiPoly.monomial(field, {"s": (1, 0, 0, 0), "t": (0, 1, 0, 0),
                                       "u": (0, 0, 1, 0), "v": (0, 0, 0, 1)}[name])

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch {self.degree} vs {other.degree}")
        out = dict(self.coeffs)
        f = self.field
        for e, c in other.coeffs.items():
            out[e] = f.add(out.get(e, f.zero()), c)
        return BiPoly(f, self.degree, out)

    def __neg__(self):
        f = self.field
        return BiPoly(f, self.degree, {e: f.neg(c) for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        f = self.field
        if not isinstance(other, BiPoly):
            c0 = f.normalize(other)
            return BiPoly(f, self.degree, {e: f.mul(c, c0) for e, c in self.coeffs.items()})
        deg = (self.degree[0] + other.degree[0], self.degree[1] + other.degree[1])
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                prev = out.get(e, f.zero())
                out[e] = f.add(prev, f.mul(c1, c2))
        return BiPoly(f, deg, out)

    __rmul__ = __mul__

    def scale(self, c):
        return self * c

    def coeff_vector(self):
        """Coefficients in strand_basis(self.degree) order."""
        vec = [self.field.zero()] * strand_dim(self.degree)
        for e, c in self.coeffs.items():
            vec[strand_index(self.degree, e)] = c
        return vec

    @staticmethod
    def from_vector(field, degree, vec):
        basis = strand_basis(degree)
        if len(vec) != len(basis):
            raise ValueError("vector length does not match strand dimension")
        return BiPoly(field, tuple(degree), {e: v for e, v in zip(basis, vec)})

    def to_text(self):
        if not self.coeffs:
            return "0"
        names = ("s", "t", "u", "v")
        parts = []
        for e in strand_basis(self.degree):
            if e not in self.coeffs:
                continue
            factors = [self.field.to_str(self.coeffs[e])]
            for name, k in zip(names, e):
                factors.append(name if k == 1 else f"{name}^{k}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"BiPoly({self.degree}, {self.to_text()})"


@dataclass
class StrandMap:
    """A strand-to-strand linear map with human-readable endpoint labels."""

    matrix: ExactMatrix
    domain_label: str
    codomain_label: str

    @property
    def rows(self):
        return self.matrix.rows

    @property
    def cols(self):
        return self.matrix.cols


def mul_matrix(g, b):
    """Matrix of multiplication by g from strand b to strand b + deg(g).

    Columns/rows follow strand_basis order of source/target.  b must be a
    nonnegative bidegree.
    """
    b1, b2 = b
    if b1 < 0 or b2 < 0:
        raise ValueError("source bidegree must be nonnegative")
    f = g.field
    t1, t2 = b1 + g.degree[0], b2 + g.degree[1]
    ncols = strand_dim(b)
    nrows = strand_dim((t1, t2))
    label_dom = f"R({b1},{b2})"
    label_cod = f"R({t1},{t2})"
    if f.is_prime_field:
        mat = np.zeros((nrows, ncols), dtype=np.int64)
        if ncols and nrows:
            idx = np.arange(ncols)
            es = b1 - idx // (b2 + 1)
            eu = b2 - idx % (b2 + 1)
            for (tes, tet, teu, tev), c in g.coeffs.items():
                rows = (t1 - (es + tes)) * (t2 + 1) + (t2 - (eu + teu))
                np.add.at(mat, (rows, idx), int(c))
            mat %= f.p
        return StrandMap(ExactMatrix(f, nrows, ncols, mat), label_dom, label_cod)
    m = ExactMatrix.zeros(f, nrows, ncols)
    for j, (es, et, eu, ev) in enumerate(strand_basis(b)):
        for (tes, tet, teu, tev), c in g.coeffs.items():
            i = strand_index((t1, t2), (es + tes, et + tet, eu + teu, ev + tev))
            m.set(i, j, f.add(m.get(i, j), c))
    return StrandMap(m, label_dom, label_cod)


@dataclass(eq=False)
class SystemF:
    """Three linearly independent bihomogeneous forms of common degree d >= (1,1)."""

    field: FieldSpec
    d: tuple
    polys: tuple

    def __post_init__(self):
        self.d = tuple(self.d)
        self.polys = tuple(self.polys)
        if self.d[0] < 1 or self.d[1] < 1:
            raise ValueError("d must be at least (1,1) in each coordinate")
        if len(self.polys) != 3:
            raise ValueError("a system consists of exactly three forms")
        for f in self.polys:
            if f.degree != self.d:
                raise ValueError(f"form of degree {f.degree}, expected {self.d}")
            if f.field != self.field:
                raise ValueError("field mismatch inside system")
        coeff_rows = [f.coeff_vector() for f in self.polys]
        if mat_rank(ExactMatrix.from_rows(self.field, coeff_rows)) != 3:
            raise ValueError("the three forms are linearly dependent")

    def same_as(self, other):
        return (self.field == other.field and self.d == other.d
                and all(p.coeffs == q.coeffs for p, q in zip(self.polys, other.polys)))

    def __repr__(self):
        return f"SystemF(d={self.d}, [" + "; ".join(p.to_text() for p in self.polys) + "])"


@dataclass
class BinaryForm:
    """Binary form in u,v of fixed degree; coeffs[j] is the u^j v^(degree-j) coefficient."""

    field: FieldSpec
    degree: int
    coeffs: list

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be >= 0")
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("coefficient list must have length degree + 1")
        self.coeffs = [self.field.normalize(c) for c in self.coeffs]

    @staticmethod
    def zero(field, degree):
        return BinaryForm(field, degree, [field.zero()] * (degree + 1))

    def is_zero(self):
        return all(self.field.is_zero(c) for c in self.coeffs)

    def __add__(self, other):
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        f = self.field
        return BinaryForm(f, self.degree,
                          [f.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        f = self.field
        return BinaryForm(f, self.degree, [f.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        f = self.field
        if not isinstance(other, BinaryForm):
            c0 = f.normalize(other)
            return BinaryForm(f, self.degree, [f.mul(c, c0) for c in self.coeffs])
        out = [f.zero()] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if f.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                if not f.is_zero(b):
                    out[i + j] = f.add(out[i + j], f.mul(a, b))
        return BinaryForm(f, self.degree + other.degree, out)

    __rmul__ = __mul__

    def evaluate(self, alpha, beta):
        """Value at (u, v) = (alpha, beta)."""
        f = self.field
        acc = f.zero()
        pw_a = f.one()
        powers_a = []
        for _ in range(self.degree + 1):
            powers_a.append(pw_a)
            pw_a = f.mul(pw_a, f.normalize(alpha))
        pw_b = f.one()
        for j in range(self.degree, -1, -1):
            acc = f.add(acc, f.mul(self.coeffs[j], f.mul(powers_a[j], pw_b)))
            pw_b = f.mul(pw_b, f.normalize(beta))
        return acc

    def to_bipoly(self):
        """As a BiPoly of bidegree (0, degree)."""
        n = self.degree
        return BiPoly(self.field, (0, n),
                      {(0, 0, j, n - j): c for j, c in enumerate(self.coeffs)
                       if not self.field.is_zero(c)})

    def to_text(self):
        return self.to_bipoly().to_text()

    def __repr__(self):
        return f"BinaryForm({self.degree}, {self.to_text()})"


def binary_from_bipoly(f):
    """Inverse of BinaryForm.to_bipoly (degree must be (0, n))."""
    if f.degree[0] != 0:
        raise ValueError("not a pure u,v form")
    n = f.degree[1]
    coeffs = [f.field.zero()] * (n + 1)
    for (es, et, eu, ev), c in f.coeffs.items():
        coeffs[eu] = c
    return BinaryForm(f.field, n, coeffs)


def split_st(f):
    """Write a bidegree-(1,n) form as s*p + t*q; returns BinaryForms (p, q)."""
    if f.degree[0] != 1:
        raise ValueError("split_st needs s,t-degree exactly 1")
    n = f.degree[1]
    p = [f.field.zero()] * (n + 1)
    q = [f.field.zero()] * (n + 1)
    for (es, et, eu, ev), c in f.coeffs.items():
        if es == 1:
            p[eu] = c
        else:
            q[eu] = c
    return BinaryForm(f.field, n, p), BinaryForm(f.field, n, q)


# --------------------------------------------------------------- binary gcds

def _dehom_u(bf):
    """Coefficients of bf(u, 1) ascending in u, trailing zeros trimmed."""
    c = list(bf.coeffs)
    while c and bf.field.is_zero(c[-1]):
        c.pop()
    return c


def _poly_mod(a, b, field):
    """Remainder of dense univariate division (ascending coefficients)."""
    a = list(a)
    db = len(b) - 1
    inv_lead = field.inv(b[-1])
    while len(a) - 1 >= db and a:
        if field.is_zero(a[-1]):
            a.pop()
            continue
        factor = field.mul(a[-1], inv_lead)
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = field.sub(a[shift + i], field.mul(factor, bc))
        a.pop()
    while a and field.is_zero(a[-1]):
        a.pop()
    return a


def gcd_binary(p, q):
    """Monic gcd of two binary forms (error if both are zero).

    Dehomogenized Euclid in u; common v-multiplicities are tracked separately
    since setting v = 1 loses them.
    """
    field = p.field
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero forms")
    if p.is_zero() or q.is_zero():
        g = q if p.is_zero() else p
        lead = next(c for c in reversed(g.coeffs) if not field.is_zero(c))
        return g * field.inv(lead)
    pa, qa = _dehom_u(p), _dehom_u(q)
    vmult = min(p.degree - (len(pa) - 1), q.degree - (len(qa) - 1))
    while qa:
        pa, qa = qa, _poly_mod(pa, qa, field)
    g = [field.mul(c, field.inv(pa[-1])) for c in pa]
    deg = len(g) - 1 + vmult
    coeffs = [field.zero()] * (deg + 1)
    for j, c in enumerate(g):
        coeffs[j] = c
    return BinaryForm(field, deg, coeffs)


def binary_roots(bf):
    """Projective roots (alpha, beta) of bf over the ground field, sorted.

    GF(p): exhaustive vectorized scan of (r : 1) plus the point (1 : 0).
    Q: rational-root search on the integer-cleared dehomogenization (divisor
    enumeration capped at |constant| <= 10**12; larger inputs may miss roots,
    which only weakens witness extraction, never correctness of verdicts).
    """
    field = bf.field
    if bf.is_zero():
        raise ValueError("roots of the zero form")
    roots = []
    n = bf.degree
    if field.is_zero(bf.coeffs[n]):
        roots.append((field.one(), field.zero()))  # (1 : 0), i.e. v | bf
    if field.is_prime_field:
        p = field.p
        rs = np.arange(p, dtype=np.int64)
        acc = np.full(p, int(bf.coeffs[n]) % p, dtype=np.int64)
        for j in range(n - 1, -1, -1):
            acc = (acc * rs + int(bf.coeffs[j])) % p
        for r in np.nonzero(acc == 0)[0]:
            roots.append((int(r), 1))
        return roots
    dense = _dehom_u(bf)
    if not dense:
        return roots
    den = 1
    for c in dense:
        den = den * c.denominator // _int_gcd(den, c.denominator)
    ints = [int(c * den) for c in dense]
    while ints and ints[0] == 0:
        ints.pop(0)
        if (Fraction(0), Fraction(1)) not in roots:
            roots.append((Fraction(0), Fraction(1)))
    c0, cl = abs(ints[0]), abs(ints[-1])
    if c0 <= 10 ** 12:
        for a in _divisors(c0):
            for b in _divisors(cl):
                for cand in (Fraction(a, b), Fraction(-a, b)):
                    val = sum(c * cand ** k for k, c in enumerate(ints))
                    if val == 0 and (cand, Fraction(1)) not in roots:
                        roots.append((cand, Fraction(1)))
    return sorted(set(roots), key=str)


def _divisors(n):
    n = abs(n)
    out = set()
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.add(i)
            out.add(n // i)
        i += 1
        if i > 10 ** 6:
            break
    return sorted(out)
