import json
import random
from collections import Counter

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from bigres.exactcore import GF
from bigres.bipoly import BiPoly, SystemF, binary_from_bipoly, split_st
from bigres.strands import h1_dim
from bigres.betti import betti_table, hb_kernel, verify_resolution
from bigres.segre import (BasepointVerdict, ConicRedirect, FactorizedBasis,
                          ImpossibleFactorization, basepoint_free, classify,
                          conic_resolution, detect_conic, extract_factorization,
                          lift_syzygy, pencil_expected_degrees, psi_image,
                          quartic_value, square_strand_det,
                          three_point_resolution)
from bigres.cli import load_system

from helpers import data_path, load_json, random_bpf_system, random_form

FLD = GF(32003)


def _var(name):
    return BiPoly.variable(FLD, name)


def _monomial_form(n, k):
    # u^k v^(n-k) as a (0,n) BiPoly
    vec = [0] * (n + 1)
    vec[n - k] = 1
    return BiPoly.from_vector(FLD, (0, n), vec)


def _evaluate(f, st_pt, uv_pt):
    p, q = split_st(f)
    return FLD.add(FLD.mul(st_pt[0], p.evaluate(*uv_pt)),
                   FLD.mul(st_pt[1], q.evaluate(*uv_pt)))


def _shift_multiset(rc):
    return Counter((i, tuple(sh)) for i, level in enumerate(rc.shifts)
                   for sh in level)


def _golden_multiset(name):
    data = load_json(name)
    return Counter({(i, (a1, a2)): m for i, a1, a2, m in data["entries"]})


# ------------------------------------------------------------- basepoints

def test_basepoint_witness():
    sys_ = load_system(data_path("sys_bp.json"))
    verdict = basepoint_free(sys_)
    assert verdict.kind == "HasBasepoint"
    assert verdict.witness == ((0, 1), (0, 1))
    assert str(verdict).startswith("HasBasepoint at")
    for f in sys_.polys:
        assert FLD.is_zero(_evaluate(f, verdict.witness[0], verdict.witness[1]))


def test_basepoint_theta_rank_one():
    # every f_i divisible by s+t: theta has rank <= 1 everywhere
    s, t, u, v = map(_var, "stuv")
    sys_ = SystemF(FLD, (1, 2),
                   ((s + t) * (u * u), (s + t) * (v * v), (s + t) * ((u + v) * (u + v))))
    verdict = basepoint_free(sys_)
    assert verdict.kind == "HasBasepoint"
    assert verdict.evidence == "theta rank <= 1"
    st_pt, uv_pt = verdict.witness
    for f in sys_.polys:
        assert FLD.is_zero(_evaluate(f, st_pt, uv_pt))


def test_basepoint_free_verdicts():
    maps6 = load_system(data_path("sys_maps6.json"))
    assert basepoint_free(maps6).kind == "Free"
    s, t = _var("s"), _var("t")
    a0, a1 = _monomial_form(3, 3), _monomial_form(3, 0)
    normal = SystemF(FLD, (1, 3), (t * a0, s * a0 + t * a1, s * a1))
    assert basepoint_free(normal).kind == "Free"


def test_basepoint_d1_two_sided():
    rng = random.Random(1)
    sys_ = random_bpf_system(FLD, (2, 2), rng)
    assert basepoint_free(sys_).kind == "Free"
    s, u, v = _var("s"), _var("u"), _var("v")
    degenerate = SystemF(FLD, (2, 2), (s * s * u * u, s * s * u * v, s * s * v * v))
    verdict = basepoint_free(degenerate)
    assert verdict.kind == "Inconclusive"
    assert "retry" in verdict.hint


def test_basepoint_consistency():
    rng = random.Random(2)
    for d in [(1, 1), (1, 2)]:
        verdict = basepoint_free(random_bpf_system(FLD, d, rng))
        assert verdict.kind == "Free" and verdict.witness is None
    from bigres.strands import hf_quotient
    bp = load_system(data_path("sys_bp.json"))
    for k in range(1, 4):
        assert hf_quotient(bp, (k, k)) >= 1


# ------------------------------------------------------------ conic detection

@pytest.mark.parametrize("n", [1, 2, 6])
def test_detect_conic_antidiagonal_family(n):
    s, t = _var("s"), _var("t")
    un, vn = _monomial_form(n, n), _monomial_form(n, 0)
    sys_ = SystemF(FLD, (1, n), (s * un, t * vn, s * vn + t * un))
    nf = detect_conic(sys_)
    assert nf is not None
    b0, b1, b2 = nf.basis
    a0, a1 = nf.a0.to_bipoly(), nf.a1.to_bipoly()
    assert (b0 - t * a0).is_zero()
    assert (b1 - (s * a0 + t * a1)).is_zero()
    assert (b2 - s * a1).is_zero()
    assert (s * s * b0 - s * t * b1 + t * t * b2).is_zero()


def test_detect_conic_absent_for_generic():
    # generic (1,2) carries its first syzygies at (3,3), not (3,2), so no
    # normal form there either
    rng = random.Random(3)
    for d in [(1, 3), (1, 6), (1, 2)]:
        assert detect_conic(random_bpf_system(FLD, d, rng)) is None
    assert detect_conic(load_system(data_path("sys_conic12.json"))) is not None


def test_detect_conic_degenerate_branch():
    s, t, u, v = map(_var, "stuv")
    sys_ = SystemF(FLD, (1, 1), (s * u, s * v, t * u))
    with pytest.raises(ImpossibleFactorization):
        detect_conic(sys_)


def test_detect_conic_roundtrip():
    s, t = _var("s"), _var("t")
    a0, a1 = _monomial_form(3, 3), _monomial_form(3, 0)
    sys_ = SystemF(FLD, (1, 3), (t * a0, s * a0 + t * a1, s * a1))
    nf = detect_conic(sys_)
    lam = next(c for c in nf.a0.coeffs if not FLD.is_zero(c))
    back0 = [FLD.mul(lam, c) for c in binary_from_bipoly(a0).coeffs]
    back1 = [FLD.mul(lam, c) for c in binary_from_bipoly(a1).coeffs]
    assert list(nf.a0.coeffs) == back0
    assert list(nf.a1.coeffs) == back1


def test_conic_resolution_tables():
    s, t, u, v = map(_var, "stuv")
    rc1 = conic_resolution(SystemF(FLD, (1, 1), (t * u, s * u + t * v, s * v)))
    assert verify_resolution(rc1).passed
    assert _shift_multiset(rc1) == _golden_multiset("betti_11case.json")
    rc2 = conic_resolution(load_system(data_path("sys_conic12.json")))
    assert verify_resolution(rc2).passed
    assert _shift_multiset(rc2) == _golden_multiset("betti_smooth12.json")


def test_conic_resolution_needs_conic():
    rng = random.Random(4)
    with pytest.raises(ValueError, match="no conic syzygy"):
        conic_resolution(random_bpf_system(FLD, (1, 3), rng))


def test_smoothconic_syzygy_equivalence():
    # (3,n) first syzygy exists iff the conic normal form does
    s, t = _var("s"), _var("t")
    rng = random.Random(5)
    cases = [load_system(data_path("sys_conic12.json")),
             load_system(data_path("sys_maps6.json")),
             random_bpf_system(FLD, (1, 3), rng)]
    hs = [random_form(FLD, (0, 3), rng) for _ in range(3)]
    cases.append(SystemF(FLD, (1, 3),
                         (s * hs[0], t * hs[1], (s + t) * hs[2])))
    for sys_ in cases:
        n = sys_.d[1]
        has_conic = detect_conic(sys_) is not None
        tbl = betti_table(sys_, degrees=[(3, n)])
        assert has_conic == (tbl.beta(1, (3, n)) >= 1)


# ------------------------------------------------------- factorized systems

def _three_point_basis(n, seed):
    s, t = _var("s"), _var("t")
    rng = random.Random(seed)
    hs = [random_form(FLD, (0, n), rng) for _ in range(3)]
    return FactorizedBasis([(s, hs[0]), (t, hs[1]), (s + t, hs[2])], i0=0), hs


def test_three_point_n3_cross_route():
    fb, hs = _three_point_basis(3, 7)
    hb = hb_kernel([binary_from_bipoly(h) for h in hs])
    assert hb.column_degrees[0] == 1  # mu forced for n=3
    rc = three_point_resolution(fb)
    assert verify_resolution(rc).passed
    tbl = betti_table(rc.sys, box=(6, 12))
    assert _shift_multiset(rc) == Counter(dict(tbl.entries))


def test_three_point_n4():
    fb, hs = _three_point_basis(4, 9)
    rc = three_point_resolution(fb)
    assert verify_resolution(rc).passed
    mu = hb_kernel([binary_from_bipoly(h) for h in hs]).column_degrees[0]
    assert 0 < mu <= 2
    level1 = Counter(tuple(sh) for sh in rc.shifts[1])
    assert level1[(1, 12)] == 1 and level1[(2, 8)] == 3
    hb_shifts = sorted(sh[1] for sh in rc.shifts[1] if sh[0] == 3)
    assert hb_shifts == sorted([4 + mu, 8 - mu])


def test_three_point_redirects_and_errors():
    s, t = _var("s"), _var("t")
    rng = random.Random(8)
    h0, h1 = (random_form(FLD, (0, 3), rng) for _ in range(2))
    dependent = FactorizedBasis([(s, h0), (t, h1), (s + t, h0 + h1)], i0=0)
    with pytest.raises(ConicRedirect):
        three_point_resolution(dependent)
    h2 = random_form(FLD, (0, 3), rng)
    parallel = FactorizedBasis([(s, h0), (s * FLD.normalize(2), h1), (t, h2)], i0=0)
    with pytest.raises(ValueError, match="parallel"):
        three_point_resolution(parallel)
    g2_parallel = FactorizedBasis([(s, h0), (t, h1), (s, h2)], i0=0)
    with pytest.raises(ValueError, match="parallel"):
        three_point_resolution(g2_parallel)


def test_factorized_basis_validation():
    s, t = _var("s"), _var("t")
    rng = random.Random(9)
    h = random_form(FLD, (0, 2), rng)
    with pytest.raises(ValueError, match="three factor pairs"):
        FactorizedBasis([(s, h), (t, h)], i0=0)
    with pytest.raises(ValueError, match="first factor"):
        FactorizedBasis([(s * s, h), (t, h), (s + t, h)], i0=0)
    with pytest.raises(ValueError, match="free of s"):
        FactorizedBasis([(s, s * h), (t, h), (s + t, h)], i0=0)


def _pencil_basis(n, seed):
    rng = random.Random(seed)
    g = [random_form(FLD, (1, 1), rng) for _ in range(3)]
    h0 = random_form(FLD, (0, n - 1), rng)
    h1 = random_form(FLD, (0, n - 1), rng)
    h2 = h0 * FLD.normalize(5) + h1 * FLD.normalize(7)
    return FactorizedBasis([(g[0], h0), (g[1], h1), (g[2], h2)], i0=1)


def test_lift_syzygy_degrees():
    fb = _pencil_basis(4, 11)
    const = lambda c: BiPoly.from_vector(FLD, (0, 0), [FLD.normalize(c)])
    lifted = lift_syzygy(fb, (const(5), const(7), const(-1)))
    assert lifted.total_degree == (3, 6)
    fb0, hs = _three_point_basis(4, 9)
    koszul = lift_syzygy(fb0, (hs[1], -hs[0], BiPoly.zero(FLD, (0, 4))))
    assert koszul.total_degree == (3, 8)
    hb = hb_kernel([binary_from_bipoly(h) for h in hs])
    degs = sorted(lift_syzygy(fb0, tuple(e.to_bipoly() for e in col)).total_degree
                  for col in hb.columns)
    mu = hb.column_degrees[0]
    assert degs == sorted([(3, 4 + mu), (3, 8 - mu)])


def test_lift_syzygy_rejects_non_syzygy():
    fb, hs = _three_point_basis(3, 7)
    with pytest.raises(ValueError, match="not a syzygy"):
        lift_syzygy(fb, (hs[0], hs[1], hs[2]))


def test_pencil_expected_degrees():
    assert pencil_expected_degrees(4) == sorted(
        [(1, 12), (2, 8), (2, 8), (2, 8), (3, 6), (3, 7), (3, 7), (6, 6)])
    with pytest.raises(ValueError):
        pencil_expected_degrees(2)


# ------------------------------------------------------------- psi and quartic

def test_psi_image_values():
    assert psi_image(FLD, 1, 2, (1, 0, 0, 0), (0, 1)) == [0, 1, 0, 0, 0, 0]
    vec = psi_image(FLD, 0, 3, (2, 5), (1, 2, 3, 4))
    row_s, row_t = vec[:4], vec[4:]
    for i in range(4):
        for j in range(4):
            lhs = FLD.mul(row_s[i], row_t[j])
            rhs = FLD.mul(row_s[j], row_t[i])
            assert lhs == rhs  # rank-1 coefficient matrix
    with pytest.raises(ValueError, match="zero input"):
        psi_image(FLD, 1, 2, (0, 0, 0, 0), (1, 1))


@given(st.lists(st.integers(-200, 200), min_size=6, max_size=6))
@settings(max_examples=60, deadline=None)
def test_quartic_vanishes_on_products(raw):
    pta, ptb = tuple(raw[:4]), tuple(raw[4:])
    assume(any(x % 32003 for x in pta) and any(x % 32003 for x in ptb))
    assert FLD.is_zero(quartic_value(FLD, psi_image(FLD, 1, 2, pta, ptb)))


def test_quartic_nonzero_off_image():
    # su^2 + tv^2 has split quadrics u^2, v^2 with no common root
    assert not FLD.is_zero(quartic_value(FLD, [1, 0, 0, 0, 0, 1]))


# ------------------------------------------------------- square determinant

def test_square_det_repeated_form():
    rng = random.Random(12)
    f0 = random_form(FLD, (1, 5), rng)
    f2 = random_form(FLD, (1, 5), rng)
    _, det = square_strand_det([f0, f0, f2])
    assert FLD.is_zero(det)


def test_square_det_matches_h1():
    rng = random.Random(13)
    generic = random_bpf_system(FLD, (1, 5), rng)
    _, det = square_strand_det(generic)
    assert not FLD.is_zero(det)
    assert h1_dim(generic, (3, 8)) == 0
    s, t = _var("s"), _var("t")
    u5, v5 = _monomial_form(5, 5), _monomial_form(5, 0)
    special = SystemF(FLD, (1, 5), (s * u5, t * v5, (s + t) * (u5 + v5)))
    _, det = square_strand_det(special)
    assert FLD.is_zero(det)
    assert h1_dim(special, (3, 8)) >= 1


def test_square_det_factorized_samples():
    # products of (1,3) and (0,2) factors: the determinant still detects
    # exactly the h1 jump, and the sampled products sit off the zero locus
    for seed in range(100, 104):
        rng = random.Random(seed)
        while True:
            polys = tuple(random_form(FLD, (1, 3), rng) * random_form(FLD, (0, 2), rng)
                          for _ in range(3))
            try:
                sys_ = SystemF(FLD, (1, 5), polys)
                break
            except ValueError:
                continue
        _, det = square_strand_det(sys_)
        assert FLD.is_zero(det) == (h1_dim(sys_, (3, 8)) >= 1)
        assert not FLD.is_zero(det)


def test_square_det_wrong_degree():
    rng = random.Random(14)
    with pytest.raises(ValueError, match="1,5"):
        square_strand_det(random_bpf_system(FLD, (1, 2), rng))


# ------------------------------------------------------------ classification

def test_extract_factorization_roundtrip():
    s, t = _var("s"), _var("t")
    rng = random.Random(15)
    hs = [random_form(FLD, (0, 2), rng) for _ in range(3)]
    sys_ = SystemF(FLD, (1, 2), (s * hs[0], t * hs[1],
                                 (s + t * FLD.normalize(9)) * hs[2]))
    fb = extract_factorization(sys_)
    assert fb is not None and fb.i0 == 0
    assert tuple(fb.products()) == tuple(sys_.polys)
    rng2 = random.Random(16)
    assert extract_factorization(random_bpf_system(FLD, (1, 3), rng2)) is None


def test_classify_verdicts():
    maps6 = load_system(data_path("sys_maps6.json"))
    assert classify(maps6).verdict == "SmoothConic"
    fb, _ = _three_point_basis(3, 7)
    three = classify(SystemF(FLD, (1, 3), fb.products()), fb)
    assert three.verdict == "ThreeNoncollinearPoints"
    assert three.evidence["mu"] == 1
    fbp = _pencil_basis(4, 11)
    pencil_sys = SystemF(FLD, (1, 4), fbp.products())
    assert detect_conic(pencil_sys) is None
    assert classify(pencil_sys, fbp).verdict == "PencilFactorized"
    rng = random.Random(17)
    assert classify(random_bpf_system(FLD, (1, 3), rng)).verdict == "GenericLike"


def test_classification_json():
    fb, _ = _three_point_basis(3, 7)
    out = classify(SystemF(FLD, (1, 3), fb.products()), fb).to_json()
    data = json.loads(out)
    assert data["verdict"] == "ThreeNoncollinearPoints"
    assert data["evidence"]["mu"] == 1
