"""Shared draw/load helpers for the test suite."""

import json
import os
import random

from bigres.exactcore import GF, ExactMatrix, mat_rank
from bigres.bipoly import BiPoly, SystemF, strand_basis
from bigres.segre import basepoint_free

DATA = os.path.join(os.path.dirname(__file__), "data")


def data_path(name):
    return os.path.join(DATA, name)


def load_json(name):
    with open(data_path(name)) as fh:
        return json.load(fh)


def random_form(fld, deg, rng):
    while True:
        coeffs = {}
        for e in strand_basis(deg):
            c = fld.rand(rng)
            if not fld.is_zero(c):
                coeffs[e] = c
        if coeffs:
            return BiPoly(fld, deg, coeffs)


def random_system(fld, d, rng, tries=500):
    for _ in range(tries):
        try:
            return SystemF(fld, d, [random_form(fld, d, rng) for _ in range(3)])
        except ValueError:
            continue
    raise RuntimeError(f"no independent triple of degree {d} after {tries} draws")


def random_bpf_system(fld, d, rng, tries=500):
    for _ in range(tries):
        sys_ = random_system(fld, d, rng, tries)
        if basepoint_free(sys_).kind == "Free":
            return sys_
    raise RuntimeError(f"no basepoint-free system of degree {d} after {tries} draws")


def multiset(pairs):
    """{(a1,a2): mult} from an iterable of (degree, mult) or a betti support."""
    out = {}
    for a, m in pairs:
        out[tuple(a)] = out.get(tuple(a), 0) + m
    return {k: v for k, v in out.items() if v}
