import os
import json
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from thetacycles.quadspace import QuadSpace, mat, matmul, identity, majorant
from thetacycles.lattice import (LatticeData, dual_basis, enumerate_norm, enumerate_frames,
                                 CongruenceCoset, smith_diagonal, reduce_mod_lattice,
                                 cache_key, write_cache, read_cache, cached_enumerate_frames)
from conftest import DIAG, WITT2_GRAM, CORPUS_A_GRAM, lattice


def test_dual_basis_unimodular():
    assert dual_basis(lattice(DIAG)) == mat([[1, 0, 0], [0, 1, 0], [0, 0, -1]])


def test_dual_basis_scaled():
    L = lattice([[2, 0, 0], [0, 2, 0], [0, 0, -2]])
    assert dual_basis(L) == mat([[F(1, 2), 0, 0], [0, F(1, 2), 0], [0, 0, F(-1, 2)]])


def test_witt_gram_dual_and_order():
    L = lattice(WITT2_GRAM)
    assert matmul(L.gram, dual_basis(L)) == identity(3)
    assert L.disc_group_order == F(1, 2)


def test_level_and_smith():
    L = lattice(CORPUS_A_GRAM)
    assert L.level == 12
    assert L.disc_group() == [6]
    assert smith_diagonal([[2, 4], [6, 8]]) == [2, 4]


def test_enumerate_norm_examples(oracles):
    L = lattice(DIAG)
    Z = majorant(L.space, (0, 0, 1))
    got = enumerate_norm(L, (0, 0, 0), 1, Z, 4)
    assert [list(x[0]) for x in got.frames] == oracles["norm_box"]["1"]
    iso = enumerate_norm(L, (0, 0, 0), 0, Z, 4)
    assert [list(x[0]) for x in iso.frames] == oracles["norm_box"]["0"]


def test_enumerate_norm_congruence_obstruction():
    # x^2 + y^2 - z^2 = 2 m: m = 1/3 is not an integer norm
    L = lattice(DIAG)
    assert len(enumerate_norm(L, (0, 0, 0), F(1, 3), majorant(L.space, (0, 0, 1)), 50)) == 0


def test_enumeration_cap():
    L = lattice(DIAG)
    with pytest.raises(RuntimeError, match="enumeration cap exceeded"):
        enumerate_norm(L, (0, 0, 0), 1, majorant(L.space, (0, 0, 1)), 400, cap=100)


def test_enumerate_frames_pairs():
    L = lattice(DIAG)
    h = CongruenceCoset.zero(3, 2)
    fs = enumerate_frames(L, h, ((1, 0), (0, 1)), majorant(L.space, (0, 0, 1)), 2)
    assert ((1, 1, 0), (1, -1, 0)) in fs.frames
    for X in fs.frames:
        assert L.space.pair(X[0], X[1]) == 0


def test_enumerate_frames_rejects_asymmetric():
    L = lattice(DIAG)
    with pytest.raises(ValueError):
        enumerate_frames(L, CongruenceCoset.zero(3, 2), ((1, 1), (0, 1)),
                         majorant(L.space, (0, 0, 1)), 2)


def test_frames_beta_zero_definite_directions():
    # inside the positive definite plane z = 0 the only isotropic vector is 0
    L = lattice(DIAG)
    fs = enumerate_norm(L, (0, 0, 0), 0, majorant(L.space, (0, 0, 1)), 3)
    assert all(x[0][2] != 0 for x in fs.frames)


def test_coset_reduction_and_dual_check():
    L = lattice(CORPUS_A_GRAM)
    c = CongruenceCoset.single((F(7, 6), F(-5, 6), 2))
    assert c.h[0] == (F(1, 6), F(1, 6), 0)
    with pytest.raises(ValueError):
        c.check_dual(L)
    CongruenceCoset.single((0, F(1, 6), 0)).check_dual(L)


@given(st.integers(1, 6), st.sampled_from([(0, 0, 0), (0, F(1, 6), 0), (0, F(1, 2), 0)]))
def test_enumeration_monotone_and_exact(R, h):
    L = lattice(CORPUS_A_GRAM)
    Z = majorant(L.space, (1, 0, F(1, 2)))
    for m in [F(1, 12), F(3, 4), F(3), F(25, 12)]:
        small = enumerate_norm(L, h, m, Z, R)
        big = enumerate_norm(L, h, m, Z, 2 * R)
        assert set(small.frames) <= set(big.frames)
        for (x,) in big.frames:
            assert L.space.q(x) == m
            assert reduce_mod_lattice(x) == reduce_mod_lattice(h)


def test_negation_involution():
    L = lattice(CORPUS_A_GRAM)
    Z = majorant(L.space, (1, 0, F(1, 2)))
    fs = enumerate_norm(L, (0, F(1, 2), 0), F(3, 4), Z, 30)
    s = set(x[0] for x in fs.frames)
    assert s and s == {tuple(-c for c in x) for x in s}


@given(st.lists(st.integers(-4, 4), min_size=9, max_size=9))
def test_dual_basis_identity(entries):
    g = [[entries[3 * i + j] + entries[3 * j + i] for j in range(3)] for i in range(3)]
    try:
        L = lattice(g)
    except (ValueError, ZeroDivisionError):
        return
    assert matmul(L.gram, dual_basis(L)) == identity(3)


def test_cache_roundtrip_and_corruption(tmp_path):
    L = lattice(DIAG)
    Z = majorant(L.space, (0, 0, 1))
    h = CongruenceCoset.zero(3)
    fs = cached_enumerate_frames(L, h, ((1,),), Z, 4, directory=str(tmp_path))
    files = os.listdir(tmp_path)
    assert len(files) == 1
    key = files[0][:-5]
    assert read_cache(str(tmp_path), key).frames == fs.frames
    path = tmp_path / files[0]
    doc = json.loads(path.read_text())
    doc["frames"] = doc["frames"][:-1]
    path.write_text(json.dumps(doc))
    assert read_cache(str(tmp_path), key) is None
    again = cached_enumerate_frames(L, h, ((1,),), Z, 4, directory=str(tmp_path))
    assert again.frames == fs.frames
