import dataclasses
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from thetacycles.quadspace import matvec, majorant
from thetacycles.lattice import enumerate_norm
from thetacycles.binarymodel import (BQF, GroupSpec, model_for, pell4, automorph, sl2_mul, sl2_inv,
                                     orbit_label, orbit_representatives, orbit_reduce, cusp_classes,
                                     geodesic_of, reduce_indefinite, check_group_action)
from conftest import DIAG, CORPUS_A_GRAM, lattice

H_A = (0, F(1, 6), 0)
G3 = GroupSpec("congruence", 3)

sl2 = st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4)).filter(
    lambda t: t[0] != 0 and (1 + t[1] * t[2]) % t[0] == 0).map(
    lambda t: ((t[0], t[1]), (t[2], (1 + t[1] * t[2]) // t[0])))
vectors = st.tuples(*[st.fractions(-5, 5, max_denominator=6)] * 3)


def test_disc_is_norm_scaled():
    m = model_for(lattice(DIAG).space)
    for x in [(1, 0, 0), (0, 1, 0), (3, 4, 5), (1, 2, 1)]:
        x = tuple(F(c) for c in x)
        assert m.form(x).disc == 8 * m.s * lattice(DIAG).space.q(x)


@given(sl2, vectors)
def test_action_equivariant(g, x):
    m = model_for(lattice(CORPUS_A_GRAM).space)
    lhs = m.form(matvec(m.act(g), x))
    assert lhs == m.form(x).compose(sl2_inv(g))
    sp = m.space
    assert sp.q(matvec(m.act(g), x)) == sp.q(x)


@given(sl2, sl2)
def test_action_is_homomorphism(g, h):
    m = model_for(lattice(DIAG).space)
    x = (F(1), F(2), F(3))
    assert matvec(m.act(sl2_mul(g, h)), x) == matvec(m.act(g), matvec(m.act(h), x))


def test_pell_against_search(oracles):
    for D, (t, u) in oracles["pell"].items():
        assert pell4(int(D)) == (t, u)


def test_pell_rejects_square():
    with pytest.raises(ValueError):
        pell4(9)


def test_automorph_fixes_form():
    f = BQF(1, 1, -1)
    M = automorph(f)
    assert f.compose(M) == f and M[0][0] + M[1][1] == 3


def test_automorph_split_form_error():
    with pytest.raises(ValueError, match="split form"):
        automorph(BQF(0, 1, 0))


def test_orbit_counts_against_union_find(oracles):
    L = lattice(CORPUS_A_GRAM)
    for beta, n in oracles["corpus_a_orbit_counts"].items():
        assert len(orbit_representatives(L, H_A, F(beta), G3)) == n


def test_cusp_counts(oracles):
    L = lattice(DIAG)
    assert len(cusp_classes(L, GroupSpec("full"))) == oracles["diag_cusp_counts"]["reflections"]
    assert len(cusp_classes(L, G3)) == oracles["diag_cusp_counts"]["gamma3"]


def test_vector_and_negative_are_distinct_orbits():
    L = lattice(CORPUS_A_GRAM)
    m = model_for(L.space)
    x = (F(1), F(1, 6), F(0))
    assert orbit_label(m.form(x), G3) != orbit_label(m.form(tuple(-c for c in x)), G3)


GAMMA3_GENS = [((1, 3), (0, 1)), ((1, 0), (3, 1)), ((-2, 3), (-3, 4))]
gamma3_words = st.lists(st.tuples(st.sampled_from(GAMMA3_GENS), st.booleans()), max_size=5).map(
    lambda w: _word(w))


def _word(w):
    g = ((1, 0), (0, 1))
    for m, inv in w:
        g = sl2_mul(g, sl2_inv(m) if inv else m)
    return g


@given(gamma3_words)
def test_orbit_label_invariant(g):
    assert G3.contains(g)
    L = lattice(CORPUS_A_GRAM)
    m = model_for(L.space)
    x = (F(1), F(7, 6), F(-1))
    y = matvec(m.act(g), x)
    assert orbit_label(m.form(x), G3) == orbit_label(m.form(y), G3)


def test_orbit_reduce_idempotent():
    L = lattice(CORPUS_A_GRAM)
    Z = majorant(L.space, (1, 0, F(1, 2)))
    fs = enumerate_norm(L, H_A, F(25, 12), Z, 60)
    orbits = orbit_reduce(fs, L, G3)
    reps = [o.rep for o in orbits]
    again = orbit_reduce(dataclasses.replace(fs, frames=[(r,) for r in reps]), L, G3)
    assert [o.label for o in again] == [o.label for o in orbits]
    assert [o.rep for o in again] == reps


def test_orbit_reduce_detects_small_bound():
    L = lattice(CORPUS_A_GRAM)
    Z = majorant(L.space, (1, 0, F(1, 2)))
    fs = enumerate_norm(L, H_A, F(25, 12), Z, 1)
    expected = list(orbit_representatives(L, H_A, F(25, 12), G3))
    with pytest.raises(ValueError, match="bound too small"):
        orbit_reduce(fs, L, G3, expected=expected)


def test_reduction_cycle_is_invariant():
    f = (1, 5, -3)
    R, gam, cyc = reduce_indefinite(f)
    assert BQF(*f).compose(gam) == BQF(*R)
    R2, _, _ = reduce_indefinite(BQF(*f).compose(((2, 1), (1, 1))).tuple())
    assert R == R2


def test_geodesic_closed_and_stabilized():
    L = lattice(CORPUS_A_GRAM)
    geo = geodesic_of((1, 0, -1), L, G3)
    assert geo.closed and G3.contains(geo.stabilizer_gen)
    f = model_for(L.space).form((1, 0, -1))
    assert f.compose(geo.stabilizer_gen) == f


def test_group_kind_validation():
    with pytest.raises(ValueError):
        GroupSpec("congruence", 2)
    with pytest.raises(ValueError):
        GroupSpec("weird", 3)


def test_group_must_preserve_coset():
    with pytest.raises(ValueError):
        check_group_action(lattice(CORPUS_A_GRAM), H_A, GroupSpec("full"))


@given(vectors)
def test_dictionary_round_trip_and_negation(x):
    m = model_for(lattice(CORPUS_A_GRAM).space)
    assert m.vector(m.form(x)) == x
    assert m.form(tuple(-c for c in x)) == -m.form(x)


def test_cusps_forward_and_anisotropic_empty():
    L = lattice(DIAG)
    for c in cusp_classes(L, G3):
        assert L.space.pair(c.u, c.witt.Z0) < 0
    assert cusp_classes(lattice([[1, 0, 0], [0, 1, 0], [0, 0, -3]]), GroupSpec("full")) == []


def test_negated_vector_reverses_geodesic():
    L = lattice(CORPUS_A_GRAM)
    a = geodesic_of((1, 0, -1), L, G3).endpoints()
    b = geodesic_of((-1, 0, 1), L, G3).endpoints()
    assert a[0] == pytest.approx(b[1]) and a[1] == pytest.approx(b[0])
