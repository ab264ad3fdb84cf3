from fractions import Fraction

import numpy as np
import pytest

from conftest import random_ela, random_h4, rel_err
from elastica.covariants import (
    CovariantUndefinedError,
    d2,
    d3,
    degree_in_tensor,
    invariants_ela,
    invariants_h4,
    invariants_sym2,
    k4_covariant,
    s_covariant,
    second_order_covariants,
    t_covariant,
    trace_cross,
)
from elastica.harmonic import axis_deviator, decompose, is_axis_deviator
from elastica.normal_forms import NormalFormParams, build, ela_from_parts
from elastica.tensor_core import (
    ElasticityTensor,
    SymTensor,
    deviator,
    metric,
    quadratic,
    random_rotation,
    rotate,
    sym2,
    to_exact,
)

F = Fraction
E3 = to_exact([0, 0, 1])
T3 = axis_deviator(E3)

GRID = [(F(d), F(s)) for d in (-2, F(1, 2), 1, 3) for s in (F(-1, 3), 1, 2, 5)] + [(F(1), F(0)), (F(0), F(1))]


def table_cubic(d):
    return (480 * d**2, 1920 * d**3, 0, 0, 0, 0, 0, 0, 0)


def table_ti(d):
    return (280 * d**2, 720 * d**3, F(20000, 3) * d**4, 40000 * d**5, F(2000000, 9) * d**6,
            F(4000000, 3) * d**7, 8000000 * d**8, 48000000 * d**9, 800000000 * d**10)


def table_tetragonal(d, s):
    u = 25 * d**2 - s**2
    return (8 * (35 * d**2 + s**2), 48 * d * (15 * d**2 + s**2), F(32, 3) * u**2, 64 * d * u**2,
            F(128, 9) * u**3, F(256, 3) * d * u**3, 512 * d**2 * u**3, 3072 * d**3 * u**3, 2048 * d**2 * u**4)


def table_trigonal(d, s):
    u = 50 * d**2 - s**2
    return (8 * (35 * d**2 + 2 * s**2), 144 * d * (5 * d**2 - s**2), F(8, 3) * u**2, 16 * d * u**2,
            F(16, 9) * u**3, F(32, 3) * d * u**3, 64 * d**2 * u**3, 384 * d**3 * u**3, 128 * d**2 * u**4)


def close(values, expected, rtol=1e-10):
    scale = max(1.0, max(abs(float(e)) for e in expected))
    return all(abs(float(v) - float(e)) <= rtol * scale for v, e in zip(values, expected))


# second-order covariants ---------------------------------------------------------

def test_d2_of_cubic():
    H = build(NormalFormParams.h4_cubic(1))
    assert d2(H) == metric(True) * 160
    assert d3(H) == metric(True) * 640


def test_d2_of_ti():
    H = build(NormalFormParams.h4_ti(1))
    expected = (metric(True) * 14 + T3 * 15) * F(5 * 64, 48)
    assert d2(H) == expected


def test_d2_zero():
    assert d2(SymTensor.zeros(4, exact=True)).norm2() == 0


def test_c3_is_twice_deviatoric_d3(rng):
    for _ in range(100):
        H = random_h4(rng)
        c3 = second_order_covariants(H).c3
        assert rel_err(c3.components, (deviator(d3(H)) * 2).components) < 1e-12


@pytest.mark.parametrize("params", [
    NormalFormParams.h4_orthotropic(0, 1, 3),
    NormalFormParams.h4_orthotropic(-1, 2, 7),
    NormalFormParams.h4_cubic(2),
    NormalFormParams.h4_tetragonal(1, 2),
])
def test_commutator_vectors_vanish_at_least_orthotropic(params):
    cov = second_order_covariants(build(params))
    assert not any(cov.v5) and not any(cov.v6)


def test_commutator_vectors_generic(rng):
    cov = second_order_covariants(random_h4(rng))
    assert np.linalg.norm(np.asarray(cov.v5, float)) > 1e-6


def test_s_covariant():
    assert s_covariant(sym2(to_exact(np.diag([1, 1, 4])))).norm2() == 0
    assert s_covariant(sym2(to_exact(np.diag([1, 2, 4])))).norm2() != 0
    a = sym2(to_exact(np.diag([1, 2, 4])))
    inv = invariants_sym2(a)
    assert 12 * s_covariant(a).norm2() == inv.j2**3 - 6 * inv.j3**2


# elasticity covariants -----------------------------------------------------------

def test_k4_isotropic_and_cubic():
    assert k4_covariant(ela_from_parts(3, 4)).K4 == 0
    res = k4_covariant(ela_from_parts(3, 4, h=build(NormalFormParams.h4_cubic(1))))
    assert res.K4 == 0 and res.k4.norm2() == 0
    with pytest.raises(CovariantUndefinedError):
        t_covariant(ela_from_parts(3, 4, h=build(NormalFormParams.h4_cubic(1))))


def test_k4_ti_harmonic():
    res = k4_covariant(ela_from_parts(h=build(NormalFormParams.h4_ti(1))))
    assert res.K4 == F(20000, 3)


@pytest.mark.parametrize("c", [F(1), F(-2), F(1, 3)])
def test_t_of_axial_dilatation(c):
    t = t_covariant(ela_from_parts(1, 2, d_dev=T3 * c))
    assert t == T3


def test_t_of_ti_harmonic():
    H = build(NormalFormParams.h4_ti(F(-1, 2)))
    t = t_covariant(ela_from_parts(h=H))
    assert t == T3
    assert is_axis_deviator(t)


def test_t_equivariant(rng):
    g = random_rotation(11)
    E = ela_from_parts(1.0, 2.0, d_dev=T3.to_float() * 3.0, h=build(NormalFormParams.h4_tetragonal(1.0, 2.0)))
    t1 = t_covariant(rotate(g, E))
    t2 = rotate(g, t_covariant(E))
    assert rel_err(t1.components, t2.components) < 1e-12


# invariant tables ----------------------------------------------------------------

@pytest.mark.parametrize("d", [F(-3), F(-1), F(-1, 2), F(1, 7), F(1), F(2), F(5, 2), F(3), F(10)])
def test_table_cubic_exact(d):
    assert invariants_h4(build(NormalFormParams.h4_cubic(d))).values() == table_cubic(d)


@pytest.mark.parametrize("d", [F(-3), F(-1), F(-1, 2), F(1, 7), F(1), F(2), F(5, 2), F(3), F(10)])
def test_table_ti_exact(d):
    assert invariants_h4(build(NormalFormParams.h4_ti(d))).values() == table_ti(d)


@pytest.mark.parametrize("d,s", GRID)
def test_table_tetragonal_exact(d, s):
    assert invariants_h4(build(NormalFormParams.h4_tetragonal(d, s))).values() == table_tetragonal(d, s)


@pytest.mark.parametrize("d,s", GRID)
def test_table_trigonal_exact(d, s):
    assert invariants_h4(build(NormalFormParams.h4_trigonal(d, s))).values() == table_trigonal(d, s)


@pytest.mark.parametrize("d,s", GRID)
def test_tables_float(d, s):
    fd, fs = float(d), float(s)
    assert close(invariants_h4(build(NormalFormParams.h4_cubic(fd))).values(), table_cubic(d))
    assert close(invariants_h4(build(NormalFormParams.h4_ti(fd))).values(), table_ti(d))
    assert close(invariants_h4(build(NormalFormParams.h4_tetragonal(fd, fs))).values(), table_tetragonal(d, s))
    assert close(invariants_h4(build(NormalFormParams.h4_trigonal(fd, fs))).values(), table_trigonal(d, s))


@pytest.mark.parametrize("d", [F(1, 2), F(1), F(3)])
def test_ti_ratio_chain(d):
    i = invariants_h4(build(NormalFormParams.h4_ti(d)))
    ratios = [F(7, 18) * i.i3 / i.i2, F(27, 250) * i.i4 / i.i3, F(1, 6) * i.i5 / i.i4, F(9, 50) * i.i6 / i.i5,
              F(1, 6) * i.i7 / i.i6, F(1, 6) * i.i8 / i.i7, F(1, 6) * i.i9 / i.i8, F(3, 50) * i.i10 / i.i9]
    assert ratios == [d] * 8


# identities ---------------------------------------------------------------------

@pytest.mark.parametrize("lams", [(0, 1, 3), (-1, 2, 7), (F(1, 2), 4, -3), (2, 2, 5)])
def test_trace_cross_discriminant(lams):
    H = build(NormalFormParams.h4_orthotropic(*[F(x) for x in lams]))
    l1, l2, l3 = [F(x) for x in lams]
    disc2 = ((l1 - l2) * (l2 - l3) * (l1 - l3)) ** 2
    assert trace_cross(H, d2(H)).norm2() == F(6, 25) * disc2


@pytest.mark.parametrize("params", [
    NormalFormParams.h4_ti(F(1, 2)),
    NormalFormParams.h4_ti(F(-3)),
    NormalFormParams.h4_tetragonal(F(1), F(2)),
    NormalFormParams.h4_tetragonal(F(-2), F(1, 3)),
    NormalFormParams.h4_trigonal(F(1), F(2)),
    NormalFormParams.h4_trigonal(F(3), F(-1)),
])
def test_tHt_from_invariants(params):
    H = build(params)
    inv = invariants_h4(H)
    assert quadratic(T3, H) == F(4, 3) * inv.i5 / inv.i4


# invariance ---------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(4))
def test_h4_invariants_rotation_invariant(rng, seed):
    H = random_h4(rng)
    a = invariants_h4(H).values()
    b = invariants_h4(rotate(random_rotation(seed), H)).values()
    for k, (x, y) in enumerate(zip(a, b), start=2):
        assert abs(x - y) <= 1e-10 * H.norm() ** k


@pytest.mark.parametrize("seed", range(4))
def test_ela_invariants_rotation_invariant(rng, seed):
    E = random_ela(rng)
    a = invariants_ela(E).as_dict()
    b = invariants_ela(rotate(random_rotation(seed), E)).as_dict()
    for name in a:
        assert abs(a[name] - b[name]) <= 1e-10 * E.norm() ** degree_in_tensor(name)


def test_ela_invariants_exact(rng):
    E = random_ela(rng, exact=True)
    inv = invariants_ela(E)
    assert all(isinstance(v, (int, Fraction)) for v in inv.values())
    assert inv.k1 == decompose(E).tr_d


def test_ela_invariants_of_parts_match_tensor(rng):
    E = random_ela(rng, exact=True)
    assert invariants_ela(E) == invariants_ela(decompose(E))


def test_sym2_invariants():
    a = sym2(to_exact([[2, 1, 0], [1, 2, 0], [0, 0, 5]]))
    inv = invariants_sym2(a)
    # eigenvalues 1, 3, 5: deviator eigenvalues -2, 0, 2
    assert (inv.i1, inv.j2, inv.j3) == (9, 8, 0)


def test_degree_table():
    assert [degree_in_tensor(n) for n in ("k1", "i3", "k10")] == [1, 3, 10]
    with pytest.raises(KeyError):
        degree_in_tensor("nope")


def test_ela_embedding_is_symmetric():
    H = build(NormalFormParams.h4_cubic(1))
    E = ElasticityTensor.from_symmetric(H)
    assert invariants_ela(E).k4 == 0
