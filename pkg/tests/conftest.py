import itertools
from fractions import Fraction

import numpy as np
import pytest

from elastica.harmonic import decompose
from elastica.tensor_core import ElasticityTensor, SymTensor, Rotation, rotate, to_exact


def random_ela(rng, exact=False):
    if exact:
        return ElasticityTensor(to_exact(rng.integers(-9, 10, size=21)))
    return ElasticityTensor(rng.normal(size=21))


def random_h4(rng, exact=False):
    """Harmonic part of a random elasticity tensor."""
    return decompose(random_ela(rng, exact)).h


def random_sym2(rng, exact=False):
    if exact:
        return SymTensor(2, to_exact(rng.integers(-9, 10, size=6)))
    return SymTensor(2, rng.normal(size=6))


def rel_err(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = max(np.linalg.norm(a), np.linalg.norm(b), 1e-300)
    return float(np.linalg.norm(a - b) / scale)


# exact generators of the finite groups used to project random tensors
_R_E3_QUARTER = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
_R_E1_HALF = np.diag([1, -1, -1])
_R_E3_HALF = np.diag([-1, -1, 1])
_R_111_THIRD = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
_R_1M10_HALF = np.array([[0, -1, 0], [-1, 0, 0], [0, 0, -1]])

GENERATORS = {
    "monoclinic": [_R_E3_HALF],
    "orthotropic": [_R_E3_HALF, _R_E1_HALF],
    "tetragonal": [_R_E3_QUARTER, _R_E1_HALF],
    "trigonal": [_R_111_THIRD, _R_1M10_HALF],
    "cubic": [_R_E3_QUARTER, _R_111_THIRD],
}


def group_closure(generators):
    elems = {tuple(np.eye(3, dtype=int).ravel())}
    frontier = list(elems)
    while frontier:
        nxt = []
        for e in frontier:
            m = np.array(e).reshape(3, 3)
            for g in generators:
                p = tuple((g @ m).ravel())
                if p not in elems:
                    elems.add(p)
                    nxt.append(p)
        frontier = nxt
    return [np.array(e).reshape(3, 3) for e in elems]


def reynolds(X, group_name):
    """Average of ``X`` over a finite rotation group (exact for exact ``X``)."""
    group = group_closure(GENERATORS[group_name])
    exact = X.is_exact
    acc = None
    for m in group:
        g = Rotation(np.array([[Fraction(int(v)) for v in row] for row in m], dtype=object) if exact else m.astype(float))
        Y = rotate(g, X)
        acc = Y if acc is None else acc + Y
    k = Fraction(1, len(group)) if exact else 1.0 / len(group)
    return acc * k


def brute_symmetrize(T):
    """Average of all n! index permutations, by direct enumeration."""
    T = np.asarray(T, dtype=object)
    n = T.ndim
    acc = np.zeros_like(T)
    perms = list(itertools.permutations(range(n)))
    for p in perms:
        acc = acc + np.transpose(T, p)
    return acc * Fraction(1, len(perms))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)



# random points of each stratum, as normal forms with generic parameters ----------------

def _sign(rng):
    return 1.0 if rng.random() < 0.5 else -1.0


def stratum_params(rng, domain, stratum):
    """Random generic parameters for a stratum of ``"ela"`` or ``"h4"``."""
    d = _sign(rng) * rng.uniform(0.5, 2.0)
    if stratum == "orthotropic":
        base = rng.uniform(-2.0, 2.0)
        gaps = rng.uniform(0.5, 2.0, size=2)
        return (base, base + gaps[0], base + gaps[0] + gaps[1])
    if stratum == "cubic" or stratum == "transversely_isotropic":
        h = (d,)
    elif stratum == "tetragonal":
        h = (d, _sign(rng) * abs(d) * rng.uniform(1.5, 4.0))
    elif stratum == "trigonal":
        h = (d, _sign(rng) * abs(d) * rng.uniform(1.5, 6.0))
    else:
        h = ()
    if domain == "h4":
        return h
    traces = tuple(rng.uniform(1.0, 10.0, size=2))
    axial = tuple(rng.uniform(0.5, 3.0, size=2) * [_sign(rng), _sign(rng)])
    if stratum in ("isotropic", "cubic"):
        return traces + h
    return traces + axial + h


def stratum_sample(domain, stratum, params):
    """Normal-form tensor of ``stratum`` at ``params`` (see :func:`stratum_params`)."""
    from elastica.harmonic import axis_deviator
    from elastica.normal_forms import NormalFormParams, build, ela_from_parts

    kinds = {"cubic": "h4-cubic", "transversely_isotropic": "h4-ti", "tetragonal": "h4-tetragonal",
             "trigonal": "h4-trigonal", "orthotropic": "h4-orthotropic"}
    if domain == "h4":
        return build(NormalFormParams(kinds[stratum], tuple(params)))
    if stratum == "isotropic":
        return ela_from_parts(*params)
    if stratum == "cubic":
        return ela_from_parts(params[0], params[1], h=build(NormalFormParams.h4_cubic(params[2])))
    t = axis_deviator(np.array([0.0, 0.0, 1.0]))
    H = build(NormalFormParams(kinds[stratum], tuple(params[4:])))
    return ela_from_parts(params[0], params[1], d_dev=t * params[2], v_dev=t * params[3], h=H)


def values_close(a, b, rtol):
    return all(abs(float(x) - float(y)) <= rtol * max(1.0, abs(float(x)), abs(float(y))) for x, y in zip(a, b))
