"""Polynomial covariants and invariants of second-order, harmonic and elasticity tensors."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .harmonic import HarmonicParts, decompose
from .tensor_core import (
    ElasticityTensor,
    Harm2,
    SymTensor,
    Tolerance,
    axial,
    contract2,
    cross_product,
    deviator,
    inner,
    matmul,
    quadratic,
    scalar,
    sym2,
    tidy,
    trace,
    trace_contract,
)


class CovariantUndefinedError(ValueError):
    """Raised when a rational covariant is evaluated where its denominator vanishes."""


def _mtrace(m: np.ndarray):
    return scalar(m[0, 0] + m[1, 1] + m[2, 2])


def square(a: SymTensor) -> SymTensor:
    """Matrix square ``a^2`` of an order-2 tensor."""
    return sym2(matmul(a.dense, a.dense))


# ---------------------------------------------------------------------------
# harmonic fourth-order covariants
# ---------------------------------------------------------------------------

def d2(H: SymTensor) -> SymTensor:
    """``(d2)_ij = H_ipqr H_pqrj``."""
    D = H.dense
    return SymTensor.from_dense(tidy(np.asarray(np.tensordot(D, D, axes=([1, 2, 3], [0, 1, 2])))), check=False)


def d3(H: SymTensor) -> SymTensor:
    """``(d3)_ij = H_ikpq H_pqrs H_rskj``."""
    M = H.dense.reshape(9, 9)
    P = matmul(M, M, M).reshape(3, 3, 3, 3)
    return SymTensor.from_dense(tidy(np.asarray(np.einsum("ikkj->ij", P))), check=False)


@dataclass(frozen=True)
class SecondOrderCovariants:
    """Extra covariants needed to separate the lower harmonic classes.

    ``c3 = H:d2``, ``c4 = H:c3``, ``v5 = eps:[d2, c3]``, ``v6 = eps:[d2, c4]``
    with ``[A, B] = AB - BA`` and ``(eps:M)_i = eps_ijk M_jk``.
    """

    d2: SymTensor
    c3: SymTensor
    c4: SymTensor
    v5: np.ndarray
    v6: np.ndarray


def _commutator(a: SymTensor, b: SymTensor) -> np.ndarray:
    return tidy(matmul(a.dense, b.dense) - matmul(b.dense, a.dense))


def second_order_covariants(H: SymTensor) -> SecondOrderCovariants:
    dd = d2(H)
    c3 = contract2(H, dd)
    c4 = contract2(H, c3)
    return SecondOrderCovariants(dd, c3, c4, axial(_commutator(dd, c3)), axial(_commutator(dd, c4)))


def s_covariant(a: SymTensor) -> SymTensor:
    """Third-order covariant ``a x a^2``; zero exactly when ``a`` has a repeated eigenvalue."""
    return cross_product(a, square(a))


# ---------------------------------------------------------------------------
# elasticity covariants
# ---------------------------------------------------------------------------

def _parts(E) -> HarmonicParts:
    return E if isinstance(E, HarmonicParts) else decompose(E)


def _scale2(E) -> object:
    if isinstance(E, ElasticityTensor):
        return E.norm2()
    from .harmonic import reconstruct

    return reconstruct(E).norm2()


@dataclass(frozen=True)
class K4Result:
    """``k4 = (|d'|^2 d'^2 + |v'|^2 v'^2 + d2'^2)'`` and ``K4 = |d'|^4 + |v'|^4 + |d2'|^2``."""

    k4: Harm2
    K4: object


def k4_covariant(E: ElasticityTensor | HarmonicParts) -> K4Result:
    p = _parts(E)
    dd = deviator(d2(p.h))
    nd, nv = p.d_dev.norm2(), p.v_dev.norm2()
    exact = p.is_exact
    if not exact:
        nd, nv = float(nd), float(nv)
    acc = square(p.d_dev) * nd + square(p.v_dev) * nv + square(dd)
    return K4Result(deviator(acc), scalar(nd * nd + nv * nv + dd.norm2()))


def t_covariant(E: ElasticityTensor | HarmonicParts, tol: Tolerance | None = None) -> Harm2:
    """Normalized axis deviator ``t = 2 k4 / K4``.

    Defined off the at-least-cubic locus; there ``t = (n (x) n)'`` for the
    common axis ``n`` of the transversely isotropic, tetragonal and trigonal
    classes.
    """
    tol = tol or Tolerance()
    res = k4_covariant(E)
    if tol.is_zero(res.K4, _scale2(E), 4):
        raise CovariantUndefinedError("t is undefined on the at-least-cubic locus (K4 = 0)")
    K4 = res.K4
    if res.k4.is_exact:
        factor = 2 / Fraction(K4) if isinstance(K4, (int, Fraction)) else 2 / K4
        return Harm2._raw(2, tidy(res.k4.components * factor))
    return Harm2._raw(2, res.k4.components * (2.0 / float(K4)))


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Record:
    def as_dict(self) -> dict:
        return asdict(self)

    def values(self) -> tuple:
        return tuple(asdict(self).values())


@dataclass(frozen=True)
class Sym2Invariants(_Record):
    """``I1 = tr a``, ``J2 = tr a'^2``, ``J3 = tr a'^3``."""

    i1: object
    j2: object
    j3: object


@dataclass(frozen=True)
class H4Invariants(_Record):
    """Integrity basis ``I2 .. I10`` of a harmonic fourth-order tensor."""

    i2: object
    i3: object
    i4: object
    i5: object
    i6: object
    i7: object
    i8: object
    i9: object
    i10: object


@dataclass(frozen=True)
class ElaInvariants(_Record):
    """Eight invariants separating the tetragonal/trigonal/transversely isotropic strata."""

    k1: object
    l1: object
    i3: object
    k4: object
    k5: object
    l5: object
    k9: object
    k10: object


def invariants_sym2(a: SymTensor) -> Sym2Invariants:
    ad = deviator(a).dense
    a2 = matmul(ad, ad)
    return Sym2Invariants(trace(a), _mtrace(a2), _mtrace(matmul(a2, ad)))


def invariants_h4(H: SymTensor) -> H4Invariants:
    D2, D3 = d2(H), d3(H)
    a = deviator(D2).dense
    b = deviator(D3).dense
    a2 = matmul(a, a)
    b2 = matmul(b, b)
    return H4Invariants(
        trace(D2),
        trace(D3),
        _mtrace(a2),
        _mtrace(matmul(a, b)),
        _mtrace(matmul(a2, a)),
        _mtrace(matmul(a2, b)),
        _mtrace(matmul(a, b2)),
        _mtrace(matmul(b2, b)),
        _mtrace(matmul(a2, b2)),
    )


def trace_cross(H: SymTensor, a: SymTensor) -> SymTensor:
    """``tr(H x a)``: the third-order covariant used by the tetragonal tests."""
    return trace_contract(cross_product(H, a))


def invariants_ela(E: ElasticityTensor | HarmonicParts) -> ElaInvariants:
    p = _parts(E)
    res = k4_covariant(p)
    k4 = res.k4
    return ElaInvariants(
        p.tr_d,
        p.tr_v,
        trace(d3(p.h)),
        res.K4,
        inner(p.d_dev, k4),
        inner(p.v_dev, k4),
        quadratic(k4, p.h),
        trace_cross(p.h, k4).norm2(),
    )


def degree_in_tensor(name: str) -> int:
    """Polynomial degree of a named elasticity invariant in ``E``."""
    return {"k1": 1, "l1": 1, "i3": 3, "k4": 4, "k5": 5, "l5": 5, "k9": 9, "k10": 10}[name]


__all__ = [
    "CovariantUndefinedError",
    "ElaInvariants",
    "H4Invariants",
    "K4Result",
    "SecondOrderCovariants",
    "Sym2Invariants",
    "d2",
    "d3",
    "degree_in_tensor",
    "invariants_ela",
    "invariants_h4",
    "invariants_sym2",
    "k4_covariant",
    "s_covariant",
    "second_order_covariants",
    "square",
    "t_covariant",
    "trace_cross",
]
