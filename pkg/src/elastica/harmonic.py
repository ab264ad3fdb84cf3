"""Harmonic decomposition of elasticity tensors and the harmonic square.

An elasticity tensor ``E`` splits into two isotropic scalars, two traceless
second-order tensors and one fourth-order harmonic tensor::

    E  <->  (tr d, tr v, d', v', H)

with ``d = tr_12 E`` (dilatation tensor) and ``v = tr_13 E`` (Voigt tensor).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .tensor_core import (
    DEFAULT_RTOL,
    ElasticityTensor,
    Harm2,
    Harm4,
    SymTensor,
    coef,
    deviator,
    is_exact,
    matmul,
    metric,
    scalar,
    sym2,
    sym_product,
    symmetrize,
    tidy,
    trace,
)


@dataclass(frozen=True)
class HarmonicParts:
    """The five harmonic components of an elasticity tensor.

    Attributes
    ----------
    tr_d, tr_v : scalar
        Traces of the dilatation and Voigt tensors.
    d_dev, v_dev : Harm2
        Their deviatoric parts.
    h : Harm4
        The fourth-order harmonic component.
    """

    tr_d: object
    tr_v: object
    d_dev: Harm2
    v_dev: Harm2
    h: Harm4

    def __post_init__(self):
        for name in ("d_dev", "v_dev"):
            val = getattr(self, name)
            if not isinstance(val, Harm2):
                object.__setattr__(self, name, Harm2(val))
        if not isinstance(self.h, Harm4):
            object.__setattr__(self, "h", Harm4(self.h))

    @property
    def is_exact(self) -> bool:
        return self.h.is_exact

    @property
    def d(self) -> SymTensor:
        """Full dilatation tensor ``d' + (tr d / 3) q``."""
        return _undeviate(self.d_dev, self.tr_d)

    @property
    def v(self) -> SymTensor:
        """Full Voigt tensor ``v' + (tr v / 3) q``."""
        return _undeviate(self.v_dev, self.tr_v)

    def _rotated(self, g) -> "HarmonicParts":
        return HarmonicParts(self.tr_d, self.tr_v, self.d_dev._rotated(g), self.v_dev._rotated(g), self.h._rotated(g))

    @classmethod
    def zeros(cls, exact: bool = False) -> "HarmonicParts":
        zero = Fraction(0) if exact else 0.0
        z2 = SymTensor.zeros(2, exact)
        return cls(zero, zero, Harm2(z2), Harm2(z2), Harm4(SymTensor.zeros(4, exact)))


def _undeviate(a_dev: SymTensor, tr) -> SymTensor:
    exact = a_dev.is_exact
    return SymTensor._raw(2, (a_dev + metric(exact) * (tr * coef(Fraction(1, 3), exact))).components)


def dilatation(E: ElasticityTensor) -> SymTensor:
    """``d_ij = E_kkij``."""
    return SymTensor.from_dense(np.trace(E.dense, axis1=0, axis2=1), check=False)


def voigt_tensor(E: ElasticityTensor) -> SymTensor:
    """``v_ij = E_kikj``."""
    return SymTensor.from_dense(np.trace(E.dense, axis1=0, axis2=2), check=False)


def decompose(E: ElasticityTensor) -> HarmonicParts:
    """Split ``E`` into ``(tr d, tr v, d', v', H)``.

    ``H`` is the totally symmetric part of ``E`` with its traces removed:
    ``H = E^s - q . a' - (7/30)(tr a) q . q`` where ``a = (2/7)(d + 2v)``.
    """
    exact = E.is_exact
    d = dilatation(E)
    v = voigt_tensor(E)
    q = metric(exact)
    a = (d + v * 2) * coef(Fraction(2, 7), exact)
    tr_a = trace(a)
    H = symmetrize(E.dense) - sym_product(q, deviator(a)) - sym_product(q, q) * (tr_a * coef(Fraction(7, 30), exact))
    return HarmonicParts(trace(d), trace(v), deviator(d), deviator(v), Harm4._raw(4, H.components))


# Coordinates of the harmonic parts: tr d, tr v, five entries of each
# deviator, and the nine free entries of H (the other six follow from
# tracelessness).
DEV_ENTRIES = ((0, 0), (1, 1), (1, 2), (0, 2), (0, 1))
H_FREE_ENTRIES = ("1122", "1133", "2233", "1123", "2223", "1223", "1333", "1112", "1233")
H_DEPENDENT_ENTRIES = {
    "1111": ("1122", "1133"),
    "2222": ("1122", "2233"),
    "3333": ("1133", "2233"),
    "2333": ("1123", "2223"),
    "1113": ("1223", "1333"),
    "1222": ("1112", "1233"),
}


def _label_index(label: str) -> tuple[int, ...]:
    return tuple(int(c) - 1 for c in label)


def h4_free_components(H: SymTensor) -> list:
    """The nine independent entries of a harmonic fourth-order tensor."""
    return [H[_label_index(label)] for label in H_FREE_ENTRIES]


def h4_from_free_components(values, exact: bool) -> Harm4:
    """Inverse of :func:`h4_free_components`."""
    from .tensor_core import canonical_indices

    entries = dict(zip(H_FREE_ENTRIES, values))
    for dep, (a, b) in H_DEPENDENT_ENTRIES.items():
        entries[dep] = -entries[a] - entries[b]
    pos = {idx: k for k, idx in enumerate(canonical_indices(4))}
    comps = [None] * len(pos)
    for label, val in entries.items():
        comps[pos[tuple(sorted(_label_index(label)))]] = val
    return Harm4(np.array(comps, dtype=object if exact else float))


def deviator_components(a: SymTensor) -> list:
    return [a[ij] for ij in DEV_ENTRIES]


def deviator_from_components(values, exact: bool) -> Harm2:
    a11, a22, a23, a13, a12 = values
    m = np.array([[a11, a12, a13], [a12, a22, a23], [a13, a23, -a11 - a22]], dtype=object if exact else float)
    return Harm2(sym2(m))


def harmonic_coordinates(parts: HarmonicParts) -> list:
    """The 21 coordinates ``(tr d, tr v, d'[5], v'[5], H[9])``."""
    return ([parts.tr_d, parts.tr_v] + deviator_components(parts.d_dev) + deviator_components(parts.v_dev)
            + h4_free_components(parts.h))


@lru_cache(maxsize=None)
def _inverse_map() -> tuple[np.ndarray, np.ndarray]:
    """Exact and float inverse of the linear map ``E -> harmonic_coordinates``.

    The forward map is assembled column by column by decomposing the 21
    unit elasticity tensors, then inverted once in rational arithmetic.
    """
    import sympy

    cols = []
    for k in range(21):
        unit = [Fraction(0)] * 21
        unit[k] = Fraction(1)
        cols.append(harmonic_coordinates(decompose(ElasticityTensor(np.array(unit, dtype=object)))))
    forward = sympy.Matrix(21, 21, lambda i, j: sympy.Rational(cols[j][i].numerator, cols[j][i].denominator))
    inv = forward.inv()
    exact = np.array([[Fraction(int(x.p), int(x.q)) for x in inv.row(i)] for i in range(21)], dtype=object)
    exact.setflags(write=False)
    flt = exact.astype(float)
    flt.setflags(write=False)
    return exact, flt


def reconstruct(parts: HarmonicParts) -> ElasticityTensor:
    """Inverse of :func:`decompose`.

    Applies the precomputed exact inverse of the forward linear map to the
    harmonic coordinates of ``parts``.
    """
    exact_inv, float_inv = _inverse_map()
    coords = harmonic_coordinates(parts)
    if parts.is_exact:
        upper = tidy(exact_inv.dot(np.array(coords, dtype=object)))
    else:
        upper = float_inv @ np.array(coords, dtype=float)
    return ElasticityTensor(upper)


def harmonic_square(t: SymTensor) -> Harm4:
    """``t * t = t.t - (4/7) q.t^2 + (2/35)|t|^2 q.q`` (``.`` the symmetric product)."""
    if t.order != 2:
        raise ValueError("harmonic_square needs an order-2 tensor")
    exact = t.is_exact
    q = metric(exact)
    t2 = sym2(matmul(t.dense, t.dense))
    out = (
        sym_product(t, t)
        - sym_product(q, t2) * coef(Fraction(4, 7), exact)
        + sym_product(q, q) * (t.norm2() * coef(Fraction(2, 35), exact))
    )
    return Harm4._raw(4, out.components)


def det3(a: SymTensor):
    m = a.dense
    return scalar(
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def is_axis_deviator(t: SymTensor, rtol: float = DEFAULT_RTOL) -> bool:
    """Whether ``t = (n(x)n)'`` for a unit vector ``n``.

    Equivalent to eigenvalues ``{2/3, -1/3, -1/3}``, i.e. ``tr t = 0``,
    ``|t|^2 = 2/3`` and ``det t = 2/27``.
    """
    if t.order != 2:
        return False
    checks = (
        (trace(t), 0),
        (t.norm2(), Fraction(2, 3)),
        (det3(t), Fraction(2, 27)),
    )
    if is_exact(t.components):
        return all(scalar(v - ref) == 0 for v, ref in checks)
    return all(abs(float(v) - float(ref)) <= rtol for v, ref in checks)


def reconstruct_ti_h4(t: SymTensor, s, *, rtol: float = 1e-8) -> Harm4:
    """Transversely isotropic harmonic tensor ``(35/8) s (t * t)`` with axis ``t``.

    For a transversely isotropic ``H`` with axis deviator ``t`` and
    ``s = t:H:t`` the result equals ``H``.
    """
    if not is_axis_deviator(t, rtol):
        raise ValueError("t must be the deviator of n(x)n for a unit vector n")
    exact = t.is_exact
    k = s * coef(Fraction(35, 8), exact) if exact else float(s) * 35.0 / 8.0
    return harmonic_square(t) * k


def axis_deviator(n) -> Harm2:
    """``(n (x) n)'`` for a (normalized) direction ``n``."""
    arr = np.asarray(n)
    if arr.dtype == object:
        nn = matmul(arr.reshape(3, 1), arr.reshape(1, 3))
        norm2 = scalar(np.sum(arr * arr))
        return deviator(sym2(tidy(nn * (1 / Fraction(norm2) if isinstance(norm2, (int, Fraction)) else 1 / norm2))))
    arr = arr.astype(float)
    arr = arr / np.linalg.norm(arr)
    return deviator(sym2(np.outer(arr, arr)))

