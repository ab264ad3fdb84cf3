"""Symmetry-class detection for second-order, harmonic fourth-order and elasticity tensors.

Every test is a vanishing condition on a covariant.  Float inputs use the
degree-aware relative threshold of :class:`~elastica.tensor_core.Tolerance`;
exact inputs are decided by exact comparison with zero.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache

import numpy as np

from .covariants import d2 as _d2
from .covariants import s_covariant, second_order_covariants, square, trace_cross
from .harmonic import HarmonicParts, decompose
from .tensor_core import (
    ElasticityTensor,
    SymTensor,
    Tolerance,
    axial,
    contract2,
    cross_product,
    deviator,
    inner,
    matmul,
    scalar,
    tidy,
)


class StratumLabel(enum.Enum):
    """Symmetry classes, serialized as lowercase strings."""

    TRICLINIC = "triclinic"
    MONOCLINIC = "monoclinic"
    ORTHOTROPIC = "orthotropic"
    TRIGONAL = "trigonal"
    TETRAGONAL = "tetragonal"
    TRANSVERSELY_ISOTROPIC = "transversely_isotropic"
    CUBIC = "cubic"
    ISOTROPIC = "isotropic"
    LOWER_THAN_TETRA_TRIG = "lower_than_tetragonal_trigonal"

    def __str__(self) -> str:
        return self.value

    def leq(self, other: "StratumLabel") -> bool:
        """``self <= other`` when ``other`` is at least as symmetric (a closure relation)."""
        return other in _above(self)

    def __le__(self, other):
        if not isinstance(other, StratumLabel):
            return NotImplemented
        return self.leq(other)

    def __lt__(self, other):
        if not isinstance(other, StratumLabel):
            return NotImplemented
        return self is not other and self.leq(other)

    def __ge__(self, other):
        if not isinstance(other, StratumLabel):
            return NotImplemented
        return other.leq(self)

    def __gt__(self, other):
        if not isinstance(other, StratumLabel):
            return NotImplemented
        return self is not other and other.leq(self)


_L = StratumLabel
_COVER = {
    _L.TRICLINIC: (_L.MONOCLINIC,),
    _L.MONOCLINIC: (_L.ORTHOTROPIC, _L.TRIGONAL),
    _L.ORTHOTROPIC: (_L.TETRAGONAL,),
    _L.TETRAGONAL: (_L.CUBIC, _L.TRANSVERSELY_ISOTROPIC),
    _L.TRIGONAL: (_L.CUBIC, _L.TRANSVERSELY_ISOTROPIC),
    _L.CUBIC: (_L.ISOTROPIC,),
    _L.TRANSVERSELY_ISOTROPIC: (_L.ISOTROPIC,),
    _L.ISOTROPIC: (),
    _L.LOWER_THAN_TETRA_TRIG: (_L.TETRAGONAL, _L.TRIGONAL),
}


@cache
def _above(label: StratumLabel) -> frozenset:
    out = {label}
    for nxt in _COVER[label]:
        out |= _above(nxt)
    return frozenset(out)


# ---------------------------------------------------------------------------
# bookkeeping for zero tests
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    """One vanishing test: ``|C| <= threshold`` decides ``is_zero``."""

    name: str
    norm: float
    threshold: float
    is_zero: bool


@dataclass(frozen=True)
class Diagnosis:
    label: StratumLabel
    checks: tuple[Check, ...] = ()
    axis: np.ndarray | None = field(default=None, compare=False)


class _Checker:
    def __init__(self, tol: Tolerance, exact: bool):
        self.tol = tol
        self.exact = exact
        self.checks: list[Check] = []

    def zero(self, name: str, norm2, ref2) -> bool:
        norm2 = scalar(norm2)
        thr2 = self.tol.rel * self.tol.rel * float(ref2)
        if self.exact:
            is_zero = norm2 == 0
        else:
            is_zero = norm2 == 0 or float(norm2) <= thr2
        self.checks.append(Check(name, math.sqrt(max(float(norm2), 0.0)), math.sqrt(thr2), is_zero))
        return is_zero


def _inv(x):
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


def _exact(*xs) -> bool:
    return all(x.is_exact for x in xs)


# ---------------------------------------------------------------------------
# families of second-order tensors
# ---------------------------------------------------------------------------

def _common_axis(ck: _Checker, items: list[tuple[str, SymTensor, object]]):
    """Test whether all deviators are multiples of one ``(n (x) n)'``.

    ``items`` holds ``(name, x, ref2)`` with ``ref2`` the squared reference
    norm for ``x``.  Returns ``(status, axis)`` where ``status`` is
    ``"isotropic"``, ``"ti"`` or ``None`` (no common axis).
    """
    devs = []
    for name, x, ref2 in items:
        xd = deviator(x)
        if not ck.zero(f"{name}'", xd.norm2(), ref2):
            devs.append((name, xd))
    if not devs:
        return "isotropic", None
    # scale-free combination of the squared deviators; a positive multiple of
    # the common axis deviator whenever one exists
    acc = None
    for _, xd in devs:
        term = square(xd) * _inv(xd.norm2())
        acc = term if acc is None else acc + term
    m = deviator(acc)
    m2 = m.norm2()
    if ck.zero("m", m2, len(devs) ** 2):
        return None, None
    if not ck.zero("m x m^2", s_covariant(m).norm2(), m2**3):
        return None, None
    for name, xd in devs:
        resid = xd - m * (inner(xd, m) * _inv(m2))
        if not ck.zero(f"{name}' - proj_m {name}'", resid.norm2(), xd.norm2()):
            return None, None
    return "ti", _distinct_eigenvector(m)


def _distinct_eigenvector(m: SymTensor) -> np.ndarray:
    w, V = np.linalg.eigh(m.dense.astype(float))
    gaps = (abs(w[0] - w[1]), abs(w[1] - w[2]))
    n = V[:, 2] if gaps[1] > gaps[0] else V[:, 0]
    return n / np.linalg.norm(n)


def _commutator_axial(a: SymTensor, b: SymTensor) -> np.ndarray:
    return axial(tidy(matmul(a.dense, b.dense) - matmul(b.dense, a.dense)))


def _vnorm2(w: np.ndarray):
    return scalar(np.sum(w * w))


def _family_class(ck: _Checker, items: list[tuple[str, SymTensor, object]]) -> StratumLabel:
    """Symmetry class of a pair or triplet of symmetric second-order tensors."""
    status, _ = _common_axis(ck, items)
    if status == "isotropic":
        return StratumLabel.ISOTROPIC
    if status == "ti":
        return StratumLabel.TRANSVERSELY_ISOTROPIC
    comms = []
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            (na, a, ra), (nb, b, rb) = items[i], items[j]
            w = _commutator_axial(a, b)
            n2 = _vnorm2(w)
            ref = float(ra) * float(rb)
            zero = ck.zero(f"eps:[{na},{nb}]", n2, ref)
            comms.append((zero, float(n2) / ref if ref else float(n2), w))
    if all(z for z, _, _ in comms):
        return StratumLabel.ORTHOTROPIC
    _, _, w = max((c for c in comms if not c[0]), key=lambda c: c[1])
    w2 = _vnorm2(w)
    for name, x, ref2 in items:
        xw = matmul(x.dense, w.reshape(3, 1)).reshape(3)
        c = np.array([xw[1] * w[2] - xw[2] * w[1], xw[2] * w[0] - xw[0] * w[2], xw[0] * w[1] - xw[1] * w[0]])
        if not ck.zero(f"({name} w) x w", _vnorm2(tidy(c)), float(ref2) * float(w2) ** 2):
            return StratumLabel.TRICLINIC
    return StratumLabel.MONOCLINIC


def pair_class(a: SymTensor, b: SymTensor, tol: Tolerance | None = None) -> StratumLabel:
    """Symmetry class of the pair ``(a, b)`` (isotropic, TI, orthotropic, monoclinic or triclinic)."""
    ck = _Checker(tol or Tolerance(), _exact(a, b))
    return _family_class(ck, [("a", a, a.norm2()), ("b", b, b.norm2())])


def triplet_class(a: SymTensor, b: SymTensor, c: SymTensor, tol: Tolerance | None = None) -> StratumLabel:
    ck = _Checker(tol or Tolerance(), _exact(a, b, c))
    return _family_class(ck, [("a", a, a.norm2()), ("b", b, b.norm2()), ("c", c, c.norm2())])


def triplet_transversely_isotropic(
    a: SymTensor, b: SymTensor, c: SymTensor, tol: Tolerance | None = None
) -> np.ndarray | None:
    """Common axis ``n`` of a transversely isotropic triplet, or ``None``.

    The triplet is transversely isotropic when its deviators are multiples of a
    single ``(n (x) n)'`` and not all zero.
    """
    ck = _Checker(tol or Tolerance(), _exact(a, b, c))
    status, n = _common_axis(ck, [("a", a, a.norm2()), ("b", b, b.norm2()), ("c", c, c.norm2())])
    return n if status == "ti" else None


# ---------------------------------------------------------------------------
# classifiers
# ---------------------------------------------------------------------------

def diagnose_sym2(a: SymTensor, tol: Tolerance | None = None) -> Diagnosis:
    ck = _Checker(tol or Tolerance(), a.is_exact)
    ad = deviator(a)
    if ck.zero("a'", ad.norm2(), a.norm2()):
        return Diagnosis(StratumLabel.ISOTROPIC, tuple(ck.checks))
    if ck.zero("a x a^2", s_covariant(ad).norm2(), ad.norm2() ** 3):
        return Diagnosis(StratumLabel.TRANSVERSELY_ISOTROPIC, tuple(ck.checks), _distinct_eigenvector(ad))
    return Diagnosis(StratumLabel.ORTHOTROPIC, tuple(ck.checks))


def classify_sym2(a: SymTensor, tol: Tolerance | None = None) -> StratumLabel:
    """Isotropic, transversely isotropic or orthotropic."""
    return diagnose_sym2(a, tol).label


def diagnose_h4(H: SymTensor, tol: Tolerance | None = None, *, scale2=None) -> Diagnosis:
    """Decision cascade over the eight harmonic classes, most symmetric first.

    ``scale2`` is the squared norm the isotropy test is measured against
    (defaults to ``|H|^2``, i.e. only ``H = 0`` is isotropic).
    """
    ck = _Checker(tol or Tolerance(), H.is_exact)
    L = StratumLabel
    h2 = H.norm2()
    if ck.zero("H", h2, h2 if scale2 is None else scale2):
        return Diagnosis(L.ISOTROPIC, tuple(ck.checks))
    dd = _d2(H)
    dd_dev = deviator(dd)
    if ck.zero("d2'", dd_dev.norm2(), h2**2):
        return Diagnosis(L.CUBIC, tuple(ck.checks))
    if ck.zero("d2 x d2^2", s_covariant(dd_dev).norm2(), h2**6):
        axis = _distinct_eigenvector(dd_dev)
        if ck.zero("H x d2", cross_product(H, dd).norm2(), h2**3):
            return Diagnosis(L.TRANSVERSELY_ISOTROPIC, tuple(ck.checks), axis)
        if ck.zero("tr(H x d2)", trace_cross(H, dd).norm2(), h2**3):
            return Diagnosis(L.TETRAGONAL, tuple(ck.checks), axis)
        if ck.zero("(H:d2) x d2", cross_product(contract2(H, dd), dd).norm2(), h2**5):
            return Diagnosis(L.TRIGONAL, tuple(ck.checks), axis)
    cov = second_order_covariants(H)
    v5 = ck.zero("v5", _vnorm2(cov.v5), h2**5)
    v6 = ck.zero("v6", _vnorm2(cov.v6), h2**6)
    items = [("d2", cov.d2, h2**2), ("c3", cov.c3, h2**3), ("c4", cov.c4, h2**4)]
    if v5 and v6 and _family_class(ck, items[:2]) is L.ORTHOTROPIC:
        return Diagnosis(L.ORTHOTROPIC, tuple(ck.checks))
    # every more symmetric class is excluded above, so a common eigenvector suffices
    if _family_class(ck, items) is not L.TRICLINIC:
        return Diagnosis(L.MONOCLINIC, tuple(ck.checks))
    return Diagnosis(L.TRICLINIC, tuple(ck.checks))


def classify_h4(H: SymTensor, tol: Tolerance | None = None) -> StratumLabel:
    return diagnose_h4(H, tol).label


def diagnose_ela(E: ElasticityTensor | HarmonicParts, tol: Tolerance | None = None) -> Diagnosis:
    """Decide among isotropic, cubic, transversely isotropic, tetragonal and trigonal.

    Tensors failing all five characterizations get
    :attr:`StratumLabel.LOWER_THAN_TETRA_TRIG`.
    """
    if isinstance(E, HarmonicParts):
        from .harmonic import reconstruct

        p, s2 = E, reconstruct(E).norm2()
    else:
        p, s2 = decompose(E), E.norm2()
    L = StratumLabel
    H = p.h
    ck = _Checker(tol or Tolerance(), H.is_exact)
    d_zero = ck.zero("d'", p.d_dev.norm2(), s2)
    v_zero = ck.zero("v'", p.v_dev.norm2(), s2)
    h_zero = ck.zero("H", H.norm2(), s2)
    if d_zero and v_zero and h_zero:
        return Diagnosis(L.ISOTROPIC, tuple(ck.checks))
    dd = _d2(H)
    if d_zero and v_zero and ck.zero("d2'", deviator(dd).norm2(), s2**2):
        return Diagnosis(L.CUBIC, tuple(ck.checks))
    d, v = p.d, p.v
    status, axis = _common_axis(ck, [("d2", dd, s2**2), ("d", d, s2), ("v", v, s2)])
    if status != "ti":
        return Diagnosis(L.LOWER_THAN_TETRA_TRIG, tuple(ck.checks))
    family = (("d2", dd, 2), ("d", d, 1), ("v", v, 1))
    if all(ck.zero(f"H x {n}", cross_product(H, x).norm2(), s2 ** (k + 1)) for n, x, k in family):
        return Diagnosis(L.TRANSVERSELY_ISOTROPIC, tuple(ck.checks), axis)
    if all(ck.zero(f"tr(H x {n})", trace_cross(H, x).norm2(), s2 ** (k + 1)) for n, x, k in family):
        return Diagnosis(L.TETRAGONAL, tuple(ck.checks), axis)
    if all(
        ck.zero(f"{n} x (H:{n})", cross_product(x, contract2(H, x)).norm2(), s2 ** (2 * k + 1))
        for n, x, k in family
    ):
        return Diagnosis(L.TRIGONAL, tuple(ck.checks), axis)
    return Diagnosis(L.LOWER_THAN_TETRA_TRIG, tuple(ck.checks))


def classify_ela(E: ElasticityTensor | HarmonicParts, tol: Tolerance | None = None) -> StratumLabel:
    return diagnose_ela(E, tol).label
