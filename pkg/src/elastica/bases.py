"""Minimal functional bases per stratum and orbit-separation verdicts."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .classification import (
    StratumLabel,
    classify_ela,
    classify_h4,
    classify_sym2,
)
from .covariants import (
    CovariantUndefinedError,
    d2,
    invariants_ela,
    invariants_h4,
    invariants_sym2,
    t_covariant,
    trace_cross,
)
from .harmonic import HarmonicParts, decompose, is_axis_deviator, reconstruct
from .tensor_core import (
    ElasticityTensor,
    SymTensor,
    Tolerance,
    contract2,
    cross_product,
    inner,
    quadratic,
    scalar,
    trace,
)


class StratumMismatchError(ValueError):
    """The requested stratum differs from the detected one, or has no basis here."""


class InconsistentStratumError(ValueError):
    """A quantity that cannot vanish on the detected stratum evaluated to zero."""


@dataclass(frozen=True)
class BasisValues:
    stratum: StratumLabel
    names: tuple[str, ...]
    values: tuple

    def __post_init__(self):
        if len(self.names) != len(self.values):
            raise ValueError("names and values differ in length")

    def __len__(self) -> int:
        return len(self.values)

    def to_dict(self) -> dict:
        return dict(zip(self.names, self.values))


def _div(a, b):
    if isinstance(a, int):
        a = Fraction(a)
    if isinstance(b, int):
        b = Fraction(b)
    return scalar(a / b)


def _resolve(label, detected: StratumLabel) -> StratumLabel:
    if label is None or label == "auto":
        return detected
    label = StratumLabel(label) if isinstance(label, str) else label
    if label is not detected:
        raise StratumMismatchError(f"requested stratum {label} but the tensor is {detected}")
    return label


def functional_basis_sym2(a: SymTensor, label=None, tol: Tolerance | None = None) -> BasisValues:
    """``(I1, J2, J3)``, ``(I1, J3/J2)`` or ``(I1,)`` by stratum."""
    L = StratumLabel
    label = _resolve(label, classify_sym2(a, tol))
    inv = invariants_sym2(a)
    if label is L.ISOTROPIC:
        return BasisValues(label, ("I1",), (inv.i1,))
    if label is L.TRANSVERSELY_ISOTROPIC:
        return BasisValues(label, ("I1", "J3/J2"), (inv.i1, _div(inv.j3, inv.j2)))
    return BasisValues(label, ("I1", "J2", "J3"), (inv.i1, inv.j2, inv.j3))


def orthotropic_discriminant(inv) -> object:
    """``Delta^2 = (2 I2^3 - 60 I3^2 - 9 I2 I4 + 18 I6) / 1296``."""
    return _div(2 * inv.i2**3 - 60 * inv.i3**2 - 9 * inv.i2 * inv.i4 + 18 * inv.i6, 1296)


def functional_basis_h4(H: SymTensor, label=None, tol: Tolerance | None = None) -> BasisValues:
    L = StratumLabel
    label = _resolve(label, classify_h4(H, tol))
    inv = invariants_h4(H)
    if label is L.CUBIC:
        return BasisValues(label, ("I3/I2",), (_div(inv.i3, inv.i2),))
    if label is L.TRANSVERSELY_ISOTROPIC:
        return BasisValues(label, ("delta",), (_div(7 * inv.i3, 18 * inv.i2),))
    if label in (L.TETRAGONAL, L.TRIGONAL):
        return BasisValues(label, ("I5/I4", "I2"), (_div(inv.i5, inv.i4), inv.i2))
    if label is L.ORTHOTROPIC:
        disc = orthotropic_discriminant(inv)
        if disc == 0 or abs(float(disc)) <= 1e-12 * float(inv.i2) ** 3:
            raise InconsistentStratumError("discriminant vanishes on a tensor classified orthotropic")
        s1 = _div(6 * inv.i7 + 3 * inv.i3 * inv.i4 - 2 * inv.i2 * inv.i5, 96 * disc)
        s2 = scalar(_div(4, 7) * s1**2 - _div(inv.i2, 14))
        s3 = scalar(_div(s1**3, 7) - _div(s1 * inv.i2, 56) - _div(inv.i3, 24))
        return BasisValues(label, ("sigma1", "sigma2", "sigma3"), (s1, s2, s3))
    raise StratumMismatchError(f"no functional basis implemented for harmonic stratum {label}")


def _as_parts(E) -> tuple[HarmonicParts, ElasticityTensor]:
    if isinstance(E, HarmonicParts):
        return E, reconstruct(E)
    return decompose(E), E


def functional_basis_ela(
    E: ElasticityTensor | HarmonicParts, label=None, tol: Tolerance | None = None, *, kappa6: str = "I2"
) -> BasisValues:
    """Rational invariants separating orbits inside one elasticity stratum.

    ``kappa6`` selects the last invariant of the tetragonal and trigonal
    bases: ``"I2"`` (default) or ``"I3"``.
    """
    if kappa6 not in ("I2", "I3"):
        raise ValueError("kappa6 must be 'I2' or 'I3'")
    L = StratumLabel
    parts, E = _as_parts(E)
    label = _resolve(label, classify_ela(E, tol))
    base_names, base = ("tr_d", "tr_v"), (parts.tr_d, parts.tr_v)
    if label is L.ISOTROPIC:
        return BasisValues(label, base_names, base)
    H = parts.h
    if label is L.CUBIC:
        D2 = d2(H)
        from .covariants import d3

        return BasisValues(label, base_names + ("I3/I2",), base + (_div(trace(d3(H)), trace(D2)),))
    if label in (L.TRANSVERSELY_ISOTROPIC, L.TETRAGONAL, L.TRIGONAL):
        try:
            t = t_covariant(parts, tol)
        except CovariantUndefinedError as exc:
            raise InconsistentStratumError(f"{exc}; classifier and tolerance disagree") from exc
        names = base_names + ("d:t", "v:t", "t:H:t")
        values = base + (inner(parts.d_dev, t), inner(parts.v_dev, t), quadratic(t, H))
        if label is L.TRANSVERSELY_ISOTROPIC:
            return BasisValues(label, names, values)
        extra = trace(d2(H)) if kappa6 == "I2" else invariants_h4(H).i3
        return BasisValues(label, names + (kappa6,), values + (extra,))
    raise StratumMismatchError(f"no functional basis implemented for elasticity stratum {label}")


# ---------------------------------------------------------------------------
# separation
# ---------------------------------------------------------------------------

class Separation(enum.Enum):
    SAME = "same_orbit"
    DIFFERENT = "different_orbit"
    OUT_OF_SCOPE = "out_of_scope"


@dataclass(frozen=True)
class SeparationVerdict:
    verdict: Separation
    witness: str | None = None
    labels: tuple = field(default=())

    def __post_init__(self):
        if (self.witness is not None) != (self.verdict is Separation.DIFFERENT):
            raise ValueError("a witness is reported exactly for different orbits")

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "witness": self.witness,
            "labels": [str(x) for x in self.labels],
        }


ELA_SEPARATING = (("K1", "k1", 1), ("L1", "l1", 1), ("I3", "i3", 3), ("K4", "k4", 4),
                  ("K5", "k5", 5), ("L5", "l5", 5), ("K9", "k9", 9), ("K10", "k10", 10))


# float noise allowance for an invariant of degree k, in units of |E|^k
NOISE_FLOOR = 1e-11


def _agree(a, b, scale: float, degree: int, rel: float, exact: bool) -> bool:
    if exact:
        return scalar(a - b) == 0
    a, b = float(a), float(b)
    return abs(a - b) <= rel * max(abs(a), abs(b)) + NOISE_FLOOR * scale**degree


def separate_ela(
    E1: ElasticityTensor, E2: ElasticityTensor, tol: Tolerance | None = None, *, rel: float = 1e-6
) -> SeparationVerdict:
    """Decide whether two elasticity tensors lie on one orbit.

    Valid on the union of the at-least-tetragonal and at-least-trigonal
    strata; other inputs are out of scope.  Float comparisons use
    ``|a - b| <= rel * max(|a|, |b|) + NOISE_FLOOR * max(|E1|, |E2|)^deg``.
    """
    L = StratumLabel
    labels = (classify_ela(E1, tol), classify_ela(E2, tol))
    if L.LOWER_THAN_TETRA_TRIG in labels:
        return SeparationVerdict(Separation.OUT_OF_SCOPE, None, labels)
    exact = E1.is_exact and E2.is_exact
    scale = max(E1.norm(), E2.norm())
    a, b = invariants_ela(E1).as_dict(), invariants_ela(E2).as_dict()
    for name, key, degree in ELA_SEPARATING:
        if not _agree(a[key], b[key], scale, degree, rel, exact):
            return SeparationVerdict(Separation.DIFFERENT, name, labels)
    return SeparationVerdict(Separation.SAME, None, labels)


def _pair_kind(H: SymTensor, t: SymTensor, tol: Tolerance) -> str | None:
    exact = H.is_exact and t.is_exact
    h2 = float(H.norm2())

    def small(x: SymTensor, degree: int) -> bool:
        n2 = x.norm2()
        return n2 == 0 if exact else tol.is_zero(n2, h2, degree)

    if small(trace_cross(H, t), 2):
        return "tetragonal"
    if small(cross_product(t, contract2(H, t)), 2):
        return "trigonal"
    return None


def pair_invariants(H: SymTensor, t: SymTensor) -> dict:
    inv = invariants_h4(H)
    return {
        "I3": inv.i3,
        "I4": inv.i4,
        "|tr(H x t)|^2": trace_cross(H, t).norm2(),
        "t:H:t": quadratic(t, H),
    }


def separate_h4_pair(
    H1: SymTensor, t1: SymTensor, H2: SymTensor, t2: SymTensor,
    tol: Tolerance | None = None, *, rel: float = 1e-6,
) -> SeparationVerdict:
    """Orbit separation for pairs ``(H, t)`` with ``t = (n (x) n)'``.

    Both pairs must be at least tetragonal or at least trigonal.
    """
    tol = tol or Tolerance()
    for t in (t1, t2):
        if not is_axis_deviator(t, max(tol.rel, 1e-8)):
            raise ValueError("t must be the deviator of n(x)n for a unit vector n")
    kinds = (_pair_kind(H1, t1, tol), _pair_kind(H2, t2, tol))
    if None in kinds:
        return SeparationVerdict(Separation.OUT_OF_SCOPE, None, kinds)
    exact = all(x.is_exact for x in (H1, t1, H2, t2))
    scale = max(H1.norm(), H2.norm())
    a, b = pair_invariants(H1, t1), pair_invariants(H2, t2)
    for name, degree in (("I3", 3), ("I4", 4), ("|tr(H x t)|^2", 2), ("t:H:t", 1)):
        if not _agree(a[name], b[name], scale, degree, rel, exact):
            return SeparationVerdict(Separation.DIFFERENT, name, kinds)
    return SeparationVerdict(Separation.SAME, None, kinds)


BASIS_SIZES_ELA = {
    StratumLabel.ISOTROPIC: 2,
    StratumLabel.CUBIC: 3,
    StratumLabel.TRANSVERSELY_ISOTROPIC: 5,
    StratumLabel.TETRAGONAL: 6,
    StratumLabel.TRIGONAL: 6,
}
BASIS_SIZES_H4 = {
    StratumLabel.CUBIC: 1,
    StratumLabel.TRANSVERSELY_ISOTROPIC: 1,
    StratumLabel.TETRAGONAL: 2,
    StratumLabel.TRIGONAL: 2,
    StratumLabel.ORTHOTROPIC: 3,
}
