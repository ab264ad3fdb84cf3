"""Normal forms of the second-order and harmonic fourth-order strata.

Each normal form has its symmetry axes aligned with the reference frame.
Integer, :class:`~fractions.Fraction` or sympy parameters give exact tensors;
floats give float tensors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .classification import StratumLabel
from .harmonic import HarmonicParts, reconstruct
from .tensor_core import (
    ElasticityTensor,
    Harm2,
    Harm4,
    SymTensor,
    canonical_indices,
    is_exact,
    random_rotation,
    rational_rotation,
    rotate,
    scalar,
    to_exact,
)

KINDS = {
    "sym2-ti": ("delta1", "delta2"),
    "h4-cubic": ("delta",),
    "h4-ti": ("delta",),
    "h4-tetragonal": ("delta", "sigma"),
    "h4-trigonal": ("delta", "sigma"),
    "h4-orthotropic": ("lambda1", "lambda2", "lambda3"),
}


@dataclass(frozen=True)
class NormalFormParams:
    """A normal-form family tag with its parameters.

    Examples
    --------
    >>> NormalFormParams("h4-tetragonal", (1, 2)).names
    ('delta', 'sigma')
    """

    kind: str
    values: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown normal form {self.kind!r}; expected one of {sorted(KINDS)}")
        values = tuple(self.values)
        if len(values) != len(KINDS[self.kind]):
            raise ValueError(f"{self.kind} takes {len(KINDS[self.kind])} parameters, got {len(values)}")
        object.__setattr__(self, "values", values)

    @property
    def names(self) -> tuple[str, ...]:
        return KINDS[self.kind]

    @property
    def is_exact(self) -> bool:
        return all(is_exact(v) for v in self.values)

    @classmethod
    def sym2_ti(cls, delta1, delta2):
        return cls("sym2-ti", (delta1, delta2))

    @classmethod
    def h4_cubic(cls, delta):
        return cls("h4-cubic", (delta,))

    @classmethod
    def h4_ti(cls, delta):
        return cls("h4-ti", (delta,))

    @classmethod
    def h4_tetragonal(cls, delta, sigma):
        return cls("h4-tetragonal", (delta, sigma))

    @classmethod
    def h4_trigonal(cls, delta, sigma):
        return cls("h4-trigonal", (delta, sigma))

    @classmethod
    def h4_orthotropic(cls, l1, l2, l3):
        return cls("h4-orthotropic", (l1, l2, l3))


def _scalars(params: NormalFormParams) -> tuple:
    if params.is_exact:
        return tuple(to_exact(v) for v in params.values)
    return tuple(float(v) for v in params.values)


def _h4_from(entries: dict[str, object], exact: bool) -> Harm4:
    """Harm4 from 1-based component labels such as ``"1122"``; missing entries are zero."""
    zero = Fraction(0) if exact else 0.0
    pos = {idx: k for k, idx in enumerate(canonical_indices(4))}
    comps = [zero] * len(pos)
    for key, val in entries.items():
        comps[pos[tuple(sorted(int(c) - 1 for c in key))]] = scalar(val) if exact else float(val)
    return Harm4(np.array(comps, dtype=object if exact else float))


def _ti_entries(d) -> dict:
    return {"1111": 3 * d, "1122": d, "1133": -4 * d, "2222": 3 * d, "2233": -4 * d, "3333": 8 * d}


def build(params: NormalFormParams) -> SymTensor:
    """The normal-form tensor (a :class:`Harm4`, or an order-2 tensor for ``sym2-ti``)."""
    exact = params.is_exact
    vals = _scalars(params)
    kind = params.kind
    if kind == "sym2-ti":
        d1, d2 = vals
        a, b = d1 - d2, d1 + 2 * d2
        zero = Fraction(0) if exact else 0.0
        return SymTensor(2, np.array([a, zero, zero, a, zero, b], dtype=object if exact else float))
    if kind == "h4-cubic":
        (d,) = vals
        return _h4_from(
            {"1111": 8 * d, "2222": 8 * d, "3333": 8 * d, "1122": -4 * d, "1133": -4 * d, "2233": -4 * d}, exact
        )
    if kind == "h4-ti":
        (d,) = vals
        return _h4_from(_ti_entries(d), exact)
    if kind == "h4-tetragonal":
        d, s = vals
        e = _ti_entries(d)
        e.update({"1111": 3 * d - s, "2222": 3 * d - s, "1122": s + d})
        return _h4_from(e, exact)
    if kind == "h4-trigonal":
        d, s = vals
        e = _ti_entries(d)
        e.update({"1123": -s, "2223": s})
        return _h4_from(e, exact)
    l1, l2, l3 = vals
    return _h4_from(
        {"1111": l2 + l3, "2222": l3 + l1, "3333": l1 + l2, "1122": -l3, "1133": -l2, "2233": -l1}, exact
    )


def _is_zero(x, scale, exact: bool) -> bool:
    if exact:
        return scalar(x) == 0
    return abs(float(x)) <= 1e-9 * max(float(scale), 1e-300)


def _tetragonal_label(d, s, exact: bool) -> StratumLabel:
    scale = abs(float(d)) ** 2 * 25 + abs(float(s)) ** 2
    if _is_zero(d, abs(float(d)) + abs(float(s)), exact) and _is_zero(s, abs(float(d)) + abs(float(s)), exact):
        return StratumLabel.ISOTROPIC
    if _is_zero(s, abs(float(d)) + abs(float(s)), exact):
        return StratumLabel.TRANSVERSELY_ISOTROPIC
    if _is_zero(s * s - 25 * d * d, scale, exact):
        return StratumLabel.CUBIC
    return StratumLabel.TETRAGONAL


def _trigonal_label(d, s, exact: bool) -> StratumLabel:
    scale = abs(float(d)) ** 2 * 50 + abs(float(s)) ** 2
    if _is_zero(d, abs(float(d)) + abs(float(s)), exact) and _is_zero(s, abs(float(d)) + abs(float(s)), exact):
        return StratumLabel.ISOTROPIC
    if _is_zero(s, abs(float(d)) + abs(float(s)), exact):
        return StratumLabel.TRANSVERSELY_ISOTROPIC
    if _is_zero(s * s - 50 * d * d, scale, exact):
        return StratumLabel.CUBIC
    return StratumLabel.TRIGONAL


@dataclass(frozen=True)
class Genericity:
    generic: bool
    label: StratumLabel


def genericity(params: NormalFormParams) -> Genericity:
    """Stratum of the normal form at its parameter point, and whether that is the family's own stratum."""
    exact = params.is_exact
    vals = _scalars(params)
    L = StratumLabel
    size = sum(abs(float(v)) for v in vals)
    kind = params.kind
    if kind == "sym2-ti":
        own = L.TRANSVERSELY_ISOTROPIC
        label = L.ISOTROPIC if _is_zero(vals[1], size, exact) else own
    elif kind in ("h4-cubic", "h4-ti"):
        own = L.CUBIC if kind == "h4-cubic" else L.TRANSVERSELY_ISOTROPIC
        label = L.ISOTROPIC if _is_zero(vals[0], size, exact) else own
    elif kind == "h4-tetragonal":
        own = L.TETRAGONAL
        label = _tetragonal_label(*vals, exact)
    elif kind == "h4-trigonal":
        own = L.TRIGONAL
        label = _trigonal_label(*vals, exact)
    else:
        own = L.ORTHOTROPIC
        label = _orthotropic_label(vals, exact)
    return Genericity(label is own, label)


def _orthotropic_label(vals, exact: bool) -> StratumLabel:
    size = sum(abs(float(v)) for v in vals)
    l1, l2, l3 = vals
    eq12, eq13, eq23 = (_is_zero(a - b, size, exact) for a, b in ((l1, l2), (l1, l3), (l2, l3)))
    if eq12 and eq13:
        return StratumLabel.ISOTROPIC if _is_zero(l1, size, exact) else StratumLabel.CUBIC
    if not (eq12 or eq13 or eq23):
        return StratumLabel.ORTHOTROPIC
    # two equal eigen-parameters: a tetragonal form about the remaining axis
    lam, mu = (l1, l3) if eq12 else (l1, l2) if eq13 else (l2, l1)
    quarter = Fraction(1, 4) if exact else 0.25
    return _tetragonal_label(lam * quarter, -mu - lam * quarter, exact)


def sample_orbit(X, seed):
    """A point of the orbit of ``X``: Haar-random rotation for floats, rational rotation for exact input."""
    exact = getattr(X, "is_exact", False)
    g = rational_rotation(seed) if exact else random_rotation(seed)
    return rotate(g, X)


def ela_from_parts(tr_d=0, tr_v=0, d_dev: SymTensor | None = None, v_dev: SymTensor | None = None,
                   h: SymTensor | None = None, *, exact: bool | None = None) -> ElasticityTensor:
    """Assemble an elasticity tensor from harmonic parts; missing parts are zero."""
    given = [x for x in (d_dev, v_dev, h) if x is not None]
    if exact is None:
        exact = all(x.is_exact for x in given) and is_exact(tr_d) and is_exact(tr_v)
    conv = to_exact if exact else float

    def fix(x, order):
        if x is None:
            return SymTensor.zeros(order, exact)
        return x.to_exact() if exact and not x.is_exact else (x if exact else x.to_float())

    parts = HarmonicParts(
        conv(tr_d), conv(tr_v), Harm2(fix(d_dev, 2)), Harm2(fix(v_dev, 2)), Harm4(fix(h, 4))
    )
    return reconstruct(parts)
