"""Totally symmetric tensors over R^3 and the algebra used by the rest of the package.

Components are stored once per multiset of indices (non-decreasing index
tuples), so an order-``n`` tensor holds ``C(n + 2, 2)`` numbers.  Indices are
0-based in code: ``S[0, 1]`` is the component usually written ``S_12``.

Two scalar flavours share every code path:

* float mode -- ``numpy.float64`` arrays, used at runtime;
* exact mode -- ``dtype=object`` arrays holding :class:`fractions.Fraction`
  (or sympy numbers when a radical such as ``sqrt(2)`` is unavoidable).

Mixing the two degrades to floats.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache, cached_property
from numbers import Number

import numpy as np

MAX_ORDER = 6
DEFAULT_RTOL = 1e-9

# Kelvin / Voigt ordering of symmetric index pairs: 11, 22, 33, 23, 13, 12.
VOIGT_PAIRS = ((0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1))
_VOIGT_INDEX = np.array([[0, 5, 4], [5, 1, 3], [4, 3, 2]])


class UnsupportedOrderError(ValueError):
    """Raised when a result would exceed :data:`MAX_ORDER`."""


# ---------------------------------------------------------------------------
# scalar plumbing
# ---------------------------------------------------------------------------

def _is_sympy(value) -> bool:
    return type(value).__module__.startswith("sympy")


def is_exact(x) -> bool:
    """True when ``x`` (array, tensor or scalar) carries exact scalars."""
    if isinstance(x, (SymTensor, ElasticityTensor)):
        return x.is_exact
    if isinstance(x, Rotation):
        return x.matrix.dtype == object
    if isinstance(x, np.ndarray):
        return x.dtype == object
    return isinstance(x, (int, Fraction)) or _is_sympy(x)


def to_exact(x):
    """Convert a scalar or array-like to exact arithmetic.

    Integers and strings such as ``"3/7"`` become :class:`Fraction`; floats are
    converted through their exact binary value; sympy numbers are kept.
    """
    if isinstance(x, (SymTensor, ElasticityTensor)):
        return x.to_exact()
    if isinstance(x, (list, tuple, np.ndarray)):
        arr = np.asarray(x, dtype=object)
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            out[idx] = to_exact(v)
        return out
    if _is_sympy(x) or isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(float(x))


def _as_array(x) -> np.ndarray:
    arr = np.asarray(x)
    if arr.dtype == object:
        return arr
    if arr.dtype.kind in "biuf":
        return arr.astype(np.float64)
    raise TypeError(f"unsupported component dtype {arr.dtype}")


def coef(value, exact: bool):
    """A numeric constant in the right flavour (``Fraction`` or ``float``)."""
    return Fraction(value) if exact else float(value)


def _match(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if (a.dtype == object) == (b.dtype == object):
        return a, b
    return a.astype(np.float64), b.astype(np.float64)


def _expand(v):
    if _is_sympy(v):
        import sympy

        return sympy.expand(v)
    return v


_expand_all = np.frompyfunc(_expand, 1, 1)


def tidy(arr: np.ndarray) -> np.ndarray:
    """Keep sympy expressions expanded so radicals cancel as soon as possible."""
    if arr.dtype == object and arr.size and any(_is_sympy(v) for v in arr.flat):
        return _expand_all(arr).astype(object)
    return arr


def scalar(value):
    """Normalise a scalar result (expand sympy, unwrap 0-d arrays)."""
    if isinstance(value, np.ndarray):
        value = value.item() if value.dtype == object else float(value)
    if isinstance(value, np.floating):
        return float(value)
    return _expand(value)


def sqrt2(exact: bool):
    if exact:
        import sympy

        return sympy.sqrt(2)
    return math.sqrt(2.0)


@dataclass(frozen=True)
class Tolerance:
    """Relative zero test for homogeneous covariants.

    A covariant ``C`` of polynomial degree ``deg`` in a tensor ``X`` counts as
    zero when ``|C|^2 <= rel^2 * (|X|^2)^deg``.  Exact zeros always pass, so
    rational inputs are decided exactly.
    """

    rel: float = DEFAULT_RTOL

    def threshold(self, scale2, degree: int) -> float:
        return self.rel * self.rel * float(scale2) ** degree

    def is_zero(self, norm2, scale2, degree: int) -> bool:
        if norm2 == 0:
            return True
        return float(norm2) <= self.threshold(scale2, degree)


# ---------------------------------------------------------------------------
# multiset index bookkeeping
# ---------------------------------------------------------------------------

@cache
def canonical_indices(order: int) -> tuple[tuple[int, ...], ...]:
    """Non-decreasing index tuples of the given order, in storage order."""
    return tuple(itertools.combinations_with_replacement(range(3), order))


@cache
def _position(order: int) -> dict[tuple[int, ...], int]:
    return {idx: k for k, idx in enumerate(canonical_indices(order))}


@cache
def _index_map(order: int) -> np.ndarray:
    pos = _position(order)
    out = np.empty((3,) * order, dtype=np.intp)
    for idx in itertools.product(range(3), repeat=order):
        out[idx] = pos[tuple(sorted(idx))]
    return out


@cache
def multiplicities(order: int) -> np.ndarray:
    """Number of distinct permutations of each canonical multi-index."""
    return np.bincount(_index_map(order).ravel(), minlength=len(canonical_indices(order)))


@cache
def _canonical_slices(order: int) -> tuple[np.ndarray, ...]:
    idx = np.array(canonical_indices(order), dtype=np.intp).reshape(-1, order)
    return tuple(idx[:, k] for k in range(order))


def _check_order(order: int) -> None:
    if not 0 <= order <= MAX_ORDER:
        raise UnsupportedOrderError(f"order {order} outside 0..{MAX_ORDER}")


# ---------------------------------------------------------------------------
# tensors
# ---------------------------------------------------------------------------

class SymTensor:
    """Totally symmetric tensor of order 0..6 stored on canonical multi-indices."""

    __array_ufunc__ = None  # keep numpy from broadcasting over us

    def __init__(self, order: int, components):
        _check_order(order)
        comps = _as_array(components).reshape(-1)
        if comps.size != len(canonical_indices(order)):
            raise ValueError(
                f"order {order} needs {len(canonical_indices(order))} components, got {comps.size}"
            )
        comps = comps.copy()
        comps.flags.writeable = False
        self.order = order
        self.components = comps

    @classmethod
    def _raw(cls, order: int, comps: np.ndarray):
        obj = cls.__new__(cls)
        comps = comps.copy()
        comps.flags.writeable = False
        obj.order = order
        obj.components = comps
        return obj

    def _like(self, comps: np.ndarray):
        return type(self)._raw(self.order, comps)

    @classmethod
    def zeros(cls, order: int, exact: bool = False) -> "SymTensor":
        _check_order(order)
        n = len(canonical_indices(order))
        comps = np.array([Fraction(0)] * n, dtype=object) if exact else np.zeros(n)
        return SymTensor._raw(order, comps)

    @classmethod
    def from_dense(cls, dense, *, check: bool = True, rtol: float = DEFAULT_RTOL) -> "SymTensor":
        """Wrap a dense array that is already totally symmetric.

        With ``check`` the input is compared against its symmetrization.
        """
        arr = _as_array(dense)
        _check_order(arr.ndim)
        comps = arr[_canonical_slices(arr.ndim)] if arr.ndim else arr.reshape(1)
        out = SymTensor._raw(arr.ndim, comps)
        if check and not _close_arrays(out.dense, arr, rtol):
            raise ValueError("tensor is not totally symmetric")
        return out

    @property
    def is_exact(self) -> bool:
        return self.components.dtype == object

    @property
    def size(self) -> int:
        return self.components.size

    @cached_property
    def dense(self) -> np.ndarray:
        if self.order == 0:
            out = self.components.reshape(())
        else:
            out = self.components[_index_map(self.order)]
        out.flags.writeable = False
        return out

    def matrix(self) -> np.ndarray:
        """Dense 3x3 array of an order-2 tensor."""
        if self.order != 2:
            raise ValueError("matrix() needs an order-2 tensor")
        return self.dense

    def __getitem__(self, idx):
        if isinstance(idx, (int, np.integer)):
            idx = (idx,)
        idx = tuple(idx)
        if len(idx) != self.order:
            raise IndexError(f"expected {self.order} indices")
        return self.components[_position(self.order)[tuple(sorted(idx))]]

    def norm2(self):
        """Squared Frobenius norm of the full tensor."""
        return scalar(np.sum(multiplicities(self.order) * self.components * self.components))

    def norm(self) -> float:
        return math.sqrt(float(self.norm2()))

    def to_float(self):
        return self._like(self.components.astype(np.float64))

    def to_exact(self):
        return self._like(to_exact(self.components))

    # arithmetic ---------------------------------------------------------
    def _coerce(self, k):
        if isinstance(k, np.ndarray) and k.ndim == 0:
            k = k.item()
        if not (isinstance(k, Number) or _is_sympy(k)):
            return None
        if self.is_exact:
            return k
        return float(k)

    def __add__(self, other):
        if not isinstance(other, SymTensor) or other.order != self.order:
            return NotImplemented
        a, b = _match(self.components, other.components)
        cls = type(self) if type(self) is type(other) else SymTensor
        return cls._raw(self.order, tidy(a + b))

    def __sub__(self, other):
        if not isinstance(other, SymTensor) or other.order != self.order:
            return NotImplemented
        a, b = _match(self.components, other.components)
        cls = type(self) if type(self) is type(other) else SymTensor
        return cls._raw(self.order, tidy(a - b))

    def __neg__(self):
        return self._like(-self.components)

    def __mul__(self, k):
        k = self._coerce(k)
        if k is None:
            return NotImplemented
        return self._like(tidy(self.components * k))

    __rmul__ = __mul__

    def __truediv__(self, k):
        k = self._coerce(k)
        if k is None:
            return NotImplemented
        if self.is_exact and isinstance(k, int):
            k = Fraction(k)
        return self._like(tidy(self.components / k) if self.is_exact else self.components / k)

    def __eq__(self, other):
        if not isinstance(other, SymTensor) or other.order != self.order:
            return NotImplemented
        return bool(np.all(self.components == other.components))

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}(order={self.order}, components={list(self.components)})"

    def _rotated(self, g: "Rotation"):
        t, m = _match(self.dense, g.matrix)
        for _ in range(self.order):
            t = np.tensordot(t, m, axes=([0], [1]))
        t = tidy(np.asarray(t))
        comps = t[_canonical_slices(self.order)] if self.order else t.reshape(1)
        return self._like(comps)


class _Harmonic(SymTensor):
    _ORDER = 0

    def __init__(self, components, *, rtol: float = DEFAULT_RTOL):
        if isinstance(components, SymTensor):
            if components.order != self._ORDER:
                raise ValueError(f"expected order {self._ORDER}, got {components.order}")
            components = components.components
        super().__init__(self._ORDER, components)
        tr = trace_contract(SymTensor._raw(self.order, self.components))
        if not _is_small(tr.norm2(), self.norm2(), rtol):
            raise ValueError("tensor is not traceless")


class Harm2(_Harmonic):
    """Traceless symmetric second-order tensor (5 degrees of freedom)."""

    _ORDER = 2


class Harm4(_Harmonic):
    """Traceless totally symmetric fourth-order tensor (9 degrees of freedom)."""

    _ORDER = 4


def _is_small(value2, scale2, rtol: float) -> bool:
    if value2 == 0:
        return True
    return float(value2) <= rtol * rtol * float(scale2)


def _close_arrays(a: np.ndarray, b: np.ndarray, rtol: float) -> bool:
    a, b = _match(np.asarray(a), np.asarray(b))
    diff = tidy(np.asarray(a - b))
    if a.dtype == object and all(v == 0 for v in diff.flat):
        return True
    d2 = float(np.sum(diff.astype(np.float64) ** 2))
    s2 = max(float(np.sum(a.astype(np.float64) ** 2)), float(np.sum(b.astype(np.float64) ** 2)))
    return d2 <= rtol * rtol * s2 if s2 else d2 == 0


def metric(exact: bool = False) -> SymTensor:
    """The Euclidean metric ``q`` (components delta_ij)."""
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    return SymTensor._raw(2, np.array([one, zero, zero, one, zero, one], dtype=object if exact else float))


def sym2(matrix) -> SymTensor:
    """Order-2 tensor from a symmetric 3x3 matrix (symmetrized)."""
    return symmetrize(np.asarray(matrix, dtype=object) if is_exact(np.asarray(matrix)) else matrix)


def vector(values) -> SymTensor:
    return SymTensor(1, values)


@cache
def _levi_civita() -> np.ndarray:
    eps = np.zeros((3, 3, 3), dtype=np.int64)
    for i, j, k in itertools.permutations(range(3)):
        eps[i, j, k] = round(np.linalg.det(np.eye(3)[[i, j, k]]))
    eps.flags.writeable = False
    return eps


def levi_civita(exact: bool = False) -> np.ndarray:
    eps = _levi_civita()
    return eps.astype(object) if exact else eps.astype(np.float64)


# ---------------------------------------------------------------------------
# algebra
# ---------------------------------------------------------------------------

def symmetrize(T) -> SymTensor:
    """Total symmetrization of a dense order-n tensor (average over all index permutations)."""
    arr = _as_array(T)
    order = arr.ndim
    _check_order(order)
    if order == 0:
        return SymTensor._raw(0, arr.reshape(1))
    exact = arr.dtype == object
    n = len(canonical_indices(order))
    sums = np.array([Fraction(0)] * n, dtype=object) if exact else np.zeros(n)
    np.add.at(sums, _index_map(order).ravel(), arr.ravel())
    counts = multiplicities(order)
    if exact:
        weights = np.array([Fraction(1, int(c)) for c in counts], dtype=object)
        return SymTensor._raw(order, tidy(sums * weights))
    return SymTensor._raw(order, sums / counts)


def sym_product(S1: SymTensor, S2: SymTensor) -> SymTensor:
    """Symmetric tensor product ``(S1 (x) S2)^s``."""
    if S1.order + S2.order > MAX_ORDER:
        raise UnsupportedOrderError(f"product order {S1.order + S2.order} exceeds {MAX_ORDER}")
    a, b = _match(S1.dense, S2.dense)
    return symmetrize(tidy(np.multiply.outer(a, b)))


def cross_product(S1: SymTensor, S2: SymTensor) -> SymTensor:
    """Generalized cross product ``(S2 . eps . S1)^s`` of order ``n1 + n2 - 1``.

    The last index of ``S2`` is contracted with the first index of the
    Levi-Civita tensor and its last index with the first index of ``S1``.
    """
    if S1.order < 1 or S2.order < 1:
        raise ValueError("cross product needs tensors of order >= 1")
    if S1.order + S2.order - 1 > MAX_ORDER:
        raise UnsupportedOrderError(f"cross product order {S1.order + S2.order - 1} exceeds {MAX_ORDER}")
    a, b = _match(S2.dense, S1.dense)
    eps = levi_civita(a.dtype == object)
    t = np.tensordot(np.tensordot(a, eps, axes=([-1], [0])), b, axes=([-1], [0]))
    return symmetrize(tidy(np.asarray(t)))


def trace_contract(S: SymTensor) -> SymTensor:
    """Contract the last two indices of an order >= 2 tensor."""
    if S.order < 2:
        raise ValueError("trace needs order >= 2")
    t = np.trace(S.dense, axis1=-2, axis2=-1)
    return SymTensor.from_dense(np.asarray(t), check=False)


def trace(a: SymTensor):
    """Trace of an order-2 tensor."""
    return scalar(trace_contract(a).components[0])


def deviator(a: SymTensor) -> Harm2:
    """``a - (tr a / 3) q``."""
    if a.order != 2:
        raise ValueError("deviator needs an order-2 tensor")
    exact = a.is_exact
    q = metric(exact)
    return Harm2._raw(2, (a - q * (trace(a) * coef(Fraction(1, 3), exact))).components)


def inner(A: SymTensor, B: SymTensor):
    """Full contraction ``A_{i..} B_{i..}`` of two tensors of equal order."""
    if A.order != B.order:
        raise ValueError("inner product needs equal orders")
    a, b = _match(A.components, B.components)
    return scalar(np.sum(multiplicities(A.order) * a * b))


def contract2(A: SymTensor, b: SymTensor) -> SymTensor:
    """Double contraction ``A : b`` of a symmetric tensor with an order-2 tensor."""
    if b.order != 2 or A.order < 2:
        raise ValueError("contract2 needs A of order >= 2 and b of order 2")
    x, y = _match(A.dense, b.dense)
    return SymTensor.from_dense(tidy(np.asarray(np.tensordot(x, y, axes=2))), check=False)


def quadratic(t: SymTensor, H: SymTensor, u: SymTensor | None = None):
    """``t : H : u`` for an order-4 ``H`` (``u`` defaults to ``t``)."""
    return inner(t if u is None else u, contract2(H, t))


def matmul(*mats: np.ndarray) -> np.ndarray:
    """Product of 3x3 arrays, keeping exact arithmetic when all inputs are exact."""
    arrs = [np.asarray(m) for m in mats]
    if any(a.dtype != object for a in arrs):
        arrs = [a.astype(np.float64) for a in arrs]
    out = arrs[0]
    for m in arrs[1:]:
        out = tidy(out @ m)
    return out


def axial(m: np.ndarray) -> np.ndarray:
    """``(eps : m)_i = eps_ijk m_jk``."""
    m = np.asarray(m)
    return tidy(np.asarray(np.tensordot(levi_civita(m.dtype == object), m, axes=([1, 2], [0, 1]))))


# ---------------------------------------------------------------------------
# elasticity tensors
# ---------------------------------------------------------------------------

class ElasticityTensor:
    """Fourth-order tensor with minor and major index symmetries (21 dof).

    Stored as the unscaled 6x6 Voigt array ``V[I, J] = E_ijkl``; the Kelvin
    matrix is derived on demand.  Keeping the stored entries free of
    ``sqrt(2)`` lets exact mode stay in the rationals.
    """

    __array_ufunc__ = None

    def __init__(self, voigt, *, rtol: float = DEFAULT_RTOL):
        v = _as_array(voigt)
        if v.shape == (21,):
            v = _unpack_upper(v)
        if v.shape != (6, 6):
            raise ValueError(f"expected a 6x6 matrix or 21 upper-triangle entries, got shape {v.shape}")
        if not _close_arrays(v, v.T, rtol):
            raise ValueError("elasticity matrix is not symmetric")
        v = v.copy()
        v.flags.writeable = False
        self.voigt = v

    @classmethod
    def _raw(cls, voigt: np.ndarray) -> "ElasticityTensor":
        obj = cls.__new__(cls)
        v = voigt.copy()
        v.flags.writeable = False
        obj.voigt = v
        return obj

    @classmethod
    def from_dense(cls, E, *, rtol: float = DEFAULT_RTOL) -> "ElasticityTensor":
        arr = _as_array(E)
        if arr.shape != (3, 3, 3, 3):
            raise ValueError("expected a 3x3x3x3 array")
        for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
            if not _close_arrays(arr, arr.transpose(perm), rtol):
                raise ValueError("tensor lacks the minor/major symmetries of elasticity")
        return cls._raw(_dense_to_voigt(arr))

    @classmethod
    def from_symmetric(cls, S: SymTensor) -> "ElasticityTensor":
        """Embed a totally symmetric order-4 tensor (e.g. a harmonic part)."""
        if S.order != 4:
            raise ValueError("expected an order-4 tensor")
        return cls._raw(_dense_to_voigt(S.dense))

    @classmethod
    def zeros(cls, exact: bool = False) -> "ElasticityTensor":
        v = np.array([[Fraction(0)] * 6] * 6, dtype=object) if exact else np.zeros((6, 6))
        return cls._raw(v)

    @property
    def is_exact(self) -> bool:
        return self.voigt.dtype == object

    @cached_property
    def dense(self) -> np.ndarray:
        out = self.voigt[_VOIGT_INDEX[:, :, None, None], _VOIGT_INDEX[None, None, :, :]]
        out.flags.writeable = False
        return out

    def __getitem__(self, idx):
        i, j, k, l = idx
        return self.voigt[_VOIGT_INDEX[i, j], _VOIGT_INDEX[k, l]]

    def kelvin(self) -> np.ndarray:
        return voigt_to_kelvin(self.voigt)

    def norm2(self):
        d = self.dense
        return scalar(np.sum(d * d))

    def norm(self) -> float:
        return math.sqrt(float(self.norm2()))

    def to_float(self):
        return ElasticityTensor._raw(self.voigt.astype(np.float64))

    def to_exact(self):
        return ElasticityTensor._raw(to_exact(self.voigt))

    def __add__(self, other):
        if not isinstance(other, ElasticityTensor):
            return NotImplemented
        a, b = _match(self.voigt, other.voigt)
        return ElasticityTensor._raw(tidy(a + b))

    def __sub__(self, other):
        if not isinstance(other, ElasticityTensor):
            return NotImplemented
        a, b = _match(self.voigt, other.voigt)
        return ElasticityTensor._raw(tidy(a - b))

    def __neg__(self):
        return ElasticityTensor._raw(-self.voigt)

    def __mul__(self, k):
        if not (isinstance(k, Number) or _is_sympy(k)):
            return NotImplemented
        k = k if self.is_exact else float(k)
        return ElasticityTensor._raw(tidy(self.voigt * k))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ElasticityTensor):
            return NotImplemented
        return bool(np.all(self.voigt == other.voigt))

    __hash__ = None

    def __repr__(self):
        return f"ElasticityTensor(voigt={self.voigt.tolist()})"

    def _rotated(self, g: "Rotation") -> "ElasticityTensor":
        t, m = _match(self.dense, g.matrix)
        for _ in range(4):
            t = np.tensordot(t, m, axes=([0], [1]))
        return ElasticityTensor._raw(_dense_to_voigt(tidy(np.asarray(t))))


def _dense_to_voigt(arr: np.ndarray) -> np.ndarray:
    out = np.empty((6, 6), dtype=arr.dtype)
    for I, (i, j) in enumerate(VOIGT_PAIRS):
        for J, (k, l) in enumerate(VOIGT_PAIRS):
            out[I, J] = arr[i, j, k, l]
    return out


def _unpack_upper(values: np.ndarray) -> np.ndarray:
    out = np.empty((6, 6), dtype=values.dtype)
    it = iter(values)
    for I in range(6):
        for J in range(I, 6):
            out[I, J] = out[J, I] = next(it)
    return out


def _kelvin_weights(exact: bool) -> np.ndarray:
    r = sqrt2(exact)
    one = Fraction(1) if exact else 1.0
    return np.array([one, one, one, r, r, r], dtype=object if exact else np.float64)


def voigt_to_kelvin(voigt) -> np.ndarray:
    """Scale an unscaled Voigt array ``V[I, J] = E_ijkl`` into Kelvin form."""
    v = _as_array(voigt)
    w = _kelvin_weights(v.dtype == object)
    return tidy(v * np.multiply.outer(w, w))


def kelvin_to_voigt(kelvin) -> np.ndarray:
    k = _as_array(kelvin)
    w = _kelvin_weights(k.dtype == object)
    return tidy(k / np.multiply.outer(w, w))


def kelvin_matrix(X) -> np.ndarray:
    """6x6 Kelvin matrix of an order-4 symmetric tensor or an elasticity tensor.

    Off-diagonal blocks carry ``sqrt(2)`` and the lower-right block carries ``2``,
    so the Frobenius norm of the matrix equals the tensor norm.
    """
    if isinstance(X, ElasticityTensor):
        return X.kelvin()
    if isinstance(X, SymTensor) and X.order == 4:
        return voigt_to_kelvin(_dense_to_voigt(X.dense))
    raise TypeError("kelvin_matrix expects an order-4 SymTensor or an ElasticityTensor")


def from_kelvin(matrix, target: str = "ela", *, rtol: float = DEFAULT_RTOL):
    """Inverse of :func:`kelvin_matrix`.

    ``target`` is ``"ela"`` for an :class:`ElasticityTensor` or ``"harm4"`` for a
    :class:`Harm4`; the latter requires a totally symmetric, traceless tensor.
    """
    k = _as_array(matrix)
    if k.shape != (6, 6):
        raise ValueError("Kelvin matrix must be 6x6")
    if not _close_arrays(k, k.T, rtol):
        raise ValueError("Kelvin matrix is not symmetric")
    E = ElasticityTensor(kelvin_to_voigt(k), rtol=rtol)
    if target == "ela":
        return E
    if target == "harm4":
        return harm4_from_ela(E, rtol=rtol)
    raise ValueError(f"unknown target {target!r}")


def harm4_from_ela(E: ElasticityTensor, *, rtol: float = DEFAULT_RTOL) -> Harm4:
    """View an elasticity tensor as a harmonic one; it must be totally symmetric and traceless."""
    dense = E.dense
    S = symmetrize(dense)
    if not _close_arrays(S.dense, dense, rtol):
        raise ValueError("tensor is not totally symmetric")
    return Harm4(S, rtol=rtol)


# ---------------------------------------------------------------------------
# rotations
# ---------------------------------------------------------------------------

class Rotation:
    """Proper orthogonal 3x3 transform acting on every tensor type."""

    def __init__(self, matrix, *, rtol: float = DEFAULT_RTOL):
        g = _as_array(matrix)
        if g.shape != (3, 3):
            raise ValueError("rotation must be 3x3")
        gtg = matmul(g.T, g)
        ident = np.eye(3)
        if g.dtype == object:
            ident = np.array([[Fraction(int(i == j)) for j in range(3)] for i in range(3)], dtype=object)
        if not _close_arrays(gtg, ident, rtol):
            raise ValueError("matrix is not orthogonal")
        if float(_det3(g)) <= 0:
            raise ValueError("improper rotation (det < 0) is not supported")
        g = g.copy()
        g.flags.writeable = False
        self.matrix = g

    def __matmul__(self, other: "Rotation") -> "Rotation":
        return Rotation(matmul(self.matrix, other.matrix))

    @property
    def inverse(self) -> "Rotation":
        return Rotation(self.matrix.T)

    def __repr__(self):
        return f"Rotation({self.matrix.tolist()})"


def _det3(m: np.ndarray):
    return scalar(
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def rotate(g, X):
    """Apply ``g`` to every index of ``X``.

    Works for :class:`SymTensor` (and its harmonic subclasses),
    :class:`ElasticityTensor` and any object exposing ``_rotated(g)``.
    """
    if not isinstance(g, Rotation):
        g = Rotation(g)
    if hasattr(X, "_rotated"):
        return X._rotated(g)
    raise TypeError(f"cannot rotate {type(X).__name__}")


def rotation_from_axis_angle(axis, angle) -> Rotation:
    """Rodrigues rotation of ``angle`` radians about ``axis``.

    A sympy angle (e.g. ``sympy.pi / 2``) gives an exact matrix.
    """
    n = np.asarray(axis, dtype=object if _is_sympy(angle) else np.float64)
    if _is_sympy(angle):
        import sympy

        n = np.array([sympy.nsimplify(v) for v in n], dtype=object)
        norm = sympy.sqrt(sum(v * v for v in n))
        if norm == 0:
            raise ValueError("rotation axis must be non-zero")
        n = n / norm
        c, s = sympy.cos(angle), sympy.sin(angle)
        ident = np.array([[sympy.Integer(int(i == j)) for j in range(3)] for i in range(3)], dtype=object)
    else:
        norm = float(np.linalg.norm(n))
        if norm == 0:
            raise ValueError("rotation axis must be non-zero")
        n = n / norm
        c, s = math.cos(angle), math.sin(angle)
        ident = np.eye(3)
    cross = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]], dtype=n.dtype)
    g = ident * c + cross * s + np.multiply.outer(n, n) * (1 - c)
    return Rotation(tidy(g))


def random_rotation(seed) -> Rotation:
    """Haar-uniform rotation, deterministic in ``seed``."""
    from scipy.spatial.transform import Rotation as _ScipyRotation

    return Rotation(_ScipyRotation.random(random_state=seed).as_matrix())


def rational_rotation(seed, bound: int = 5) -> Rotation:
    """Exact rotation with rational entries built from an integer quaternion."""
    rng = np.random.default_rng(seed)
    while True:
        a, b, c, d = (int(v) for v in rng.integers(-bound, bound + 1, size=4))
        n = a * a + b * b + c * c + d * d
        if n:
            break
    m = [
        [a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)],
        [2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)],
        [2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d],
    ]
    return Rotation(np.array([[Fraction(v, n) for v in row] for row in m], dtype=object))
