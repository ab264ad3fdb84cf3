"""Command-line front end.

Tensors are exchanged as JSON documents::

    {"format": "kelvin6" | "voigt6" | "harmonic_parts" | "sym2",
     "data": ..., "kind": "ela" | "h4", "name": ..., "units": ...}

Exit codes: 0 ok / same orbit, 1 different orbit, 2 unreadable input,
3 stratum mismatch, 4 out of scope.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import bases, classification, covariants, normal_forms
from .harmonic import (
    HarmonicParts,
    decompose,
    deviator_components,
    deviator_from_components,
    h4_free_components,
    h4_from_free_components,
    reconstruct,
)
from .tensor_core import (
    ElasticityTensor,
    Harm2,
    SymTensor,
    Tolerance,
    from_kelvin,
    harm4_from_ela,
    sym2,
    to_exact,
)

EXIT_OK, EXIT_DIFFERENT, EXIT_PARSE, EXIT_MISMATCH, EXIT_SCOPE = 0, 1, 2, 3, 4
FORMATS = ("kelvin6", "voigt6", "harmonic_parts", "sym2")


class DocumentError(ValueError):
    """Unreadable or inconsistent tensor document."""


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

def _parse_scalar(x, exact: bool):
    if isinstance(x, bool) or x is None:
        raise DocumentError(f"not a number: {x!r}")
    if not exact:
        try:
            return float(x) if not isinstance(x, str) else float(_sympify(x))
        except (TypeError, ValueError) as exc:
            raise DocumentError(f"not a number: {x!r}") from exc
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            return _sympify(x)
    if isinstance(x, float):
        # decimal literal as written, not its binary expansion
        return Fraction(repr(x))
    return to_exact(x)


def _sympify(text: str):
    import sympy

    try:
        val = sympy.sympify(text, rational=True)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise DocumentError(f"not a number: {text!r}") from exc
    if not val.is_number:
        raise DocumentError(f"not a number: {text!r}")
    return val


def _array(data, shape, exact: bool) -> np.ndarray:
    try:
        raw = np.asarray(data, dtype=object)
    except ValueError as exc:
        raise DocumentError("ragged numeric payload") from exc
    if raw.shape != shape:
        raise DocumentError(f"expected payload of shape {shape}, got {raw.shape}")
    out = np.empty(shape, dtype=object)
    for idx, v in np.ndenumerate(raw):
        out[idx] = _parse_scalar(v, exact)
    return out if exact else out.astype(float)


def _matrix6(data, exact: bool) -> np.ndarray:
    if isinstance(data, list) and len(data) == 21 and not any(isinstance(v, list) for v in data):
        flat = _array(data, (21,), exact)
        out = np.empty((6, 6), dtype=flat.dtype)
        k = 0
        for i in range(6):
            for j in range(i, 6):
                out[i, j] = out[j, i] = flat[k]
                k += 1
        return out
    return _array(data, (6, 6), exact)


def _out_scalar(x, exact: bool):
    if exact:
        return str(x)
    return float(x)


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

def _sym2_from6(values: np.ndarray, exact: bool) -> SymTensor:
    a11, a22, a33, a23, a13, a12 = values
    return sym2(np.array([[a11, a12, a13], [a12, a22, a23], [a13, a23, a33]], dtype=object if exact else float))


def load_document(source, *, exact: bool = False, fmt: str | None = None):
    """Parse a tensor document into ``(kind, tensor)``.

    ``kind`` is ``"ela"`` (:class:`ElasticityTensor`), ``"h4"`` (:class:`Harm4`)
    or ``"sym2"`` (order-2 :class:`SymTensor`).  ``source`` is a path, ``"-"``
    for stdin, or an already decoded JSON value.
    """
    if isinstance(source, (str, os.PathLike)):
        try:
            if str(source) == "-":
                doc = json.load(sys.stdin)
            else:
                with open(source, encoding="utf-8") as fh:
                    doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise DocumentError(f"cannot read {source}: {exc}") from exc
    else:
        doc = source
    if isinstance(doc, dict) and "data" in doc:
        data = doc["data"]
        fmt = doc.get("format", fmt)
        kind = doc.get("kind")
    else:
        data, kind = doc, None
    if fmt not in FORMATS:
        raise DocumentError(f"unknown or missing format {fmt!r}; expected one of {FORMATS}")
    try:
        if fmt == "sym2":
            return "sym2", _sym2_from6(_array(data, (6,), exact), exact)
        if fmt == "harmonic_parts":
            if not isinstance(data, dict):
                raise DocumentError("harmonic_parts payload must be an object")
            parts = HarmonicParts(
                _parse_scalar(data["tr_d"], exact),
                _parse_scalar(data["tr_v"], exact),
                deviator_from_components(_array(data["d_dev"], (5,), exact), exact),
                deviator_from_components(_array(data["v_dev"], (5,), exact), exact),
                h4_from_free_components(_array(data["h"], (9,), exact), exact),
            )
            if kind == "h4":
                return "h4", parts.h
            return "ela", reconstruct(parts)
        m = _matrix6(data, exact)
        if fmt == "kelvin6":
            return ("h4", from_kelvin(m, "harm4")) if kind == "h4" else ("ela", from_kelvin(m, "ela"))
        E = ElasticityTensor(m)
        if kind == "h4":
            return "h4", harm4_from_ela(E)
        return "ela", E
    except DocumentError:
        raise
    except KeyError as exc:
        raise DocumentError(f"missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise DocumentError(str(exc)) from exc


def dump_document(kind: str, X, *, exact: bool, fmt: str = "kelvin6", name: str | None = None) -> dict:
    out_scalar = lambda v: _out_scalar(v, exact)  # noqa: E731
    if kind == "sym2":
        m = X.dense
        data = [out_scalar(m[i, j]) for i, j in ((0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1))]
        doc = {"format": "sym2", "data": data}
    elif fmt == "harmonic_parts":
        if kind == "ela":
            p = decompose(X)
        else:
            zero = Fraction(0) if exact else 0.0
            z2 = Harm2(SymTensor.zeros(2, exact))
            p = HarmonicParts(zero, zero, z2, z2, X)
        doc = {
            "format": "harmonic_parts",
            "data": {
                "tr_d": out_scalar(p.tr_d),
                "tr_v": out_scalar(p.tr_v),
                "d_dev": [out_scalar(v) for v in deviator_components(p.d_dev)],
                "v_dev": [out_scalar(v) for v in deviator_components(p.v_dev)],
                "h": [out_scalar(v) for v in h4_free_components(p.h)],
            },
        }
    else:
        E = X if kind == "ela" else ElasticityTensor.from_symmetric(X)
        mat = E.kelvin() if fmt == "kelvin6" else E.voigt
        doc = {"format": fmt, "data": [[out_scalar(v) for v in row] for row in mat]}
    if kind in ("ela", "h4"):
        doc["kind"] = kind
    if name:
        doc["name"] = name
    return doc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _tolerance(args) -> Tolerance:
    if args.tol is not None:
        return Tolerance(args.tol)
    env = os.environ.get("ELASTICA_TOL")
    if env:
        try:
            return Tolerance(float(env))
        except ValueError:
            raise DocumentError(f"ELASTICA_TOL is not a number: {env!r}")
    return Tolerance()


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _record(rec, exact: bool) -> dict:
    return {k: _out_scalar(v, exact) for k, v in rec.as_dict().items()}


def cmd_classify(args) -> int:
    kind, X = load_document(args.input, exact=args.exact, fmt=args.format)
    tol = _tolerance(args)
    diag = {
        "ela": classification.diagnose_ela,
        "h4": classification.diagnose_h4,
        "sym2": classification.diagnose_sym2,
    }[kind](X, tol)
    if args.json:
        _emit({
            "kind": kind,
            "label": str(diag.label),
            "tolerance": tol.rel,
            "checks": [
                {"name": c.name, "norm": c.norm, "threshold": c.threshold, "zero": c.is_zero}
                for c in diag.checks
            ],
            "axis": None if diag.axis is None else [float(v) for v in diag.axis],
        })
        return EXIT_OK
    print(diag.label)
    print(f"# kind={kind} rel_tol={tol.rel:g}")
    for c in diag.checks:
        verdict = "zero" if c.is_zero else "nonzero"
        print(f"#   |{c.name}| = {c.norm:.6e}  threshold {c.threshold:.6e}  -> {verdict}")
    if diag.axis is not None:
        print("# axis = [" + ", ".join(f"{v:.12g}" for v in diag.axis) + "]")
    return EXIT_OK


def cmd_invariants(args) -> int:
    kind, X = load_document(args.input, exact=args.exact, fmt=args.format)
    ex = args.exact
    if kind == "sym2":
        _emit({"sym2": _record(covariants.invariants_sym2(X), ex)})
    elif kind == "h4":
        _emit({"h4": _record(covariants.invariants_h4(X), ex)})
    else:
        p = decompose(X)
        _emit({
            "ela": _record(covariants.invariants_ela(p), ex),
            "h4": _record(covariants.invariants_h4(p.h), ex),
            "d": _record(covariants.invariants_sym2(p.d), ex),
            "v": _record(covariants.invariants_sym2(p.v), ex),
        })
    return EXIT_OK


def cmd_basis(args) -> int:
    kind, X = load_document(args.input, exact=args.exact, fmt=args.format)
    tol = _tolerance(args)
    stratum = None if args.stratum == "auto" else args.stratum
    if kind == "sym2":
        res = bases.functional_basis_sym2(X, stratum, tol)
    elif kind == "h4":
        res = bases.functional_basis_h4(X, stratum, tol)
    else:
        res = bases.functional_basis_ela(X, stratum, tol, kappa6=args.kappa6)
    _emit({
        "stratum": str(res.stratum),
        "names": list(res.names),
        "values": {k: _out_scalar(v, args.exact) for k, v in res.to_dict().items()},
    })
    return EXIT_OK


def _as_ela(kind: str, X) -> ElasticityTensor:
    if kind == "ela":
        return X
    if kind == "h4":
        return ElasticityTensor.from_symmetric(X)
    raise DocumentError("separate needs elasticity or harmonic documents")


def cmd_separate(args) -> int:
    tol = _tolerance(args)
    E1 = _as_ela(*load_document(args.first, exact=args.exact, fmt=args.format))
    E2 = _as_ela(*load_document(args.second, exact=args.exact, fmt=args.format))
    verdict = bases.separate_ela(E1, E2, tol, rel=args.rel)
    _emit(verdict.to_dict())
    return {
        bases.Separation.SAME: EXIT_OK,
        bases.Separation.DIFFERENT: EXIT_DIFFERENT,
        bases.Separation.OUT_OF_SCOPE: EXIT_SCOPE,
    }[verdict.verdict]


def _parse_params(text: str, exact: bool) -> tuple:
    if text is None:
        raise DocumentError("--params is required")
    parts = [p.strip() for p in text.split(",") if p.strip()]
    return tuple(_parse_scalar(p, exact) for p in parts)


def cmd_normal_form(args) -> int:
    params = normal_forms.NormalFormParams(args.kind, _parse_params(args.params, args.exact))
    X = normal_forms.build(params)
    if not args.exact:
        X = X.to_float()
    if args.rotate is not None:
        X = normal_forms.sample_orbit(X, args.rotate)
    kind = "sym2" if params.kind == "sym2-ti" else "h4"
    fmt = args.format or "kelvin6"
    name = f"{params.kind}(" + ", ".join(str(v) for v in params.values) + ")"
    _emit(dump_document(kind, X, exact=args.exact, fmt=fmt, name=name))
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="relative tolerance for zero tests (default 1e-9 or $ELASTICA_TOL)")
    common.add_argument("--format", choices=FORMATS, default=None,
                        help="payload format when the document does not name one")
    common.add_argument("--exact", action="store_true", help="rational arithmetic; scalars printed as strings")

    parser = argparse.ArgumentParser(prog="elastica", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="report the symmetry class")
    p.add_argument("input")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("invariants", parents=[common], help="print all invariant families")
    p.add_argument("input")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("basis", parents=[common], help="evaluate the stratum's functional basis")
    p.add_argument("input")
    p.add_argument("--stratum", default="auto",
                   choices=["auto"] + [label.value for label in classification.StratumLabel])
    p.add_argument("--kappa6", choices=("I2", "I3"), default="I2")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("separate", parents=[common], help="decide whether two tensors share an orbit")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--rel", type=float, default=1e-6, help="relative tolerance for invariant equality")
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("normal-form", parents=[common], help="emit a normal-form tensor document")
    p.add_argument("--class", dest="kind", required=True, choices=sorted(normal_forms.KINDS))
    p.add_argument("--params", required=True, help="comma-separated parameters, e.g. '1,2' or '1,sqrt(60)'")
    p.add_argument("--rotate", type=int, default=None, metavar="SEED", help="apply a seeded random rotation")
    p.set_defaults(func=cmd_normal_form)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (bases.StratumMismatchError, bases.InconsistentStratumError) as exc:
        print(f"elastica: stratum mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (DocumentError, ValueError) as exc:
        print(f"elastica: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
