"""
Command-line front end.

Maps are read from JSON documents of the form::

    {"n": 3, "k": 3,
     "representation": {"type": "unitary_diff", "U": {"angles": [2.356, 3.1416, 3.927]}}}

Complex entries are ``[re, im]`` pairs and matrices are lists of rows.
Supported representation types are ``pairs`` (``"terms": [{"A": M, "B": M}, ...]``),
``kraus`` (``"operators": [M, ...]``), ``unitary_diff`` (``"U"`` and optional
``"V"``, each a matrix or ``{"angles": [...]}``) and ``choi`` (``"J": M``).
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import closedform, minimizer, superop
from .errors import CBNormError, InconsistencyError, InternalError
from .numerics import is_unitary

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

REPRESENTATION_TYPES = ("pairs", "kraus", "unitary_diff", "choi")


class MapFileError(CBNormError):
    """Invalid map document. ``code`` names the failure class, ``field`` the offending key."""

    def __init__(self, code, message, field=None):
        super().__init__(message)
        self.code = code
        self.field = field


def _matrix_from_json(obj, field):
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MapFileError("malformed", f"{field}: entries must be [re, im] pairs", field) from exc
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise MapFileError(
            "malformed", f"{field}: expected a non-empty matrix of [re, im] pairs", field
        )
    if not np.all(np.isfinite(arr)):
        raise MapFileError("malformed", f"{field}: non-finite entry", field)
    return arr[..., 0] + 1j * arr[..., 1]


def matrix_to_json(M):
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def _expect_shape(M, shape, field):
    if M.shape != shape:
        raise MapFileError(
            "dimension_mismatch", f"{field}: shape {M.shape} does not match expected {shape}", field
        )


@dataclass
class UnitarySpec:
    """A unitary given either as an explicit matrix or as diagonal eigenvalue angles."""

    matrix: np.ndarray = None
    angles: tuple = None

    def to_matrix(self):
        if self.angles is not None:
            return np.diag(np.exp(1j * np.asarray(self.angles, dtype=float)))
        return self.matrix

    def to_json(self):
        if self.angles is not None:
            return {"angles": [float(a) for a in self.angles]}
        return matrix_to_json(self.matrix)

    def __eq__(self, other):
        if not isinstance(other, UnitarySpec):
            return NotImplemented
        if (self.angles is None) != (other.angles is None):
            return False
        if self.angles is not None:
            return tuple(self.angles) == tuple(other.angles)
        return np.array_equal(self.matrix, other.matrix)


def _unitary_from_json(obj, field, n):
    if isinstance(obj, dict):
        if set(obj) != {"angles"}:
            raise MapFileError("malformed", f"{field}: expected {{'angles': [...]}}", field)
        try:
            angles = tuple(float(a) for a in obj["angles"])
        except (TypeError, ValueError) as exc:
            raise MapFileError("malformed", f"{field}.angles: must be a list of reals", field) from exc
        if len(angles) != n:
            raise MapFileError(
                "dimension_mismatch", f"{field}.angles: {len(angles)} angles for n={n}", field
            )
        return UnitarySpec(angles=angles)
    M = _matrix_from_json(obj, field)
    _expect_shape(M, (n, n), field)
    if not is_unitary(M, 1e-8):
        raise MapFileError("non_unitary", f"{field}: matrix is not unitary", field)
    return UnitarySpec(matrix=M)


@dataclass
class MapDocument:
    """Validated contents of a map file; ``data`` holds the representation-specific payload."""

    n: int
    k: int
    kind: str
    data: dict

    def to_rep(self):
        if self.kind == "pairs":
            return superop.GCKRep(self.n, self.k, tuple(self.data["terms"]))
        if self.kind == "kraus":
            return superop.from_kraus(self.data["operators"])
        if self.kind == "unitary_diff":
            U = self.data["U"].to_matrix()
            V = self.data["V"].to_matrix() if self.data.get("V") is not None else np.eye(self.n)
            return superop.from_unitary_pair(U, V)
        return superop.from_choi(superop.ChoiMatrix(self.n, self.k, self.data["J"]))

    def unitaries(self):
        U = self.data["U"].to_matrix()
        V = self.data["V"].to_matrix() if self.data.get("V") is not None else np.eye(self.n, dtype=complex)
        return U, V

    def to_json(self):
        rep = {"type": self.kind}
        if self.kind == "pairs":
            rep["terms"] = [{"A": matrix_to_json(A), "B": matrix_to_json(B)} for A, B in self.data["terms"]]
        elif self.kind == "kraus":
            rep["operators"] = [matrix_to_json(K) for K in self.data["operators"]]
        elif self.kind == "unitary_diff":
            rep["U"] = self.data["U"].to_json()
            if self.data.get("V") is not None:
                rep["V"] = self.data["V"].to_json()
        else:
            rep["J"] = matrix_to_json(self.data["J"])
        return {"n": self.n, "k": self.k, "representation": rep}

    def __eq__(self, other):
        if not isinstance(other, MapDocument):
            return NotImplemented
        return json.dumps(self.to_json(), sort_keys=True) == json.dumps(other.to_json(), sort_keys=True)


def _positive_int(obj, field):
    if isinstance(obj, bool) or not isinstance(obj, int) or obj < 1:
        raise MapFileError("malformed", f"{field}: must be a positive integer", field)
    return obj


def document_from_dict(obj):
    """Validate a decoded JSON object and build a :class:`MapDocument`."""
    if not isinstance(obj, dict):
        raise MapFileError("malformed", "top level must be an object")
    for key in ("n", "k", "representation"):
        if key not in obj:
            raise MapFileError("malformed", f"missing field '{key}'", key)
    n = _positive_int(obj["n"], "n")
    k = _positive_int(obj["k"], "k")
    rep = obj["representation"]
    if not isinstance(rep, dict) or rep.get("type") not in REPRESENTATION_TYPES:
        raise MapFileError(
            "malformed",
            f"representation.type must be one of {', '.join(REPRESENTATION_TYPES)}",
            "representation.type",
        )
    kind = rep["type"]

    if kind == "pairs":
        terms = rep.get("terms")
        if not isinstance(terms, list):
            raise MapFileError("malformed", "representation.terms must be a list", "representation.terms")
        out = []
        for i, term in enumerate(terms):
            if not isinstance(term, dict) or "A" not in term or "B" not in term:
                raise MapFileError("malformed", f"terms[{i}] needs 'A' and 'B'", f"terms[{i}]")
            A = _matrix_from_json(term["A"], f"terms[{i}].A")
            B = _matrix_from_json(term["B"], f"terms[{i}].B")
            _expect_shape(A, (k, n), f"terms[{i}].A")
            _expect_shape(B, (n, k), f"terms[{i}].B")
            out.append((A, B))
        return MapDocument(n, k, kind, {"terms": out})

    if kind == "kraus":
        ops = rep.get("operators")
        if not isinstance(ops, list) or not ops:
            raise MapFileError(
                "malformed", "representation.operators must be a non-empty list", "representation.operators"
            )
        mats = []
        for i, K in enumerate(ops):
            M = _matrix_from_json(K, f"operators[{i}]")
            _expect_shape(M, (k, n), f"operators[{i}]")
            mats.append(M)
        return MapDocument(n, k, kind, {"operators": mats})

    if kind == "unitary_diff":
        if n != k:
            raise MapFileError("dimension_mismatch", "unitary_diff requires n == k", "k")
        if "U" not in rep:
            raise MapFileError("malformed", "representation.U is required", "representation.U")
        data = {"U": _unitary_from_json(rep["U"], "representation.U", n), "V": None}
        if rep.get("V") is not None:
            data["V"] = _unitary_from_json(rep["V"], "representation.V", n)
        return MapDocument(n, k, kind, data)

    if "J" not in rep:
        raise MapFileError("malformed", "representation.J is required", "representation.J")
    J = _matrix_from_json(rep["J"], "representation.J")
    _expect_shape(J, (n * k, n * k), "representation.J")
    return MapDocument(n, k, kind, {"J": J})


def parse_map(path):
    """
    Read and validate a map file.

    :raises MapFileError: with ``code`` one of ``missing_file``, ``malformed``,
        ``dimension_mismatch`` or ``non_unitary``.
    """
    try:
        with open(path) as fh:
            text = fh.read()
    except FileNotFoundError as exc:
        raise MapFileError("missing_file", f"{path}: no such file") from exc
    except OSError as exc:
        raise MapFileError("missing_file", f"{path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MapFileError("malformed", f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return document_from_dict(obj)


def write_map(doc, path):
    with open(path, "w") as fh:
        json.dump(doc.to_json(), fh, indent=1)
        fh.write("\n")


class _Parser(argparse.ArgumentParser):
    # usage errors exit with 1; 2 is reserved for input validation
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_search_flags(p):
    p.add_argument("--iterations", type=int, default=1000, help="random mixing matrices to try")
    p.add_argument("--seed", type=int, default=0, help="64-bit seed for every random stream")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--refine", action="store_true", help="polish the best sample by pattern search")
    p.add_argument("--eigen-floor", type=float, default=1e-3, dest="eigen_floor")
    p.add_argument("--trace", metavar="PATH", help="write the best-so-far sequence to PATH")
    p.add_argument("--workers", type=int, default=1, help="threads for the random search")
    p.add_argument("--format", choices=("json", "text"), default="json")


def build_parser():
    parser = _Parser(prog="cbnorm", description="Completely bounded and diamond norms of linear maps.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, helptext in (
        ("cb", "completely bounded norm of a map"),
        ("diamond", "diamond norm of a map"),
        ("bounds", "upper and lower bounds on the CB norm"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("map")
        _add_search_flags(p)
    p = sub.add_parser("distance", help="diamond norm of the difference of two maps")
    p.add_argument("map")
    p.add_argument("other")
    _add_search_flags(p)
    p = sub.add_parser("is-cp", help="Choi-matrix positivity test")
    p.add_argument("map")
    p.add_argument("--tol", type=float, default=superop.CP_TOL)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p = sub.add_parser("closed-form", help="exact norm of a unitary_diff map")
    p.add_argument("map")
    p.add_argument("--format", choices=("json", "text"), default="json")
    return parser


def _config(args):
    return minimizer.SearchConfig(
        iterations=args.iterations,
        seed=args.seed,
        eigen_floor=args.eigen_floor,
        refine=args.refine,
        tol=args.tol,
        workers=args.workers,
    )


def _estimate_result(est, cfg, args, elapsed_ms):
    out = {"value": est.value, "exact": est.exact}
    if est.lower_bound is not None:
        out["lower_bound"] = est.lower_bound
    out.update(iterations=cfg.iterations, p=est.p, seed=cfg.seed, elapsed_ms=elapsed_ms)
    if args.trace:
        with open(args.trace, "w") as fh:
            json.dump([[i, v] for i, v in est.trace], fh)
        out["trace"] = args.trace
    if est.warnings:
        out["warnings"] = list(est.warnings)
    return out


def _emit(result, fmt, stream):
    if fmt == "json":
        stream.write(json.dumps(result) + "\n")
    else:
        for key, val in result.items():
            stream.write(f"{key}: {val}\n")


def run(args, stdout):
    start = time.perf_counter()

    def elapsed():
        return round(1000 * (time.perf_counter() - start), 3)

    if args.command == "is-cp":
        rep = parse_map(args.map).to_rep()
        result = {
            "is_cp": superop.is_cp(rep, args.tol),
            "min_choi_eigenvalue": superop.choi_min_eigenvalue(rep),
        }
    elif args.command == "closed-form":
        doc = parse_map(args.map)
        if doc.kind != "unitary_diff":
            raise MapFileError(
                "malformed", "closed-form needs a unitary_diff representation", "representation.type"
            )
        U, V = doc.unitaries()
        result = {"value": closedform.unitary_pair_norm(U, V), "exact": True, "elapsed_ms": elapsed()}
    elif args.command == "bounds":
        cfg = _config(args)
        rep = parse_map(args.map).to_rep()
        result = minimizer.bounds_report(rep, cfg).as_dict()
        result.update(iterations=cfg.iterations, seed=cfg.seed, elapsed_ms=elapsed())
    else:
        cfg = _config(args)
        rep = parse_map(args.map).to_rep()
        if args.command == "cb":
            est = minimizer.cb_norm(rep, cfg)
        elif args.command == "diamond":
            est = minimizer.diamond_norm(rep, cfg)
        else:
            other = parse_map(args.other).to_rep()
            est = minimizer.diamond_norm(superop.subtract(rep, other), cfg)
        result = _estimate_result(est, cfg, args, elapsed())
    _emit(result, args.format, stdout)
    return EXIT_OK


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return run(args, stdout)
    except MapFileError as exc:
        stderr.write(f"error [{exc.code}]: {exc}\n")
        return EXIT_INPUT
    except (InconsistencyError, InternalError, AssertionError) as exc:
        stderr.write(f"error [inconsistent]: {exc}\n")
        return EXIT_INTERNAL
    except (ValueError, CBNormError) as exc:
        stderr.write(f"error [invalid]: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
