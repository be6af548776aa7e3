"""Command line interface.

Subcommands: analyze, decompose, isomorphic, generate, pentagon.  Systems
travel as JSON files:

    {
      "ambient_dim": 3,
      "subspaces": [
        {"name": "E1", "spanning_vectors": [[1, 0, 0], [[0, 1], 0, 0]]},
        ...
      ],
      "tolerances": {"rank_rtol": 1e-10}          # optional
    }

Vector entries are real numbers or [re, im] pairs.  Spanning vectors need
not be independent or normalized; an empty list denotes the zero subspace.
Tolerance precedence: command-line flags, then SUBSPACEKIT_* environment
variables, then the file's "tolerances" block, then defaults.  Reports are
deterministic: identical inputs, flags and seeds produce byte-identical
output (dimensions as integers, residual-like quantities as fixed-format
scientific strings).

Exit codes: 0 success, 1 verification or conditioning failure, 2 malformed
input or violated preconditions.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .brenner import (
    SLOT_NAMES,
    InvariantVector,
    brenner_decompose,
    brenner_invariants,
    is_isomorphic_three,
    isomorphism_between,
    verify_brenner,
)
from .catalog import compose_from_multiplicities
from .linalg import (
    DEFAULT_TOL,
    ConditioningError,
    Subspace,
    ToleranceConfig,
    orthonormalize,
    principal_angles,
)
from .pentagon import (
    closedness_margin,
    diagonal_graph_pair,
    example9_truncated,
    margin_sample_points,
    pentagon_split,
)
from .systems import (
    SubspaceSystem,
    detect_double_triangle,
    detect_pentagon,
    find_nontrivial_idempotent,
    is_commutative,
    is_transitive,
    verify_isomorphism,
)

ENV_PREFIX = "SUBSPACEKIT_"
_TOL_KEYS = ("rank_rtol", "gap_tol", "residual_tol", "cond_warn")


class _InputError(Exception):
    """Bad file, flag, or precondition; mapped to exit code 2."""


def _sci(value) -> str:
    return f"{float(value):.2e}"


def _matrix_entries(matrix: np.ndarray):
    """Matrix as rows of [re, im] pairs (full precision)."""
    return [
        [[float(entry.real), float(entry.imag)] for entry in row]
        for row in np.asarray(matrix, dtype=np.complex128)
    ]


def _vector_list(basis: np.ndarray):
    """Basis columns as a list of vectors of [re, im] pairs."""
    return [
        [[float(entry.real), float(entry.imag)] for entry in basis[:, j]]
        for j in range(basis.shape[1])
    ]


def _tol_dict(tol: ToleranceConfig):
    return {key: getattr(tol, key) for key in _TOL_KEYS}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rank-rtol", dest="rank_rtol", type=float, default=None,
                        help="relative singular value cutoff for rank decisions")
    common.add_argument("--gap-tol", dest="gap_tol", type=float, default=None,
                        help="projection-gap threshold for subspace equality")
    common.add_argument("--residual-tol", dest="residual_tol", type=float, default=None,
                        help="acceptance threshold for verification residuals")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for randomized searches and generation (default 0)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json",
                     help="emit the report as JSON (default)")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text",
                     help="emit the report as flat key: value lines")
    common.set_defaults(fmt=None)

    parser = argparse.ArgumentParser(
        prog="subspacekit",
        description="canonical decompositions of systems of subspaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common],
                       help="predicates, invariants and angles of a system file")
    p.add_argument("file", help="system JSON file")

    p = sub.add_parser("decompose", parents=[common],
                       help="canonical block decomposition of a three-subspace system")
    p.add_argument("file", help="system JSON file")
    p.add_argument("--emit-basis", action="store_true",
                   help="include block bases and the change-of-basis matrix")

    p = sub.add_parser("isomorphic", parents=[common],
                       help="decide isomorphism of two three-subspace systems")
    p.add_argument("file_a", help="first system JSON file")
    p.add_argument("file_b", help="second system JSON file")
    p.add_argument("--emit-map", action="store_true",
                   help="include the witness map when systems are isomorphic")

    p = sub.add_parser("generate", parents=[common],
                       help="generate a scrambled system with known multiplicities")
    p.add_argument("--mult", required=True,
                   help="nine comma-separated multiplicities, slot order: "
                        + ",".join(SLOT_NAMES))
    p.add_argument("--cond", type=float, default=1.0,
                   help="condition bound for the scrambling map (default 1: unitary)")
    p.add_argument("-o", "--output", required=True, help="output system file")

    p = sub.add_parser("pentagon", parents=[common],
                       help="pentagon-hypothesis split of a file, or the truncation margin table")
    p.add_argument("file", nargs="?", default=None, help="system JSON file")
    p.add_argument("--example9", type=int, default=None, metavar="N",
                   help="instead of a file: margins of the truncated classical example up to N")
    return parser


def _gather_overrides(args) -> dict:
    out = {}
    for key, env_name in (
        ("rank_rtol", "RANK_RTOL"),
        ("gap_tol", "GAP_TOL"),
        ("residual_tol", "RESIDUAL_TOL"),
    ):
        flag = getattr(args, key)
        if flag is not None:
            out[key] = flag
            continue
        raw = os.environ.get(ENV_PREFIX + env_name)
        if raw is not None:
            try:
                out[key] = float(raw)
            except ValueError:
                raise _InputError(f"{ENV_PREFIX}{env_name} is not a number: {raw!r}")
    if args.seed is not None:
        out["seed"] = args.seed
    else:
        raw = os.environ.get(ENV_PREFIX + "SEED")
        if raw is not None:
            try:
                out["seed"] = int(raw)
            except ValueError:
                raise _InputError(f"{ENV_PREFIX}SEED is not an integer: {raw!r}")
    fmt = args.fmt or os.environ.get(ENV_PREFIX + "FORMAT")
    if fmt not in (None, "json", "text"):
        raise _InputError(f"{ENV_PREFIX}FORMAT must be 'json' or 'text', got {fmt!r}")
    out["fmt"] = fmt or "json"
    return out


def _merge_tolerances(file_payload, overrides, where: str) -> ToleranceConfig:
    merged = _tol_dict(DEFAULT_TOL)
    block = file_payload.get("tolerances") if isinstance(file_payload, dict) else None
    if block is not None:
        if not isinstance(block, dict):
            raise _InputError(f"{where}: 'tolerances' must be an object")
        for key, value in block.items():
            if key not in _TOL_KEYS:
                raise _InputError(f"{where}: unknown tolerance {key!r}")
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise _InputError(f"{where}: tolerance {key} must be a number")
            merged[key] = float(value)
    for key in _TOL_KEYS:
        if key in overrides:
            merged[key] = overrides[key]
    try:
        return ToleranceConfig(**merged)
    except ValueError as exc:
        raise _InputError(str(exc))


def _parse_entry(value, where: str) -> complex:
    if isinstance(value, bool):
        raise _InputError(f"{where}: expected a number or [re, im] pair, got a boolean")
    if isinstance(value, (int, float)):
        return complex(value, 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        re, im = value
        ok = all(not isinstance(x, bool) and isinstance(x, (int, float)) for x in (re, im))
        if ok:
            return complex(re, im)
    raise _InputError(f"{where}: expected a number or [re, im] pair, got {value!r}")


def _system_from_payload(payload, tol: ToleranceConfig, where: str) -> SubspaceSystem:
    if not isinstance(payload, dict):
        raise _InputError(f"{where}: top level must be a JSON object")
    ambient = payload.get("ambient_dim")
    if isinstance(ambient, bool) or not isinstance(ambient, int) or ambient < 1:
        raise _InputError(f"{where}: 'ambient_dim' must be a positive integer")
    entries = payload.get("subspaces")
    if not isinstance(entries, list) or not entries:
        raise _InputError(f"{where}: 'subspaces' must be a nonempty array")
    subspaces, labels, have_labels = [], [], True
    for i, entry in enumerate(entries):
        field = f"{where}: subspaces[{i}]"
        if not isinstance(entry, dict):
            raise _InputError(f"{field} must be an object")
        name = entry.get("name")
        if name is None:
            have_labels = False
        elif not isinstance(name, str):
            raise _InputError(f"{field}.name must be a string")
        labels.append(name)
        vectors = entry.get("spanning_vectors")
        if not isinstance(vectors, list):
            raise _InputError(f"{field}.spanning_vectors must be an array")
        parsed = []
        for j, vector in enumerate(vectors):
            if not isinstance(vector, list) or len(vector) != ambient:
                raise _InputError(
                    f"{field}.spanning_vectors[{j}] must be an array of length {ambient}"
                )
            parsed.append([
                _parse_entry(v, f"{field}.spanning_vectors[{j}][{k}]")
                for k, v in enumerate(vector)
            ])
        if parsed:
            subspaces.append(orthonormalize(np.array(parsed, dtype=np.complex128), tol))
        else:
            subspaces.append(Subspace.zero(ambient))
    return SubspaceSystem(
        ambient,
        tuple(subspaces),
        tuple(labels) if have_labels else None,
    )


def _load_system(path: str, overrides: dict):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except FileNotFoundError:
        raise _InputError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise _InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
    tol = _merge_tolerances(payload, overrides, path)
    return _system_from_payload(payload, tol, path), tol


def _angles_report(system: SubspaceSystem):
    out = {}
    for i in range(system.arity):
        for j in range(i + 1, system.arity):
            a, b = system.subspaces[i], system.subspaces[j]
            key = f"{i + 1}-{j + 1}"
            if a.dim == 0 or b.dim == 0:
                out[key] = None
            else:
                out[key] = [_sci(t) for t in principal_angles(a, b)]
    return out


def cmd_analyze(args, overrides):
    system, tol = _load_system(args.file, overrides)
    seed = overrides.get("seed", 0)
    report = {
        "command": "analyze",
        "input": args.file,
        "ambient_dim": system.ambient_dim,
        "subspace_dims": list(system.dims()),
        "labels": list(system.labels) if system.labels else None,
        "tolerances": _tol_dict(tol),
        "seed": seed,
        "commutative": is_commutative(system, tol),
        "transitive": is_transitive(system, tol),
        "pairwise_angles": _angles_report(system),
    }
    witness = find_nontrivial_idempotent(system, tol, seed=seed)
    report["decomposable"] = witness is not None
    report["split_dims"] = (
        [witness.split[0].dim, witness.split[1].dim] if witness is not None else None
    )
    if system.arity == 3:
        report["double_triangle"] = detect_double_triangle(system, tol)
        report["pentagon"] = detect_pentagon(system, tol)
        report["invariants"] = dict(zip(SLOT_NAMES, brenner_invariants(system, tol).as_tuple()))
    return report, 0


def cmd_decompose(args, overrides):
    system, tol = _load_system(args.file, overrides)
    if system.arity != 3:
        raise _InputError(f"decompose needs exactly three subspaces, file has {system.arity}")
    decomposition = brenner_decompose(system, tol)
    check = verify_brenner(system, decomposition, tol)
    ok = decomposition.residual <= tol.residual_tol and check.passed
    report = {
        "command": "decompose",
        "input": args.file,
        "ambient_dim": system.ambient_dim,
        "subspace_dims": list(system.dims()),
        "tolerances": _tol_dict(tol),
        "block_dims": dict(zip(SLOT_NAMES, decomposition.invariants.as_tuple())),
        "residual": _sci(decomposition.residual),
        "verified": bool(check.passed),
        "max_verification_gap": _sci(check.max_gap),
        "sum_operator_sigma_min": (
            _sci(decomposition.sum_operator_sigma_min)
            if decomposition.sum_operator_sigma_min is not None
            else None
        ),
        "warnings": list(decomposition.warnings),
    }
    if args.emit_basis:
        blocks = {
            "common": decomposition.common,
            "pair_23": decomposition.pair_23,
            "pair_13": decomposition.pair_13,
            "pair_12": decomposition.pair_12,
            "single_1": decomposition.single_1,
            "single_2": decomposition.single_2,
            "single_3": decomposition.single_3,
            "triangle_1": decomposition.triangle_1,
            "triangle_2": decomposition.triangle_2,
            "triangle_3": decomposition.triangle_3,
            "outside": decomposition.outside,
        }
        report["blocks"] = {name: _vector_list(sub.basis) for name, sub in blocks.items()}
        report["change_of_basis"] = _matrix_entries(decomposition.change_of_basis)
    return report, 0 if ok else 1


def cmd_isomorphic(args, overrides):
    system_a, tol = _load_system(args.file_a, overrides)
    system_b, _ = _load_system(args.file_b, overrides)
    if system_a.arity != 3 or system_b.arity != 3:
        raise _InputError("isomorphic needs two systems of exactly three subspaces")
    report = {
        "command": "isomorphic",
        "input_first": args.file_a,
        "input_second": args.file_b,
        "tolerances": _tol_dict(tol),
        "invariants_first": dict(zip(SLOT_NAMES, brenner_invariants(system_a, tol).as_tuple())),
        "invariants_second": dict(zip(SLOT_NAMES, brenner_invariants(system_b, tol).as_tuple())),
    }
    if system_a.ambient_dim != system_b.ambient_dim:
        report["isomorphic"] = False
        report["reason"] = "ambient dimensions differ"
        return report, 1
    isomorphic = is_isomorphic_three(system_a, system_b, tol)
    report["isomorphic"] = isomorphic
    if not isomorphic:
        return report, 1
    witness = isomorphism_between(system_a, system_b, tol)
    certificate = verify_isomorphism(witness, system_a, system_b, tol)
    report["witness_max_gap"] = _sci(certificate.max_gap)
    report["witness_condition"] = _sci(certificate.condition)
    report["witness_verified"] = bool(certificate.passed)
    if args.emit_map:
        report["map"] = _matrix_entries(witness)
    return report, 0 if certificate.passed else 1


def _truth_path(output: str) -> str:
    if output.endswith(".json"):
        return output[: -len(".json")] + ".truth.json"
    return output + ".truth.json"


def cmd_generate(args, overrides):
    try:
        counts = [int(x) for x in args.mult.split(",")]
    except ValueError:
        raise _InputError(f"--mult must be nine comma-separated integers, got {args.mult!r}")
    if len(counts) != 9:
        raise _InputError(f"--mult needs exactly nine values, got {len(counts)}")
    try:
        vector = InvariantVector.from_iterable(counts)
    except ValueError as exc:
        raise _InputError(str(exc))
    seed = overrides.get("seed", 0)
    if not np.isfinite(args.cond) or args.cond < 1.0:
        raise _InputError(f"--cond must be a finite number >= 1, got {args.cond!r}")
    tol = _merge_tolerances({}, overrides, "--")
    try:
        system, _ = compose_from_multiplicities(vector, seed, args.cond, tol)
    except ValueError as exc:
        raise _InputError(str(exc))

    payload = {
        "ambient_dim": system.ambient_dim,
        "subspaces": [
            {"name": f"E{i + 1}", "spanning_vectors": _vector_list(s.basis)}
            for i, s in enumerate(system.subspaces)
        ],
    }
    truth = {
        "multiplicities": list(vector.as_tuple()),
        "slot_names": list(SLOT_NAMES),
        "seed": seed,
        "cond_bound": float(args.cond),
        "ambient_dim": system.ambient_dim,
        "subspace_dims": list(system.dims()),
    }
    truth_path = _truth_path(args.output)
    for path, content in ((args.output, payload), (truth_path, truth)):
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(content, handle, indent=2, sort_keys=True)
            handle.write("\n")
    report = {
        "command": "generate",
        "output": args.output,
        "truth_output": truth_path,
        "seed": seed,
        "cond_bound": float(args.cond),
        "ambient_dim": system.ambient_dim,
        "subspace_dims": list(system.dims()),
        "multiplicities": dict(zip(SLOT_NAMES, vector.as_tuple())),
    }
    return report, 0


def cmd_pentagon(args, overrides):
    if (args.file is None) == (args.example9 is None):
        raise _InputError("pentagon needs a system file or --example9 N (exactly one of them)")
    if args.example9 is not None:
        n = args.example9
        if n < 2:
            raise _InputError(f"--example9 needs N >= 2, got {n}")
        rows = []
        for m in margin_sample_points(n):
            flat, graph = diagonal_graph_pair(m)
            margin = closedness_margin(flat, graph)
            rows.append({
                "n": m,
                "margin": _sci(margin.min_positive_angle),
                "arctan_1_over_n": _sci(np.arctan(1.0 / m)),
            })
        tol = _merge_tolerances({}, overrides, "--")
        truncated = example9_truncated(n)
        report = {
            "command": "pentagon",
            "example9_n": n,
            "ambient_dim": truncated.ambient_dim,
            "subspace_dims": list(truncated.dims()),
            "pentagon_detected": detect_pentagon(truncated, tol),
            "margins": rows,
        }
        return report, 0

    system, tol = _load_system(args.file, overrides)
    if system.arity != 3:
        raise _InputError(f"pentagon needs exactly three subspaces, file has {system.arity}")
    split = pentagon_split(system, tol)  # ValueError (hypothesis failure) -> exit 2
    report = {
        "command": "pentagon",
        "input": args.file,
        "ambient_dim": system.ambient_dim,
        "subspace_dims": list(system.dims()),
        "tolerances": _tol_dict(tol),
        "case": split.case,
        "witness_count": split.witness_count,
        "bridge_dim": split.bridge.dim,
        "base_dim": split.base.dim if split.base is not None else None,
        "first_remainder_dim": (
            split.first_remainder.dim if split.first_remainder is not None else None
        ),
        "third_outside_dim": (
            split.third_outside.dim if split.third_outside is not None else None
        ),
        "pentagon_part_dims": (
            list(split.pentagon_part.dims()) if split.pentagon_part is not None else None
        ),
        "pentagon_part_ambient": (
            split.pentagon_part.ambient_dim if split.pentagon_part is not None else None
        ),
    }
    margins = {}
    for key, (a, b) in (
        ("1-2", (system.subspaces[0], system.subspaces[1])),
        ("1-3", (system.subspaces[0], system.subspaces[2])),
        ("2-3", (system.subspaces[1], system.subspaces[2])),
    ):
        try:
            margins[key] = _sci(closedness_margin(a, b).min_positive_angle)
        except ValueError:
            margins[key] = None
    report["margins"] = margins
    return report, 0


_HANDLERS = {
    "analyze": cmd_analyze,
    "decompose": cmd_decompose,
    "isomorphic": cmd_isomorphic,
    "generate": cmd_generate,
    "pentagon": cmd_pentagon,
}


def _flatten(prefix, value, lines):
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], lines)
    elif isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            lines.append(f"{prefix}: {' '.join(str(v) for v in value)}")
        else:
            for i, v in enumerate(value):
                _flatten(f"{prefix}[{i}]", v, lines)
    else:
        lines.append(f"{prefix}: {value}")


def _emit(report: dict, fmt: str):
    if fmt == "text":
        lines = []
        _flatten("", report, lines)
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code is None else int(exc.code)
    fmt = "json"
    try:
        overrides = _gather_overrides(args)
        fmt = overrides["fmt"]
        report, code = _HANDLERS[args.command](args, overrides)
    except _InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ConditioningError as exc:
        sys.stderr.write(f"conditioning failure: {exc}\n")
        return 1
    _emit(report, fmt)
    return code


if __name__ == "__main__":
    sys.exit(main())
