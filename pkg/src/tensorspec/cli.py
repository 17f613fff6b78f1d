"""Command-line front end.

Subcommands: info, contract, eig, svd, cp, tucker, hosvd, odeco, mlrank.
Input tensors come from the JSON tensor file format; results go to stdout or
``--output`` as JSON (round-trippable through the library's deserializers) or
as a plain table.  All numbers are printed to 12 significant digits and runs
with the same seed and inputs produce byte-identical output.

Exit codes: 0 success, 2 input parse error, 3 solver non-convergence (partial
results are still emitted, flagged), 4 invalid flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

import numpy as np

from . import serialize
from .contract import contract
from .decomp import cp_als, hosvd, multilinear_rank, odeco_decompose, tucker_eval
from .spectra import find_eigenpairs, find_singular_tuples
from .tensor import DenseTensor, frobenius_norm, is_symmetric

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NOCONVERGE = 3
EXIT_USAGE = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _sig12(x: float) -> float:
    """Round to 12 significant digits so output is stable across platforms."""
    return float(f"{float(x):.12g}")


def _round_floats(obj: Any) -> Any:
    if isinstance(obj, float):
        return _sig12(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round_floats(v) for v in obj]
    return obj


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _load(path: str) -> DenseTensor:
    try:
        return serialize.load_tensor(path)
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"error: cannot read tensor from {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _emit(obj: dict[str, Any], table_lines: list[str], args) -> None:
    if args.format == "json":
        text = json.dumps(_round_floats(obj), indent=2) + "\n"
    else:
        text = "\n".join(table_lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _vec_str(v) -> str:
    return "(" + ", ".join(_fmt(x) for x in v) + ")"


def _threads_default() -> int:
    env = os.environ.get("TENSORSPEC_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=None, help="solver tolerance")
    p.add_argument("--max-iters", type=int, default=None, help="iteration cap")
    p.add_argument("--seed", type=int, default=0, help="base seed (runs are deterministic)")
    p.add_argument("--starts", type=int, default=None, help="multi-start count")
    p.add_argument("--threads", type=int, default=None, help="worker threads for multi-starts")
    p.add_argument("--output", default=None, help="write output here instead of stdout")
    p.add_argument("--format", choices=["json", "table"], default="json")


def _solver_opts(args, **extra) -> dict[str, Any]:
    opts: dict[str, Any] = dict(extra)
    if args.tol is not None:
        opts["tol"] = args.tol
    if args.max_iters is not None:
        opts["max_iters"] = args.max_iters
    if args.starts is not None:
        opts["starts"] = args.starts
    opts["seed"] = args.seed
    opts["threads"] = args.threads if args.threads is not None else _threads_default()
    return opts


def build_parser() -> _Parser:
    parser = _Parser(prog="tensorspec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="shape, symmetry, norm, and multilinear rank")
    p.add_argument("input")
    _add_common(p)

    p = sub.add_parser("contract", help="contract a mode of one tensor against mode 1 of another")
    p.add_argument("input")
    p.add_argument("other")
    p.add_argument("--mode", type=int, default=None, help="mode of the first tensor (default: its last)")
    _add_common(p)

    p = sub.add_parser("eig", help="mode-o eigenpairs of a cubical tensor")
    p.add_argument("input")
    p.add_argument("--variant", choices=["z", "h"], default="z")
    p.add_argument("--mode", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("svd", help="singular value tuples")
    p.add_argument("input")
    p.add_argument("--p", choices=["2", "o", "O"], default="2", help="2 for l2, O for the lO variant")
    _add_common(p)

    p = sub.add_parser("cp", help="CP decomposition by alternating least squares")
    p.add_argument("input")
    p.add_argument("--rank", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("tucker", help="evaluate a Tucker decomposition file to a dense tensor")
    p.add_argument("input")
    _add_common(p)

    p = sub.add_parser("hosvd", help="truncated higher-order SVD")
    p.add_argument("input")
    p.add_argument("--ranks", default=None, help="comma-separated target ranks, default full")
    _add_common(p)

    p = sub.add_parser("odeco", help="orthogonal decomposition by power iteration and deflation")
    p.add_argument("input")
    p.add_argument("--rank", type=int, default=None, help="component cap (default: smallest mode)")
    _add_common(p)

    p = sub.add_parser("mlrank", help="multilinear rank")
    p.add_argument("input")
    _add_common(p)

    return parser


def _cmd_info(args) -> int:
    t = _load(args.input)
    symmetric = t.is_cubical and is_symmetric(t, tol=1e-12)
    mlr = multilinear_rank(t)
    obj = {
        "order": t.order,
        "shape": list(t.dims),
        "symmetric": symmetric,
        "frobenius_norm": frobenius_norm(t),
        "multilinear_rank": list(mlr),
    }
    lines = [
        f"order: {t.order}",
        f"shape: {list(t.dims)}",
        f"symmetric: {str(symmetric).lower()}",
        f"frobenius_norm: {_fmt(frobenius_norm(t))}",
        f"multilinear_rank: {list(mlr)}",
    ]
    _emit(obj, lines, args)
    return EXIT_OK


def _cmd_contract(args) -> int:
    a = _load(args.input)
    b = _load(args.other)
    mode = args.mode if args.mode is not None else a.order
    try:
        out = contract(a, mode, b, 1)
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(out, DenseTensor):
        obj = serialize.tensor_to_dict(out)
        lines = [f"shape: {list(out.dims)}", f"data: {[_fmt(x) for x in out.to_buffer()]}"]
    else:
        obj = {"scalar": out}
        lines = [f"scalar: {_fmt(out)}"]
    _emit(obj, lines, args)
    return EXIT_OK


def _cmd_eig(args) -> int:
    t = _load(args.input)
    try:
        pairs = find_eigenpairs(t, args.mode, args.variant, **_solver_opts(args))
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    obj = {"pairs": [serialize.eigenpair_to_dict(p) for p in pairs]}
    lines = [f"{'variant':<8}{'mode':<6}{'lambda':<22}{'vector':<40}residual"]
    for p in pairs:
        lines.append(
            f"{p.variant:<8}{p.mode:<6}{_fmt(p.value):<22}{_vec_str(p.vector):<40}{_fmt(p.residual)}"
        )
    _emit(obj, lines, args)
    return EXIT_OK if all(p.converged for p in pairs) else EXIT_NOCONVERGE


def _cmd_svd(args) -> int:
    t = _load(args.input)
    p_val = 2 if args.p == "2" else t.order
    try:
        tuples = find_singular_tuples(t, p_val, **_solver_opts(args))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    obj = {"tuples": [serialize.singular_tuple_to_dict(s) for s in tuples]}
    lines = [f"{'p':<4}{'sigma':<22}{'residual':<14}vectors"]
    for s in tuples:
        vecs = " ".join(_vec_str(v) for v in s.vectors)
        lines.append(f"{s.p:<4}{_fmt(s.sigma):<22}{_fmt(s.residual):<14}{vecs}")
    _emit(obj, lines, args)
    return EXIT_OK if all(s.converged for s in tuples) else EXIT_NOCONVERGE


def _cmd_cp(args) -> int:
    t = _load(args.input)
    try:
        res = cp_als(t, args.rank, **_solver_opts(args))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    obj = serialize.cp_to_dict(res.cp)
    obj["relative_error"] = res.error
    obj["sweeps"] = len(res.errors)
    obj["converged"] = res.converged
    lines = [
        f"rank: {res.cp.rank}",
        f"relative_error: {_fmt(res.error)}",
        f"weights: {[_fmt(w) for w in res.cp.weights]}",
    ]
    _emit(obj, lines, args)
    return EXIT_OK if res.converged else EXIT_NOCONVERGE


def _cmd_tucker(args) -> int:
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            tk = serialize.tucker_from_dict(json.load(fh))
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"error: cannot read Tucker decomposition from {args.input}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    out = tucker_eval(tk)
    obj = serialize.tensor_to_dict(out)
    lines = [f"shape: {list(out.dims)}", f"data: {[_fmt(x) for x in out.to_buffer()]}"]
    _emit(obj, lines, args)
    return EXIT_OK


def _cmd_hosvd(args) -> int:
    t = _load(args.input)
    if args.ranks is None:
        ranks = list(t.dims)
    else:
        try:
            ranks = [int(r) for r in args.ranks.split(",")]
        except ValueError:
            print(f"error: --ranks must be comma-separated integers, got {args.ranks!r}", file=sys.stderr)
            return EXIT_USAGE
    try:
        tk = hosvd(t, ranks)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    err = frobenius_norm(tucker_eval(tk) - t)
    obj = serialize.tucker_to_dict(tk)
    obj["reconstruction_error"] = err
    lines = [
        f"core_shape: {list(tk.core.dims)}",
        f"reconstruction_error: {_fmt(err)}",
    ]
    _emit(obj, lines, args)
    return EXIT_OK


def _cmd_odeco(args) -> int:
    t = _load(args.input)
    symmetric = t.is_cubical and is_symmetric(t, tol=1e-12)
    opts = _solver_opts(args, symmetric=symmetric)
    if args.rank is not None:
        opts["rank"] = args.rank
    res = odeco_decompose(t, **opts)
    obj = serialize.cp_to_dict(res.cp)
    obj["reconstruction_error"] = res.reconstruction_error
    obj["orthogonality_defect"] = res.orthogonality_defect
    obj["status"] = res.status
    lines = [
        f"status: {res.status}",
        f"reconstruction_error: {_fmt(res.reconstruction_error)}",
        f"orthogonality_defect: {_fmt(res.orthogonality_defect)}",
        f"weights: {[_fmt(w) for w in res.cp.weights]}",
    ]
    _emit(obj, lines, args)
    return EXIT_OK if res.ok else EXIT_NOCONVERGE


def _cmd_mlrank(args) -> int:
    t = _load(args.input)
    mlr = multilinear_rank(t, tol=args.tol if args.tol is not None else 1e-8)
    obj = {"multilinear_rank": list(mlr)}
    lines = [f"multilinear_rank: {list(mlr)}"]
    _emit(obj, lines, args)
    return EXIT_OK


_COMMANDS = {
    "info": _cmd_info,
    "contract": _cmd_contract,
    "eig": _cmd_eig,
    "svd": _cmd_svd,
    "cp": _cmd_cp,
    "tucker": _cmd_tucker,
    "hosvd": _cmd_hosvd,
    "odeco": _cmd_odeco,
    "mlrank": _cmd_mlrank,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
