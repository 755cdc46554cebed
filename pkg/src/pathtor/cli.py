"""Command-line interface.

Digraph arguments are file paths, ``-`` for stdin, or ``builtin:NAME[:P...]``
(for example ``builtin:cycle:6`` or ``builtin:line:4:+-+``).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any

from . import __version__
from .chains import ChainComplex, InnerProduct
from .digraph import (Digraph, box_power, builtin, cartesian_product, join_digraph, join_power,
                      parse_digraph)
from .errors import PathtorError
from .paths import DEFAULT_MAX_LEN, allowed_paths, natural_dimension
from .spectral import bettis, euler, spectrum
from .torsion import predict_power, torsion_report
from .verify import verify_join, verify_kunneth, verify_main, verify_product, verify_scaling

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    inner: InnerProduct = InnerProduct.STANDARD
    reduced: bool = False
    max_len: int = DEFAULT_MAX_LEN
    seed: int = 0
    format: str = "json"
    output: str | None = None
    extra: dict[str, Any] = field(default_factory=dict)


# ---------------------------------------------------------------- I/O helpers

def load_digraph(source: str) -> Digraph:
    if source.startswith("builtin:"):
        name, *params = source[len("builtin:"):].split(":")
        return builtin(name, *params)
    if source == "-":
        return parse_digraph(sys.stdin.read())
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise PathtorError(f"cannot read {source!r}: {exc.strerror}", "io_error") from None
    return parse_digraph(text)


def _round_floats(obj):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def dump_json(obj) -> str:
    return json.dumps(_round_floats(obj), indent=2) + "\n"


def _text(obj, indent: str = "") -> str:
    lines = []
    for key, value in obj.items():
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_text(value, indent + "  ").rstrip("\n"))
        else:
            if isinstance(value, list):
                value = " ".join(json.dumps(_round_floats(v)) for v in value)
            elif isinstance(value, float):
                value = f"{value:.12g}"
            lines.append(f"{indent}{key}: {value}")
    return "\n".join(lines) + "\n"


def _path_labels(graph: Digraph, path) -> list[str]:
    return [graph.vertices[v] for v in path]


# ---------------------------------------------------------------- commands

def _one_input(cfg: RunConfig, n: int = 1) -> list[Digraph]:
    if len(cfg.inputs) != n:
        raise PathtorError(f"{cfg.command} expects {n} input digraph(s), got {len(cfg.inputs)}",
                           "bad_arguments")
    return [load_digraph(s) for s in cfg.inputs]


def cmd_paths(cfg: RunConfig):
    (g,) = _one_input(cfg)
    pcd = allowed_paths(g, cfg.max_len)
    levels = [{"degree": n, "count": len(pcd.level(n)),
               "paths": [_path_labels(g, p) for p in pcd.level(n)]}
              for n in range(0, pcd.n_max + 1)]
    return {"n_max": pcd.n_max, "natural_dimension": natural_dimension(pcd),
            "truncated": pcd.truncated, "levels": levels}


def cmd_omega(cfg: RunConfig):
    (g,) = _one_input(cfg)
    cc = ChainComplex(allowed_paths(g, cfg.max_len), augmented=cfg.reduced)
    degrees = []
    for p in cc.degrees:
        basis = [[{"path": _path_labels(g, path), "coef": str(c)} for path, c in v.items()]
                 for v in cc.omega_basis(p)]
        degrees.append({"degree": p, "dim": cc.dim(p), "basis": basis})
    return {"dims_omega": cc.dims(), "truncated": cc.truncated, "degrees": degrees}


def cmd_homology(cfg: RunConfig):
    (g,) = _one_input(cfg)
    pcd = allowed_paths(g, cfg.max_len)
    cc = ChainComplex(pcd, augmented=cfg.reduced)
    out = {"degrees": list(cc.degrees), "dims_omega": cc.dims(), "betti": bettis(cc),
           "euler": euler(cc), "euler_reduced": euler(cc, reduced=True),
           "natural_dimension": natural_dimension(pcd), "truncated": cc.truncated}
    if cfg.extra.get("spectrum"):
        kind = cfg.inner
        out["spectrum"] = {str(p): [float(x) for x in spectrum(cc, p, kind)] for p in cc.degrees}
    return out


def cmd_torsion(cfg: RunConfig):
    (g,) = _one_input(cfg)
    rep = torsion_report(g, cfg.inner, cfg.reduced, cfg.max_len, cfg.seed)
    return rep.to_dict()


def cmd_product(cfg: RunConfig):
    x, y = _one_input(cfg, 2)
    return cartesian_product(x, y)


def cmd_join(cfg: RunConfig):
    x, y = _one_input(cfg, 2)
    return join_digraph(x, y)


def cmd_power(cfg: RunConfig):
    (g,) = _one_input(cfg)
    n, mode = cfg.extra["n"], cfg.extra["mode"]
    if n < 1:
        raise PathtorError("power must be at least 1", "bad_parameter")
    if not cfg.extra.get("predict"):
        return box_power(g, n) if mode == "box" else join_power(g, n)
    rep = torsion_report(g, InnerProduct.STANDARD, mode == "join", cfg.max_len, None)
    pred = predict_power(rep, n, mode)
    return {"mode": mode, "n": n, "truncated": rep.truncated, **pred.to_dict()}


def cmd_verify(cfg: RunConfig):
    which = cfg.extra["check"]
    if which == "main":
        (g,) = _one_input(cfg)
        return verify_main(g, cfg.inner, cfg.reduced, cfg.max_len, cfg.seed)
    if which == "scaling":
        (g,) = _one_input(cfg)
        return verify_scaling(g, cfg.max_len, cfg.seed)
    x, y = _one_input(cfg, 2)
    if which == "product":
        return verify_product(x, y, cfg.max_len)
    if which == "join":
        return verify_join(x, y, cfg.max_len)
    return verify_kunneth(x, y, cfg.max_len)


def cmd_builtin(cfg: RunConfig):
    return builtin(cfg.extra["name"], *cfg.extra["params"])


COMMANDS = {
    "paths": cmd_paths, "omega": cmd_omega, "homology": cmd_homology,
    "torsion": cmd_torsion, "product": cmd_product, "join": cmd_join,
    "power": cmd_power, "verify": cmd_verify, "builtin": cmd_builtin,
}


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        result = COMMANDS[cfg.command](cfg)
    except PathtorError as exc:
        stderr.write(dump_json({"error": {"code": exc.code, "message": str(exc)}}))
        return EXIT_INPUT
    if isinstance(result, Digraph):
        body = result.to_edge_list() if cfg.format == "text" else result.to_json()
    elif cfg.format == "text":
        body = _text(result)
    else:
        body = dump_json(result)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        stdout.write(body)
    if cfg.command == "verify" and not result["ok"]:
        return EXIT_VERIFY
    return EXIT_OK


# ---------------------------------------------------------------- argument parsing

class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors: JSON on stderr and exit status 1."""

    def error(self, message):
        sys.stderr.write(dump_json({"error": {"code": "usage", "message": message}}))
        self.exit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--inner", choices=[k.value for k in InnerProduct], default="standard",
                        help="inner product on chains (default: standard)")
    common.add_argument("--reduced", action="store_true",
                        help="use the augmented complex (reduced torsion)")
    common.add_argument("--max-len", type=int, default=DEFAULT_MAX_LEN, metavar="N",
                        help=f"longest allowed path to enumerate (default: {DEFAULT_MAX_LEN})")
    common.add_argument("--seed", type=int, default=0, help="basis randomisation seed")
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("-o", "--output", metavar="PATH", help="write the report here")

    parser = _Parser(
        prog="pathtor",
        description="Path homology, Hodge spectra and torsion of finite digraphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_text, n_inputs="1"):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if n_inputs == "1":
            p.add_argument("inputs", nargs="*", metavar="DIGRAPH")
            p.add_argument("--input", dest="input_flag", action="append", default=[],
                           metavar="DIGRAPH", help="input digraph (alternative to positional)")
        elif n_inputs == "2":
            p.add_argument("inputs", nargs=2, metavar="DIGRAPH")
        return p

    add("paths", "list allowed paths by length")
    add("omega", "bases of the boundary-invariant path spaces")
    p = add("homology", "dimensions, Betti numbers and Euler characteristics")
    p.add_argument("--spectrum", action="store_true", help="include Laplacian eigenvalues")
    add("torsion", "analytic and Reidemeister torsion report")
    add("product", "Cartesian product of two digraphs", "2")
    add("join", "join of two digraphs", "2")
    p = add("power", "box or join power of a digraph, or its predicted torsion")
    p.add_argument("-n", "--n", type=int, required=True, help="exponent")
    p.add_argument("--mode", choices=["box", "join"], default="box")
    p.add_argument("--predict", action="store_true",
                   help="report predicted torsion instead of the digraph")
    p = sub.add_parser("verify", parents=[common], help="check a torsion identity",
                       description="check a torsion identity")
    p.add_argument("check", choices=["main", "product", "join", "kunneth", "scaling"])
    p.add_argument("inputs", nargs="+", metavar="DIGRAPH")
    p = sub.add_parser("builtin", parents=[common], help="emit a named example digraph",
                       description="emit a named example digraph")
    p.add_argument("name")
    p.add_argument("params", nargs="*")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    inputs = list(getattr(ns, "inputs", []) or []) + list(getattr(ns, "input_flag", []) or [])
    extra = {k: getattr(ns, k) for k in ("n", "mode", "predict", "check", "name", "params",
                                          "spectrum") if hasattr(ns, k)}
    return RunConfig(command=ns.command, inputs=inputs, inner=InnerProduct(ns.inner),
                     reduced=ns.reduced, max_len=ns.max_len, seed=ns.seed, format=ns.format,
                     output=ns.output, extra=extra)


def main(argv: list[str] | None = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help, --version and usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    if ns.max_len < 0:
        sys.stderr.write(dump_json({"error": {"code": "bad_parameter",
                                              "message": "--max-len must be non-negative"}}))
        return EXIT_INPUT
    return run(config_from_args(ns))
