"""Command-line entry point.

Subcommands cover catalog enumeration, reduction of a form against a
catalog, congruence-quotient builds, shelling certification, the
symplectic 4-cell verifier, building quotients, and homology of a
complex loaded from JSON.  All output is deterministic: repeating an
invocation produces byte-identical stdout and files.

Exit codes: 0 success, 1 verification failure, 2 usage or precondition
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .cells import RegularComplex, SimplicialComplex, homology
from .linalg import SymMatrix
from .parabolic import building_quotient
from .perfect import Catalog, enumerate_perfect_forms
from .reduction import voronoi_reduce
from .shelling import certify_sphere
from .sl2 import build_quotient, genus_report, h1_rank, vcd_vanishing_check
from .sp4 import verify_model

CATALOG_DIR_VAR = "VOROCELL_CATALOG_DIR"


class CliError(Exception):
    """Usage or precondition failure; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation parameters for one subcommand run."""

    subcommand: str
    input_paths: tuple[Path, ...] = ()
    output_path: Optional[Path] = None
    dimension: Optional[int] = None
    level: Optional[int] = None
    budget: Optional[int] = None
    limit: Optional[int] = None
    integer: bool = False
    dual: bool = False
    verbose: int = 0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.budget is not None and self.budget <= 0:
            raise CliError("--budget must be positive")
        if self.limit is not None and self.limit <= 0:
            raise CliError("--limit must be positive")
        for p in self.input_paths:
            if not p.is_file():
                raise CliError(f"{p}: no such file")


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _load_json(path: Path) -> dict:
    try:
        text = path.read_text()
    except OSError as e:
        raise CliError(f"{path}: {e.strerror or e}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise CliError(f"{path}:{e.lineno}:{e.colno}: malformed JSON: {e.msg}") from e


def _emit(path: Path, doc: dict) -> None:
    try:
        path.write_text(_dump(doc))
    except OSError as e:
        raise CliError(f"{path}: {e.strerror or e}") from e


def _resolve_out(path_str: Optional[str]) -> Optional[Path]:
    """Resolve an output path, honoring the default catalog directory
    for relative paths when the environment variable is set."""
    if path_str is None:
        return None
    p = Path(path_str)
    base = os.environ.get(CATALOG_DIR_VAR)
    if base and not p.is_absolute():
        return Path(base) / p
    return p


def _load_form(path: Path) -> SymMatrix:
    doc = _load_json(path)
    if "rows" not in doc:
        raise CliError(f"{path}: expected a form document with a 'rows' field")
    try:
        return SymMatrix.from_json_dict(doc)
    except (ValueError, KeyError, TypeError) as e:
        raise CliError(f"{path}: bad form document: {e}") from e


def _load_catalog(path: Path) -> Catalog:
    doc = _load_json(path)
    try:
        return Catalog.from_json_dict(doc)
    except (ValueError, KeyError, TypeError) as e:
        raise CliError(f"{path}: bad catalog document: {e}") from e


def _load_any_complex(path: Path) -> "RegularComplex | SimplicialComplex":
    doc = _load_json(path)
    try:
        if "maximal_faces" in doc:
            return SimplicialComplex.from_json_dict(doc)
        if "cells" in doc:
            return RegularComplex.from_json_dict(doc)
    except (ValueError, KeyError, TypeError) as e:
        raise CliError(f"{path}: bad complex document: {e}") from e
    raise CliError(f"{path}: expected 'maximal_faces' or 'cells'")


def _load_simplicial(path: Path) -> SimplicialComplex:
    cx = _load_any_complex(path)
    if not isinstance(cx, SimplicialComplex):
        raise CliError(f"{path}: this command needs a simplicial complex "
                       "(a 'maximal_faces' document)")
    return cx


# -- subcommands ---------------------------------------------------------


def _cmd_perfect_enumerate(cfg: RunConfig) -> int:
    resume_catalog = None
    n = cfg.dimension
    if cfg.input_paths:
        resume_catalog = _load_catalog(cfg.input_paths[0])
        if n is not None and n != resume_catalog.n:
            raise CliError(
                f"--n {n} conflicts with resumed catalog dimension {resume_catalog.n}"
            )
        n = resume_catalog.n
    if n is None:
        raise CliError("one of --n or --resume is required")
    if n < 1:
        raise CliError("--n must be at least 1")
    catalog = enumerate_perfect_forms(n, limit=cfg.limit, catalog=resume_catalog)
    doc = catalog.to_json_dict()
    out = cfg.output_path
    if out is None and cfg.input_paths:
        out = cfg.input_paths[0]
    if out is not None:
        _emit(out, doc)
        summary = {
            "format": 1,
            "n": catalog.n,
            "classes": len(catalog.records),
            "complete": catalog.complete,
            "catalog": str(out),
        }
        sys.stdout.write(_dump(summary))
    else:
        sys.stdout.write(_dump(doc))
    return 0


def _cmd_reduce(cfg: RunConfig) -> int:
    form = _load_form(cfg.input_paths[0])
    catalog = _load_catalog(cfg.input_paths[1])
    try:
        result = voronoi_reduce(form, catalog)
    except ValueError as e:
        raise CliError(str(e)) from e
    doc = {
        "format": 1,
        "class_index": result.class_index,
        "steps": result.steps,
        "witness": [list(row) for row in result.witness],
        "support": list(result.support),
        "coefficients": [str(c) for c in result.coefficients],
    }
    sys.stdout.write(_dump(doc))
    return 0


def _cmd_sl2(cfg: RunConfig) -> int:
    level = cfg.level
    assert level is not None
    try:
        tess = build_quotient(level)
        report = genus_report(level)
    except ValueError as e:
        raise CliError(str(e)) from e
    doc = {
        "format": 1,
        "level": level,
        "triangles": report.triangles,
        "edges": report.edges,
        "cusps": report.cusps,
        "genus": report.genus,
        "genus_ratio": str(report.ratio),
        "h1_rank": h1_rank(tess),
        "vcd_vanishing": vcd_vanishing_check(tess),
    }
    sys.stdout.write(_dump(doc))
    if cfg.output_path is not None:
        emitted = tess.dual_graph() if cfg.dual else tess.surface_complex()
        _emit(cfg.output_path, emitted.to_json_dict())
    return 0


def _cmd_shell(cfg: RunConfig) -> int:
    cx = _load_simplicial(cfg.input_paths[0])
    assert cfg.budget is not None
    try:
        cert = certify_sphere(cx, cfg.budget)
    except ValueError as e:
        raise CliError(str(e)) from e
    doc = {
        "format": 1,
        "status": cert.status,
        "detail": cert.detail,
        "facets": len(cx.maximal_faces),
        "nodes_used": cert.nodes_used,
    }
    sys.stdout.write(_dump(doc))
    return 0 if cert.status in ("sphere", "ball") else 1


def _cmd_sp4_verify(cfg: RunConfig) -> int:
    report = verify_model()
    sys.stdout.write(_dump(report.to_json_dict()))
    return 0 if report.ok else 1


def _cmd_building(cfg: RunConfig) -> int:
    n = cfg.dimension
    assert n is not None
    try:
        b = building_quotient(n)
    except ValueError as e:
        raise CliError(str(e)) from e
    labeled = b.labeled_simplices()
    simplices = [
        {
            "cuts": list(cuts),
            "dim": len(cuts) - 1,
            "partition": str(partition),
        }
        for cuts, partition in sorted(labeled.items(), key=lambda kv: (len(kv[0]), kv[0]))
    ]
    doc = {
        "format": 1,
        "n": n,
        "count": len(simplices),
        "f_vector": list(b.complex.f_vector()),
        "simplices": simplices,
    }
    sys.stdout.write(_dump(doc))
    if cfg.output_path is not None:
        _emit(cfg.output_path, b.complex.to_json_dict())
    return 0


def _cmd_homology(cfg: RunConfig) -> int:
    cx = _load_any_complex(cfg.input_paths[0])
    result = homology(cx, rational=not cfg.integer)
    doc: dict = {"format": 1, "betti": list(result.betti)}
    if cfg.integer:
        doc["torsion"] = [list(t) for t in result.torsion]
    sys.stdout.write(_dump(doc))
    return 0


# -- argument parsing ------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vorocell",
        description="Exact-arithmetic cell complexes from quadratic forms "
        "and arithmetic quotients.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument(
        "--seed",
        type=int,
        default=0,
        help="seed recorded for randomized harnesses (reserved; all "
        "subcommands are deterministic)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_perfect = sub.add_parser("perfect", help="perfect-form catalogs")
    perfect_sub = p_perfect.add_subparsers(dest="perfect_command", required=True)
    p_enum = perfect_sub.add_parser(
        "enumerate", help="enumerate perfect-form classes by neighbor traversal"
    )
    p_enum.add_argument("--n", type=int, help="form dimension")
    p_enum.add_argument("--resume", metavar="CATALOG", help="continue a saved catalog")
    p_enum.add_argument("--out", metavar="PATH", help="write the catalog here")
    p_enum.add_argument("--limit", type=int, help="stop after this many classes")

    p_reduce = sub.add_parser(
        "reduce", help="reduce a positive-definite form against a catalog"
    )
    p_reduce.add_argument("--form", required=True, metavar="FORM_JSON")
    p_reduce.add_argument("--catalog", required=True, metavar="CATALOG_JSON")

    p_sl2 = sub.add_parser("sl2", help="congruence quotient of the level-N tessellation")
    p_sl2.add_argument("--level", type=int, required=True)
    p_sl2.add_argument("--emit", metavar="PATH", help="write the surface complex here")
    p_sl2.add_argument(
        "--dual", action="store_true", help="emit the dual graph instead of the surface"
    )

    p_shell = sub.add_parser("shell", help="certify a complex as a sphere or ball")
    p_shell.add_argument("--complex", required=True, dest="complex_path", metavar="JSON")
    p_shell.add_argument("--budget", type=int, default=10_000_000)

    p_sp4 = sub.add_parser("sp4", help="symplectic 4-cell accounting")
    sp4_sub = p_sp4.add_subparsers(dest="sp4_command", required=True)
    sp4_sub.add_parser("verify", help="check every stated identity")

    p_building = sub.add_parser("building", help="finite building quotient for SL_n")
    p_building.add_argument("--n", type=int, required=True)
    p_building.add_argument("--emit", metavar="PATH", help="write the complex here")

    p_hom = sub.add_parser("homology", help="homology of a complex from JSON")
    p_hom.add_argument("--complex", required=True, dest="complex_path", metavar="JSON")
    p_hom.add_argument(
        "--integer", action="store_true", help="integer homology with torsion"
    )
    return parser


def _config_from(ns: argparse.Namespace) -> RunConfig:
    common = dict(verbose=ns.verbose, seed=ns.seed)
    if ns.command == "perfect":
        inputs = (Path(ns.resume),) if ns.resume else ()
        return RunConfig(
            "perfect enumerate",
            input_paths=inputs,
            output_path=_resolve_out(ns.out),
            dimension=ns.n,
            limit=ns.limit,
            **common,
        )
    if ns.command == "reduce":
        return RunConfig(
            "reduce",
            input_paths=(Path(ns.form), Path(ns.catalog)),
            **common,
        )
    if ns.command == "sl2":
        return RunConfig(
            "sl2",
            level=ns.level,
            output_path=_resolve_out(ns.emit),
            dual=ns.dual,
            **common,
        )
    if ns.command == "shell":
        return RunConfig(
            "shell",
            input_paths=(Path(ns.complex_path),),
            budget=ns.budget,
            **common,
        )
    if ns.command == "sp4":
        return RunConfig("sp4 verify", **common)
    if ns.command == "building":
        return RunConfig(
            "building",
            dimension=ns.n,
            output_path=_resolve_out(ns.emit),
            **common,
        )
    if ns.command == "homology":
        return RunConfig(
            "homology",
            input_paths=(Path(ns.complex_path),),
            integer=ns.integer,
            **common,
        )
    raise CliError(f"unknown command {ns.command!r}")


_DISPATCH = {
    "perfect enumerate": _cmd_perfect_enumerate,
    "reduce": _cmd_reduce,
    "sl2": _cmd_sl2,
    "shell": _cmd_shell,
    "sp4 verify": _cmd_sp4_verify,
    "building": _cmd_building,
    "homology": _cmd_homology,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _config_from(ns)
        return _DISPATCH[cfg.subcommand](cfg)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
