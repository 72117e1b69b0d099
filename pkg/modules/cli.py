"""
Command-line front end.

Exit codes: 0 ok, 1 invalid scheme or failed checks, 2 parse or usage
error, 3 certification unknown.
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, TextIO

from modules.batch_processing import BatchProcessor
from modules.cache import scheme_cache
from modules.computad import certify_homwise
from modules.config import OUTPUT_FORMATS, RunConfig, load_run_config
from modules.corpus import generate_corpus, write_corpus
from modules.errors import (
    ConfigError,
    EmbeddingError,
    EmptyWidths,
    InvalidSchemeError,
    ParseError,
    PastelabError,
    StructureError,
    UnknownVertex,
)
from modules.hom_poset import cube_table, hom_poset, composite_chain
from modules.invariant_suite import run_invariant_suite
from modules.path_kit import presentation
from modules.report import homwise_rows, json_text, table_text, validation_rows
from modules.scheme_core import build_theta2, validate_pasting_scheme
from modules.scheme_io import hasse_dot, load_scheme, parse_scheme, serialize_scheme, to_dot

# Configure logging
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_UNKNOWN = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pastelab", description="Pasting schemes and their free 2-categories")
    parser.add_argument("--verbose", action="store_true", help="log progress to stderr")
    parser.add_argument("--debug", action="store_true", help="log everything to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_format(p: argparse.ArgumentParser, default: str = "json") -> None:
        p.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS, default=default)

    p = sub.add_parser("validate", help="validate a scheme file")
    p.add_argument("file")
    with_format(p)

    p = sub.add_parser("hom", help="hom-poset between two vertices")
    p.add_argument("file")
    p.add_argument("x")
    p.add_argument("y")
    with_format(p)
    p.add_argument("--out", help="also write the Hasse diagram DOT file here")

    p = sub.add_parser("certify", help="certify the homwise inclusions")
    p.add_argument("file")
    p.add_argument("--level", type=int, default=4)
    p.add_argument("--budget", type=int, default=1_000_000)
    with_format(p)

    p = sub.add_parser("corpus", help="write random scheme files")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--max-faces", dest="max_faces", type=int, default=4)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("theta2", help="write the scheme file of a theta2 shape")
    p.add_argument("widths", help="comma separated column widths, e.g. 2,0,3,0")
    p.add_argument("--out", help="output file (stdout by default)")

    p = sub.add_parser("present", help="presentation and composite chain")
    p.add_argument("file")
    with_format(p)
    return parser


def log_level_for(args: argparse.Namespace) -> str:
    if getattr(args, "debug", False):
        return "DEBUG"
    if getattr(args, "verbose", False):
        return "INFO"
    return "WARNING"


def _emit(text: str, stream: TextIO) -> None:
    stream.write(text)


def cmd_validate(config: RunConfig, args: argparse.Namespace, out: TextIO) -> int:
    path = config.inputs[0]
    with open(path, "rb") as f:
        graph = parse_scheme(f.read())
    try:
        ps = validate_pasting_scheme(graph)
    except InvalidSchemeError as e:
        names = sorted({v.__class__.__name__ for v in e.violations})
        data: Dict[str, Any] = {"valid": False, "file": path, "violations": [v.to_dict() for v in e.violations],
                                "summary": ", ".join(names)}
        if config.output_format == "text":
            _emit(f"{path}: invalid ({data['summary']})\n", out)
            _emit(table_text([{"violation": v["error"], "message": v["message"]} for v in data["violations"]]), out)
        else:
            _emit(json_text(data), out)
        return EXIT_INVALID

    summary = f"{len(ps.faces)} interior faces"
    if config.output_format == "dot":
        _emit(to_dot(ps), out)
    elif config.output_format == "text":
        _emit(f"{path}: valid, {len(ps.objects)} objects, {len(ps.edges)} edges, {summary}\n", out)
        _emit(f"s = {ps.s}, t = {ps.t}\ndom = {ps.dom.label()}\ncod = {ps.cod.label()}\n", out)
        _emit(table_text(validation_rows(ps), ["face", "source", "target", "dom", "cod"]), out)
    else:
        _emit(json_text({
            "valid": True,
            "file": path,
            "objects": len(ps.objects),
            "edges": len(ps.edges),
            "interior_faces": len(ps.faces),
            "summary": summary,
            "s": ps.s,
            "t": ps.t,
            "dom": ps.dom.to_list(),
            "cod": ps.cod.to_list(),
            "faces": [f.to_dict() for f in ps.faces],
        }), out)
    return EXIT_OK


def cmd_hom(config: RunConfig, args: argparse.Namespace, out: TextIO) -> int:
    ps = load_scheme(config.inputs[0])
    x, y = args.x, args.y
    ps.check_vertex(x)
    ps.check_vertex(y)
    hom = hom_poset(ps, x, y)
    table = cube_table(ps, x, y)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(hasse_dot(hom))
    if config.output_format == "dot":
        _emit(hasse_dot(hom), out)
    elif config.output_format == "text":
        _emit(f"hom({x}, {y}): {len(hom)} paths over faces {', '.join(table.faces) or '-'}\n", out)
        _emit(table_text([{"path": p.to_list(), "point": point.label() or "-"} for p, point in table.rows]), out)
    else:
        data = hom.to_json()
        data["cube"] = table.to_json()
        _emit(json_text(data), out)
    return EXIT_OK


def cmd_certify(config: RunConfig, args: argparse.Namespace, out: TextIO) -> int:
    ps = load_scheme(config.inputs[0])
    failures = run_invariant_suite(ps, config.level)
    processor = BatchProcessor(max_workers=config.threads)
    report = certify_homwise(ps, config.level, config.budget, processor)
    logger.debug(f"Scheme cache: {scheme_cache.get_stats()}")
    data = report.to_dict()
    data["invariant_failures"] = failures
    if config.output_format == "text":
        _emit(table_text(homwise_rows(data)), out)
        _emit(f"subcomputad: {report.is_subcomputad}\n", out)
        for failure in failures:
            _emit(f"invariant failure: {failure}\n", out)
    else:
        _emit(json_text(data), out)
    if failures or not report.is_subcomputad:
        return EXIT_INVALID
    if report.unknown_pairs():
        return EXIT_UNKNOWN
    return EXIT_OK if report.all_certified else EXIT_INVALID


def cmd_corpus(config: RunConfig, args: argparse.Namespace, out: TextIO) -> int:
    schemes = generate_corpus(config.seed, config.count, config.max_faces)
    paths = write_corpus(schemes, config.out)
    _emit(json_text({"files": paths, "seed": config.seed, "count": config.count, "max_faces": config.max_faces}), out)
    return EXIT_OK


def parse_widths(text: str) -> List[int]:
    try:
        widths = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ConfigError(f"widths must be comma separated integers, got {text!r}")
    return widths


def cmd_theta2(config: RunConfig, args: argparse.Namespace, out: TextIO) -> int:
    ps = build_theta2(parse_widths(args.widths))
    text = serialize_scheme(ps.graph)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        _emit(text, out)
    return EXIT_OK


def cmd_present(config: RunConfig, args: argparse.Namespace, out: TextIO) -> int:
    ps = load_scheme(config.inputs[0])
    pres = presentation(ps)
    chain = composite_chain(ps)
    if config.output_format == "text":
        rows = [{"step": i, "face": step.face, "prefix": step.prefix.to_list(), "suffix": step.suffix.to_list(),
                 "path after": chain[i + 1].to_list()} for i, step in enumerate(pres.steps)]
        _emit(f"dom = {ps.dom.label()}\n", out)
        _emit(table_text(rows), out)
    else:
        _emit(json_text({"presentation": pres.to_json(), "composite": [p.to_list() for p in chain]}), out)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "hom": cmd_hom,
    "certify": cmd_certify,
    "corpus": cmd_corpus,
    "theta2": cmd_theta2,
    "present": cmd_present,
}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    inputs = [args.file] if getattr(args, "file", None) else []
    return load_run_config(
        args.command,
        inputs=inputs,
        level=getattr(args, "level", None),
        budget=getattr(args, "budget", None),
        output_format=getattr(args, "output_format", None),
        seed=getattr(args, "seed", None),
        count=getattr(args, "count", None),
        max_faces=getattr(args, "max_faces", None),
        out=getattr(args, "out", None),
        log_level=log_level_for(args),
    )


def run(args: argparse.Namespace, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    """
    Run a parsed command and map errors to exit codes.
    """
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        config = config_from_args(args)
        return COMMANDS[config.command](config, args, out)
    except (ParseError, UnknownVertex, ConfigError, EmptyWidths) as e:
        logger.error(f"{args.command} failed: {e.message}")
        err.write(f"{e.__class__.__name__}: {e.message}\n")
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"{args.command} failed: {str(e)}")
        err.write(f"IOError: {str(e)}\n")
        return EXIT_USAGE
    except (InvalidSchemeError, StructureError, EmbeddingError) as e:
        logger.error(f"{args.command} failed: {e.message}")
        err.write(f"{e.__class__.__name__}: {e.message}\n")
        return EXIT_INVALID
    except PastelabError as e:
        logger.error(f"{args.command} failed: {e.message}")
        err.write(f"{e.__class__.__name__}: {e.message}\n")
        return EXIT_INVALID
