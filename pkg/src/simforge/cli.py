"""Command-line entry point.

Subcommands: validate, compile, run, render, publish, serve.
Exit codes: 0 success, 1 validation failure, 2 runtime/solver failure,
64 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .compiler import emit_compute, emit_script, emit_ui, lower
from .document import (
    DocumentParseError,
    parse_document,
    resolve_language,
    validate,
)
from .render import build_plot_model, render_svg
from .runtime import RunInputError, make_valuation, run
from .runtime.engine import result_to_csv, result_to_dict

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse default exits 2; we want 64
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="simforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a document")
    p.add_argument("file")
    p.add_argument("--lax", action="store_true", help="unknown elements warn instead of failing")

    p = sub.add_parser("compile", help="emit compute.json, ui.json and a .sce script")
    p.add_argument("file")
    p.add_argument("--lang", default=None)
    p.add_argument("-o", "--out-dir", default=".")

    p = sub.add_parser("run", help="run with defaults plus --set overrides")
    p.add_argument("file")
    p.add_argument("--lang", default=None)
    p.add_argument("--set", dest="sets", action="append", default=[], metavar="SYM=VAL")
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", default="-", help="output file, '-' for stdout")

    p = sub.add_parser("render", help="render the default-run plot as SVG")
    p.add_argument("file")
    p.add_argument("--lang", default=None)
    p.add_argument("--set", dest="sets", action="append", default=[], metavar="SYM=VAL")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--size", default="640x480")
    p.add_argument("--window", type=int, default=0)

    p = sub.add_parser("publish", help="generate a static HTML tree")
    p.add_argument("dir")
    p.add_argument("-o", "--out-dir", default="site")
    p.add_argument("--launch-base", default="")

    p = sub.add_parser("serve", help="serve simulations over HTTP")
    p.add_argument("dir")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--ttl", type=float, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--ui", default=None, help="directory with the browser client build")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"simforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        handler = {
            "validate": _cmd_validate,
            "compile": _cmd_compile,
            "run": _cmd_run,
            "render": _cmd_render,
            "publish": _cmd_publish,
            "serve": _cmd_serve,
        }[args.command]
        return handler(args)
    except _UsageError as exc:
        print(f"simforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _load_doc(path_text: str, *, lax: bool = False):
    path = Path(path_text)
    if not path.is_file():
        raise _UsageError(f"no such file: {path}")
    try:
        doc = parse_document(
            path.read_text(encoding="utf-8"), lax=lax, doc_id=path.stem
        )
    except DocumentParseError as exc:
        for err in exc.errors:
            print(f"{path}:{err.line}:{err.col}: error: {err.message}", file=sys.stderr)
        return None
    for warning in doc.parse_warnings:
        print(
            f"{path}:{warning.line}:{warning.col}: warning: {warning.message}",
            file=sys.stderr,
        )
    return doc


def _validated_view(args, *, lang: str | None):
    doc = _load_doc(args.file)
    if doc is None:
        return None
    report = validate(doc)
    for warning in report.warnings:
        print(
            f"{args.file}:{warning.line}:{warning.col}: warning: {warning.message}",
            file=sys.stderr,
        )
    if report.errors:
        for err in report.errors:
            print(f"{args.file}:{err.line}:{err.col}: error: {err.message}", file=sys.stderr)
        return None
    view = resolve_language(doc, lang)
    for warning in view.warnings:
        print(f"{args.file}: warning: {warning}", file=sys.stderr)
    return view


def _cmd_validate(args) -> int:
    doc = _load_doc(args.file, lax=args.lax)
    if doc is None:
        return EXIT_VALIDATION
    report = validate(doc)
    for warning in report.warnings:
        print(f"{args.file}:{warning.line}:{warning.col}: warning: {warning.message}")
    for err in report.errors:
        print(f"{args.file}:{err.line}:{err.col}: error: {err.message}")
    if report.errors:
        print(f"{args.file}: {len(report.errors)} error(s)")
        return EXIT_VALIDATION
    print(f"{args.file}: OK")
    return EXIT_OK


def _cmd_compile(args) -> int:
    view = _validated_view(args, lang=args.lang)
    if view is None:
        return EXIT_VALIDATION
    compute_ir, ui_ir = lower(view)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.file).stem
    (out_dir / "compute.json").write_text(emit_compute(compute_ir), encoding="utf-8")
    (out_dir / "ui.json").write_text(emit_ui(ui_ir), encoding="utf-8")
    script = emit_script(compute_ir, view.doc.display)
    (out_dir / f"{stem}.sce").write_text(script, encoding="utf-8")
    print(f"wrote {out_dir / 'compute.json'}")
    print(f"wrote {out_dir / 'ui.json'}")
    print(f"wrote {out_dir / (stem + '.sce')}")
    return EXIT_OK


def _parse_sets(sets: list[str]) -> dict:
    overrides: dict = {}
    for item in sets:
        symbol, eq, value = item.partition("=")
        if not eq or not symbol:
            raise _UsageError(f"--set expects SYM=VALUE, got {item!r}")
        value = value.strip()
        if value.startswith("["):
            rows = [
                [float(v) for v in row.replace(",", " ").split()]
                for row in value.strip("[]").split(";")
                if row.strip()
            ]
            overrides[symbol.strip()] = rows
        else:
            try:
                overrides[symbol.strip()] = float(value)
            except ValueError:
                raise _UsageError(f"--set {symbol}: not a number: {value!r}") from None
    return overrides


def _run_for(args):
    """Returns (exit_code, view, result); view/result are None on failure."""
    view = _validated_view(args, lang=getattr(args, "lang", None))
    if view is None:
        return EXIT_VALIDATION, None, None
    compute_ir, _ = lower(view)
    try:
        valuation, warnings = make_valuation(compute_ir, _parse_sets(args.sets))
    except RunInputError as exc:
        print(f"simforge: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME, None, None
    for warning in warnings:
        print(f"simforge: warning: {warning}", file=sys.stderr)
    result = run(compute_ir, valuation)
    if not result.ok:
        error = result.diagnostics["error"]
        print(
            f"simforge: solver error in task {error['task']!r}: {error['message']}",
            file=sys.stderr,
        )
        return EXIT_RUNTIME, None, None
    return EXIT_OK, view, result


def _cmd_run(args) -> int:
    code, _, result = _run_for(args)
    if code != EXIT_OK:
        return code
    if args.out == "csv":
        text = result_to_csv(result)
    else:
        from .jsonutil import canonical_dumps

        text = canonical_dumps(result_to_dict(result)) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}", file=sys.stderr)
    return EXIT_OK


def _cmd_render(args) -> int:
    code, view, result = _run_for(args)
    if code != EXIT_OK:
        return code
    try:
        w, h = (int(v) for v in args.size.lower().split("x"))
    except ValueError:
        raise _UsageError(f"--size expects WxH, got {args.size!r}") from None
    model = build_plot_model(view.doc.display, result)
    svg = render_svg(model, size=(w, h), window_index=args.window)
    output = args.output or str(Path(args.file).with_suffix(".svg"))
    Path(output).write_text(svg, encoding="utf-8")
    print(f"wrote {output}", file=sys.stderr)
    return EXIT_OK


def _cmd_publish(args) -> int:
    from .service import RegistryError, SimulationRegistry, publish_static

    try:
        registry = SimulationRegistry(args.dir)
    except RegistryError as exc:
        print(f"simforge: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    written = publish_static(registry, args.out_dir, launch_base=args.launch_base)
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_serve(args) -> int:  # pragma: no cover - blocking server loop
    from .service import RegistryError, ServiceConfig, serve

    config = ServiceConfig.load(args.dir, config_file=args.config)
    if args.host is not None:
        config.host = args.host
    if args.port is not None:
        config.port = args.port
    if args.ttl is not None:
        config.session_ttl = args.ttl
    if args.ui is not None:
        config.ui_dir = Path(args.ui)
    try:
        serve(config)
    except RegistryError as exc:
        print(f"simforge: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
