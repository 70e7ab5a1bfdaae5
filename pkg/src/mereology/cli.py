"""Command-line interface: ``check``, ``eval``, ``laws`` and ``show``.

Exit codes: 0 success, 1 a falsified expectation or failed law, 2 a parse or
elaboration error, 3 a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional, TextIO

from . import core
from .core import render_label
from .laws import LAWS, describe_failure, law_suite, random_law_runs
from .dsl import DslError, eval_query, load, parse_query
from .dsl.diagnostics import Diagnostic, SourceSpan

EXIT_OK, EXIT_FALSIFIED, EXIT_INVALID, EXIT_USAGE = 0, 1, 2, 3
SCHEMA_VERSION = "1"
MAX_BLOCKS = 20
MAX_LINES = 20


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    command: str
    input: Optional[str] = None
    query: Optional[str] = None
    format: str = "text"
    seed: Optional[int] = None
    max_size: Optional[int] = None
    num_systems: Optional[int] = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mereology", description="Query finite behavioral models of systems and their parts.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("check", help="run every query in a spec file")
    p.add_argument("input")
    common(p)
    p = sub.add_parser("eval", help="run one query against a spec file")
    p.add_argument("input")
    p.add_argument("--query", required=True)
    common(p)
    p = sub.add_parser("laws", help="run the law suite on a spec file or on seeded random systems")
    p.add_argument("input", nargs="?")
    p.add_argument("--seed", type=int)
    p.add_argument("--max-size", type=int)
    p.add_argument("--num-systems", type=int)
    common(p)
    p = sub.add_parser("show", help="print behavior counts, partitions and the part order")
    p.add_argument("input")
    common(p)
    return parser


def parse_args(argv) -> CliConfig:
    ns = build_parser().parse_args(argv)
    config = CliConfig(
        command=ns.command,
        input=ns.input,
        query=getattr(ns, "query", None),
        format=ns.format,
        seed=getattr(ns, "seed", None),
        max_size=getattr(ns, "max_size", None),
        num_systems=getattr(ns, "num_systems", None),
    )
    if config.command == "laws":
        random_flags = (config.seed, config.max_size, config.num_systems)
        if config.input is not None and any(f is not None for f in random_flags):
            raise UsageError("laws takes either an input file or --seed/--max-size/--num-systems, not both")
        if config.num_systems is not None and config.num_systems < 1:
            raise UsageError("--num-systems must be positive")
        if config.max_size is not None and not 1 <= config.max_size <= 8:
            raise UsageError("--max-size must be between 1 and 8")
    return config


class _Output:
    def __init__(self, config: CliConfig, stdout: TextIO, stderr: TextIO):
        self.config = config
        self.stdout = stdout
        self.stderr = stderr
        self.results: list[dict] = []
        self.diagnostics: list[dict] = []
        self.lines: list[str] = []
        self.color = (
            config.format == "text"
            and "NO_COLOR" not in os.environ
            and hasattr(stdout, "isatty")
            and stdout.isatty()
        )

    def paint(self, text: str, code: str) -> str:
        return f"\033[{code}m{text}\033[0m" if self.color else text

    def line(self, text: str = ""):
        self.lines.append(text)

    def diagnostic(self, d: Diagnostic, source: Optional[str], path: str):
        entry = d.to_json()
        entry["file"] = path
        self.diagnostics.append(entry)
        if self.config.format == "text":
            self.stderr.write(d.render(source, path) + "\n")

    def flush(self):
        if self.config.format == "json":
            doc = {
                "version": SCHEMA_VERSION,
                "command": self.config.command,
                "results": self.results,
                "diagnostics": self.diagnostics,
            }
            self.stdout.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
        elif self.lines:
            self.stdout.write("\n".join(self.lines) + "\n")


def _read(path: str) -> str:
    try:
        data = open(path, "rb").read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        prefix = data[: exc.start].decode("utf-8")
        line = prefix.count("\n") + 1
        column = len(prefix) - (prefix.rfind("\n") + 1) + 1
        span = SourceSpan(exc.start, exc.start + 1, line, column)
        raise DslError(Diagnostic("input is not valid UTF-8", span, "parse")) from None


def _more(n: int, what: str) -> str:
    return f"... {n} more {what}"


def _block_text(block: list[str]) -> str:
    shown = block[:MAX_LINES]
    if len(block) > MAX_LINES:
        shown = shown + [_more(len(block) - MAX_LINES, "behaviors")]
    return "{" + ", ".join(shown) + "}"


def _text_result(out: _Output, r) -> None:
    out.line(f"query {r.query}")
    value = r.value
    if r.kind in ("allows", "ensures"):
        out.line(f"  result: {value['count']} of {value['size']} behaviors of {value['part']}")
        for label in value["labels"][:MAX_LINES]:
            out.line(f"    {label}")
        if len(value["labels"]) > MAX_LINES:
            out.line("    " + _more(len(value["labels"]) - MAX_LINES, "behaviors"))
    elif r.kind in ("meet", "join"):
        same = value["same_as"]
        tail = f", same partition as {', '.join(same)}" if same else ""
        out.line(f"  result: {_count(value['size'], 'block', 'blocks')}{tail}")
        for block in r.witnesses[:MAX_BLOCKS]:
            out.line("    " + _block_text(block))
        if len(r.witnesses) > MAX_BLOCKS:
            out.line("    " + _more(len(r.witnesses) - MAX_BLOCKS, "blocks"))
    elif r.kind == "laws":
        failed = [w for w in r.witnesses if not w["passed"]]
        out.line(f"  result: {len(r.witnesses) - len(failed)} of {len(r.witnesses)} laws passed")
        for w in failed:
            out.line(f"    {w['law']} failed: {json.dumps(w['counterexample'], sort_keys=True)}")
    else:
        out.line("  result: " + ("true" if value else "false"))
        if r.witnesses and "from" in r.witnesses[0]:
            out.line("  factor map:")
        for w in r.witnesses[:MAX_LINES]:
            if "from" in w:
                out.line(f"    {w['from']} -> {w['to']}")
            elif "behavior" in w:
                out.line(f"  witness: {w['behavior']}")
            else:
                cx = w["counterexample"]
                out.line("  counterexample: " + (" vs ".join(cx) if isinstance(cx, list) else cx))
        if len(r.witnesses) > MAX_LINES:
            out.line("    " + _more(len(r.witnesses) - MAX_LINES, "pairs"))
    for note in r.notes:
        out.line(f"  note: {note}")
    if r.holds is True and (r.expected is not None or r.kind == "laws"):
        out.line("  " + out.paint("holds", "32"))
    elif r.holds is False:
        expected = r.expected
        if isinstance(expected, list):
            expected = "{" + ", ".join(expected) + "}"
        elif isinstance(expected, bool):
            expected = "true" if expected else "false"
        out.line("  " + out.paint("FALSIFIED", "31") + (f", expected {expected}" if expected is not None else ""))


def _summary(model) -> str:
    return f"{model.meta.get('system_name', model.system.id)}: {_count(len(model.system), 'behavior', 'behaviors')}, parts " + ", ".join(model.parts)


def _count(n: int, one: str, many: str) -> str:
    return f"{n} {one if n == 1 else many}"


def _run_queries(out: _Output, model, queries) -> int:
    results = [eval_query(model, q) for q in queries]
    falsified = sum(r.falsified for r in results)
    if out.config.format == "json":
        out.results.extend(r.to_json() for r in results)
    else:
        out.line(_summary(model))
        for r in results:
            out.line()
            _text_result(out, r)
        out.line()
        out.line(f"{_count(len(results), 'query', 'queries')}, {falsified} falsified")
    return EXIT_FALSIFIED if falsified else EXIT_OK


def _check(out: _Output, config: CliConfig) -> int:
    source = _read(config.input)
    model, queries = load(source)
    return _run_queries(out, model, queries)


def _eval(out: _Output, config: CliConfig) -> int:
    source = _read(config.input)
    model, _ = load(source)
    try:
        q = parse_query(config.query)
        return _run_queries(out, model, [q])
    except DslError as exc:
        exc.source, exc.path = config.query, "<query>"
        raise


def _laws(out: _Output, config: CliConfig) -> int:
    if config.input is not None:
        model, _ = load(_read(config.input))
        reports = law_suite(model, seed=0)
        failed = [r for r in reports if not r.passed]
        if config.format == "json":
            out.results.extend(
                {
                    "query": r.law,
                    "kind": "law",
                    "value": r.passed,
                    "witnesses": [r.counterexample] if r.counterexample else [],
                    "system": r.system,
                    "checked": r.checked,
                }
                for r in reports
            )
        else:
            out.line(_summary(model))
            for r in reports:
                status = out.paint("ok", "32") if r.passed else out.paint("FAILED", "31")
                out.line(f"  {r.law}: {status} ({r.checked} checks)")
            for r in failed:
                out.line("  " + describe_failure(r, model))
            out.line("all laws passed" if not failed else _count(len(failed), "law failure", "law failures"))
        return EXIT_FALSIFIED if failed else EXIT_OK

    seed = 0 if config.seed is None else config.seed
    max_size = 8 if config.max_size is None else config.max_size
    num = 100 if config.num_systems is None else config.num_systems
    failures = 0
    checks = 0
    for run in random_law_runs(num, seed=seed, max_size=max_size):
        bad = [r for r in run.reports if not r.passed]
        failures += len(bad)
        checked = sum(r.checked for r in run.reports)
        checks += checked
        if config.format == "json":
            out.results.append(
                {
                    "query": "laws",
                    "kind": "laws",
                    "value": not bad,
                    "witnesses": [r.to_json() for r in bad],
                    "system": run.reports[0].system if run.reports else f"random-{seed}-{run.index}",
                    "size": run.size,
                    "parts": run.num_parts,
                    "checked": checked,
                }
            )
        else:
            for r in bad:
                out.line(f"system {run.index} (size {run.size}): {r.law} failed: {json.dumps(r.counterexample, sort_keys=True)}")
    if config.format == "text":
        out.line(f"{num} random systems (seed {seed}, sizes 1..{max_size}), {len(LAWS)} laws, {checks} checks")
        out.line("all laws passed" if not failures else _count(failures, "law failure", "law failures"))
    return EXIT_FALSIFIED if failures else EXIT_OK


def hasse(model) -> tuple[list[list[str]], list[tuple[str, str]]]:
    """Classes of equal parts (declaration order) and covering pairs ``(upper, lower)``."""
    classes: list[list[str]] = []
    for name, p in model.parts.items():
        for cls in classes:
            if core.same_partition(model.parts[cls[0]], p):
                cls.append(name)
                break
        else:
            classes.append([name])
    reps = [model.parts[c[0]] for c in classes]
    n = len(reps)
    below = [[i != j and core.part_leq(reps[j], reps[i]) is not None for j in range(n)] for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(n):
            if below[i][j] and not any(below[i][k] and below[k][j] for k in range(n)):
                edges.append((" = ".join(classes[i]), " = ".join(classes[j])))
    return classes, edges


def _show(out: _Output, config: CliConfig) -> int:
    model, _ = load(_read(config.input))
    classes, edges = hasse(model)
    parts = []
    for name, p in model.parts.items():
        blocks = [[render_label(model.system[s]) for s in block] for block in p.fibers]
        parts.append({"name": name, "size": len(p), "blocks": blocks[:MAX_BLOCKS], "truncated": max(0, len(blocks) - MAX_BLOCKS)})
    if config.format == "json":
        out.results.append(
            {
                "query": "show",
                "kind": "model",
                "value": {
                    "system": model.meta.get("system_name", model.system.id),
                    "behaviors": len(model.system),
                    "parts": parts,
                    "classes": classes,
                    "hasse": [list(e) for e in edges],
                },
                "witnesses": [],
            }
        )
        return EXIT_OK
    out.line(f"system {model.meta.get('system_name', model.system.id)}: {_count(len(model.system), 'behavior', 'behaviors')}")
    for entry in parts:
        out.line()
        out.line(f"part {entry['name']}: {_count(entry['size'], 'behavior', 'behaviors')}")
        for block in entry["blocks"]:
            out.line("  " + _block_text(block))
        if entry["truncated"]:
            out.line("  " + _more(entry["truncated"], "blocks"))
    out.line()
    out.line("part order (covering pairs, larger > smaller):")
    for hi, lo in edges:
        out.line(f"  {hi} > {lo}")
    if not edges:
        # a one-behavior system: every part is Top
        out.line("  " + " = ".join(classes[0]))
    return EXIT_OK


_COMMANDS = {"check": _check, "eval": _eval, "laws": _laws, "show": _show}


def run(config: CliConfig, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    out = _Output(config, stdout, stderr)
    try:
        code = _COMMANDS[config.command](out, config)
    except DslError as exc:
        source = getattr(exc, "source", None)
        path = getattr(exc, "path", config.input or "<input>")
        if source is None and config.input is not None:
            try:
                source = _read(config.input)
            except (UsageError, DslError):
                source = None
        out.results.clear()
        out.lines.clear()
        out.diagnostic(exc.diagnostic, source, path)
        code = EXIT_INVALID
    except UsageError as exc:
        stderr.write(f"mereology: error: {exc}\n")
        return EXIT_USAGE
    out.flush()
    return code


def main(argv=None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    stderr = stderr or sys.stderr
    try:
        config = parse_args(argv)
    except UsageError as exc:
        stderr.write(f"mereology: error: {exc}\n")
        return EXIT_USAGE
    return run(config, stdout, stderr)


if __name__ == "__main__":
    sys.exit(main())
