"""Command-line front end.

Exit status: 0 when something was discovered, 1 when the search came back
empty, 2 on unreadable input or bad options. Results go to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import hashlib
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from .engine import EMPolicy, EngineConfig, Mode, SolutionSet, TraceEvent, saturate, solve
from .errors import EliminativeError, KBError, ParseError
from .frontend import parse_kb, parse_query, render_kb
from .kb import KnownCausation
from .methods import Conjecture
from .query import Atom


def conjecture_dict(c: Conjecture | KnownCausation) -> dict[str, Any]:
    if isinstance(c, KnownCausation):
        return {"cause": str(c.cause), "effect": str(c.effect), "method": "known"}
    return {
        "cause": str(c.cause),
        "effect": str(c.effect),
        "method": str(c.method),
        "support": list(c.support),
        "sub_proofs": [conjecture_dict(s) for s in c.sub_proofs],
        "parametric_pairs": None if c.parametric_pairs is None else [list(p) for p in c.parametric_pairs],
        "corroborations": [{"method": str(m), "support": list(s)} for m, s in c.corroborations],
        "em_status": None if c.em_status is None else c.em_status.state,
        "score": c.score,
    }


def _event_dict(e: TraceEvent) -> dict[str, Any]:
    out: dict[str, Any] = {"kind": e.kind, "depth": e.depth}
    if e.conjecture is not None:
        c = e.conjecture
        out.update(cause=str(c.cause), effect=str(c.effect), method=str(c.method), support=list(c.support))
        if c.em_status is not None and c.em_status.failed:
            out["counterexample"] = c.em_status.counterexample
    if e.conflict_with is not None:
        out["conflicts_with"] = str(e.conflict_with)
    if e.goal is not None:
        out["goal"] = e.goal
    if e.observation is not None and "counterexample" not in out:
        out["observation"] = e.observation
    if e.detail is not None:
        out["detail"] = e.detail
    return out


def config_dict(cfg: EngineConfig) -> dict[str, Any]:
    return {
        "em_policy": str(cfg.em_policy),
        "method_order": [str(m) for m in cfg.method_order],
        "max_depth": cfg.max_depth,
        "mode": str(cfg.mode),
    }


def kb_digest(s: SolutionSet) -> dict[str, Any]:
    text = render_kb(s.kb)
    return {"observations": len(s.kb), "sha256": hashlib.sha256(text.encode("utf-8")).hexdigest()}


def render_structured(s: SolutionSet, trace: bool = True) -> str:
    doc: dict[str, Any] = {
        "bindings": [{k: str(v) for k, v in b.items() if k != "_"} for b in s.bindings],
        "conjectures": [conjecture_dict(c) for c in s.conjectures],
        "config": config_dict(s.config),
        "kb_digest": kb_digest(s),
    }
    if trace:
        doc["trace"] = [_event_dict(e) for e in s.trace]
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def _describe(c: Conjecture) -> str:
    parts = [f"{c.method} on obs {', '.join(map(str, c.support))}"]
    if c.parametric_pairs:
        parts.append("pairs " + ", ".join(f"{x}~{y}" for x, y in c.parametric_pairs))
    if c.corroborations:
        parts.append("also " + ", ".join(f"{m} on obs {', '.join(map(str, sup))}" for m, sup in c.corroborations))
    parts.append(f"EM {c.em_status}")
    parts.append(f"score {c.score}")
    return f"{c}  [{'; '.join(parts)}]"


def _tree(c: Conjecture | KnownCausation, indent: int, lines: list[str], trace: bool) -> None:
    pad = "  " * indent
    if isinstance(c, KnownCausation):
        lines.append(f"{pad}{c.cause} => {c.effect}  [known]")
        return
    lines.append(pad + (_describe(c) if trace else str(c)))
    if trace:
        for sub in c.sub_proofs:
            _tree(sub, indent + 1, lines, trace)


def _event_line(e: TraceEvent) -> str:
    pad = "  " * e.depth
    if e.kind == "accepted":
        return f"{pad}accepted {e.conjecture} by {e.conjecture.method} on obs {', '.join(map(str, e.conjecture.support))}"
    if e.kind == "rejected-em":
        c = e.conjecture
        return f"{pad}rejected {c} by {c.method} on obs {', '.join(map(str, c.support))}: obs {e.observation} has the cause without the effect"
    if e.kind == "rejected-conflict":
        c = e.conjecture
        return f"{pad}rejected {c} by {c.method} on obs {', '.join(map(str, c.support))}: conflicts with {e.conflict_with}"
    if e.kind == "mr-unexplained":
        return f"{pad}residues on obs {e.observation} for {e.goal}: {e.detail}"
    return f"{pad}{e.kind} at {e.goal}: {e.detail}"


def render_text(s: SolutionSet, trace: bool = True) -> str:
    lines: list[str] = []
    if s.bindings and any(k != "_" for b in s.bindings for k in b):
        lines.append("bindings:")
        for b in s.bindings:
            lines.append("  " + ", ".join(f"{k} = {v}" for k, v in b.items() if k != "_"))
    lines.append("conjectures:" if s.conjectures else "no conjectures")
    for c in s.conjectures:
        _tree(c, 1, lines, trace)
    if trace and s.trace:
        lines.append("trace:")
        lines.extend("  " + _event_line(e) for e in s.trace)
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="eliminative",
        description="Discover cause/effect correspondences in a knowledge base with Mill's canons.",
    )
    p.add_argument("--kb", required=True, help="knowledge-base file")
    p.add_argument("--query", help='query, e.g. "causation(c:X, c:Y)"')
    p.add_argument("--query-file", help="file holding the query")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.GOAL.value)
    p.add_argument("--em", choices=[e.value for e in EMPolicy], default=EMPolicy.STRICT_NONRESIDUE.value)
    p.add_argument("--method-order", default="MA,MD,MCV,MR", help="comma-separated permutation of MA,MD,MCV,MR")
    p.add_argument("--max-depth", type=int, default=8)
    p.add_argument("--format", choices=["text", "structured"], default="text")
    p.add_argument("--no-trace", action="store_true", help="omit explanations")
    return p


class _UsageError(Exception):
    pass


def _read(path: str, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise _UsageError(f"{what} file not found: {path}") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise _UsageError(f"cannot read {what} file {path}: {exc}") from None


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2

    try:
        try:
            cfg = EngineConfig(
                em_policy=args.em,
                method_order=tuple(m.strip() for m in args.method_order.split(",")),
                max_depth=args.max_depth,
                mode=args.mode,
            )
        except ValueError as exc:
            raise _UsageError(f"bad configuration: {exc}") from None
        if args.query is not None and args.query_file is not None:
            raise _UsageError("give either --query or --query-file, not both")
        if cfg.mode is Mode.GOAL and args.query is None and args.query_file is None:
            raise _UsageError("goal mode needs --query or --query-file")

        kb_text = _read(args.kb, "knowledge-base")
        try:
            kb = parse_kb(kb_text)
        except ParseError as exc:
            raise _UsageError(f"{args.kb}:{exc}") from None
        except KBError as exc:
            raise _UsageError(f"{args.kb}: {exc}") from None

        query = None
        if args.query is not None or args.query_file is not None:
            source = args.query if args.query is not None else _read(args.query_file, "query")
            label = "query" if args.query is not None else args.query_file
            try:
                query = parse_query(source)
            except ParseError as exc:
                raise _UsageError(f"{label}:{exc}") from None

        if cfg.mode is Mode.SATURATE:
            if query is not None and not isinstance(query, Atom):
                raise _UsageError("saturate mode takes at most a single causation(...) pattern")
            result = saturate(kb, query, cfg)
        else:
            result = solve(kb, query, cfg)
    except (_UsageError, EliminativeError) as exc:
        print(f"eliminative: {exc}", file=stderr)
        return 2

    trace = not args.no_trace
    render = render_structured if args.format == "structured" else render_text
    stdout.write(render(result, trace=trace))
    found = result.bindings if cfg.mode is Mode.GOAL else result.conjectures
    if not found:
        print("eliminative: nothing discovered", file=stderr)
        return 1
    return 0


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
