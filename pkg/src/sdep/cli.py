"""``sdep`` command line.

Exit codes: 0 success, 1 validation failure, 2 parse or configuration error,
3 interpretation failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass

from . import bform, core, interp, scoping, terms, uform

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_INTERP = 0, 1, 2, 3

log = logging.getLogger("sdep")


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


@dataclass
class Config:
    lexicon_path: str | None = None
    rules_path: str | None = None
    format: str = "text"
    max_scopings: int = 1000
    strict_rules: bool = True
    trace: bool = False
    unicode: bool = False
    permute_det: bool = False

    def __post_init__(self):
        if self.max_scopings < 1:
            raise CliError("--max-scopings must be at least 1", EXIT_USAGE)
        if self.format not in ("text", "structured"):
            raise CliError(f"unknown format {self.format!r}", EXIT_USAGE)

    def lexicon(self):
        if self.lexicon_path is None:
            return interp.sample_lexicon()
        try:
            return interp.load_lexicon(self.lexicon_path)
        except (OSError, ValueError) as exc:
            raise CliError(f"cannot load lexicon: {exc}", EXIT_USAGE) from None

    def rules(self):
        if self.rules_path is None:
            return interp.builtin_rules()
        try:
            return interp.load_rules(self.rules_path)
        except (OSError, ValueError) as exc:
            raise CliError(f"cannot load rules: {exc}", EXIT_USAGE) from None


def _read(source):
    if source == "-":
        return sys.stdin.read()
    try:
        with open(source, encoding="utf-8") as f:
            return f.read()
    except OSError as exc:
        raise CliError(f"cannot read {source}: {exc}", EXIT_USAGE) from None


def read_input(text):
    """Parse any supported tree; returns ``(kind, value)`` with kind uform/sform/bform."""
    try:
        if bform.looks_like_bform(text):
            return "bform", bform.parse_ibf(text)
        kind = core.detect_kind(text)
        if kind == "sform":
            return kind, core.parse_sform(text)
        return kind, core.parse_uform(text)
    except core.ParseError as exc:
        raise CliError(f"parse error: {exc}", EXIT_USAGE) from None


def _path(p):
    return "/".join(map(str, p)) or "root"


class Output:
    def __init__(self, cfg: Config, out):
        self.cfg = cfg
        self.out = out

    def line(self, text=""):
        self.out.write(text + "\n")

    def record(self, obj):
        self.out.write(json.dumps(obj, ensure_ascii=not self.cfg.unicode) + "\n")

    def term(self, t, ty):
        u = self.cfg.unicode
        return f"{terms.pretty(t, u)} : {terms.format_type(ty, u)}"


# --- commands -------------------------------------------------------------

def cmd_validate(text, cfg, out: Output):
    kind, value = read_input(text)
    if kind == "uform":
        problems = [(_path(v.path), v.kind, v.detail) for v in uform.validate_uform(value)]
    elif kind == "sform":
        problems = [(_path(p), v.kind, v.detail) for p, v in bform.validate_sform(value)]
    else:
        problems = [(v.path or "root", v.kind, v.detail) for v in bform.check_ibf(value)]
        if not problems and value.fv:
            problems.append(("root", "not-closed",
                             f"free variables {', '.join(sorted(value.fv))} remain at the root"))
    if cfg.format == "structured":
        out.record({"kind": kind, "valid": not problems,
                    "violations": [{"path": p, "kind": k, "detail": d} for p, k, d in problems]})
    else:
        for p, k, d in problems:
            out.line(f"{k} at {p}: {d}")
        if not problems:
            out.line(f"valid {kind}")
    return EXIT_INVALID if problems else EXIT_OK


def _require_uform(text):
    kind, value = read_input(text)
    if kind != "uform":
        raise CliError(f"expected a U-form, got {kind}", EXIT_USAGE)
    return value


def _require_valid_uform(u):
    violations = uform.validate_uform(u)
    if violations:
        raise CliError("invalid U-form: " + "; ".join(map(str, violations)), EXIT_INVALID)


def cmd_predarg(text, cfg, out: Output):
    u = _require_uform(text)
    _require_valid_uform(u)
    rels = uform.extract_predarg(u)
    if cfg.format == "structured":
        out.record({"relations": [r.as_dict() for r in rels]})
    else:
        for r in rels:
            out.line(str(r))
    return EXIT_OK


def cmd_scopings(text, cfg, out: Output):
    u = _require_uform(text)
    _require_valid_uform(u)
    total = scoping.count_scopings(u, cfg.permute_det)
    for i, s in enumerate(scoping.enumerate_scopings(u, cfg.permute_det)):
        if i >= cfg.max_scopings:
            break
        if cfg.format == "structured":
            out.record({"index": i, "sform": core.print_sform(s)})
        else:
            out.line(core.print_sform(s))
    if total > cfg.max_scopings:
        print(f"sdep: {total} scopings, output truncated to {cfg.max_scopings}", file=sys.stderr)
    return EXIT_OK


def cmd_to_bform(text, cfg, out: Output):
    kind, value = read_input(text)
    if kind == "bform":
        raise CliError("input is already a B-form", EXIT_USAGE)
    if kind == "uform":
        raise CliError("expected an S-form; use `scopings` to order a U-form first", EXIT_USAGE)
    try:
        b = bform.encode(value)
    except bform.IBFError as exc:
        raise CliError(f"not a valid S-form: {exc}", EXIT_INVALID) from None
    if cfg.format == "structured":
        out.record({"bform": bform.print_bform(b)})
    else:
        out.line(bform.print_bform(b))
    return EXIT_OK


def cmd_to_sform(text, cfg, out: Output):
    kind, value = read_input(text)
    if kind != "bform":
        raise CliError(f"expected a B-form, got {kind}", EXIT_USAGE)
    try:
        b = bform.make_bform(value)
    except bform.IBFError as exc:
        raise CliError(f"not a valid B-form: {exc}", EXIT_INVALID) from None
    s = bform.decode(b)
    if cfg.format == "structured":
        out.record({"sform": core.print_sform(s)})
    else:
        out.line(core.print_sform(s))
    return EXIT_OK


def _emit_interpretation(it, cfg, out: Output, extra=None):
    if cfg.format == "structured":
        rec = {"term": terms.pretty(it.term, cfg.unicode), "type": terms.format_type(it.type)}
        if cfg.trace:
            rec["trace"] = [step.as_dict() for step in it.trace]
        rec.update(extra or {})
        out.record(rec)
        return
    if cfg.trace:
        for step in it.trace:
            out.line(step.format(cfg.unicode))
    out.line(out.term(it.term, it.type))


def cmd_interpret(text, cfg, out: Output):
    kind, value = read_input(text)
    lex, rules = cfg.lexicon(), cfg.rules()
    try:
        if kind == "uform":
            _require_valid_uform(value)
            report = interp.interpret_uform(value, lex, rules, strict=cfg.strict_rules,
                                            max_scopings=cfg.max_scopings,
                                            permute_det=cfg.permute_det)
            for reading in report.readings:
                witness = core.print_sform(reading.sform)
                if cfg.format == "structured":
                    _emit_interpretation(reading.interpretation, cfg, out, {"witness": witness})
                else:
                    _emit_interpretation(reading.interpretation, cfg, out)
                    out.line(f"  via {witness}")
            for s, err in report.failures:
                log.info("scoping %s failed: %s", core.print_sform(s), err)
            print(f"sdep: {report.scopings} scopings, {len(report.readings)} readings, "
                  f"{len(report.failures)} failed"
                  + (" (truncated)" if report.truncated else ""), file=sys.stderr)
            return EXIT_OK if report.readings else EXIT_INTERP
        if kind == "sform":
            try:
                b = bform.encode(value)
            except bform.IBFError as exc:
                raise CliError(f"not a valid S-form: {exc}", EXIT_INVALID) from None
        else:
            try:
                b = bform.make_bform(value)
            except bform.IBFError as exc:
                raise CliError(f"not a valid B-form: {exc}", EXIT_INVALID) from None
        if cfg.strict_rules:
            found = [interp.interpret(b, lex, rules, strict=True)]
        else:
            found = interp.dedup(interp.interpret_all(b, lex, rules))
        for it in found:
            _emit_interpretation(it, cfg, out)
    except (interp.InterpretationError, terms.TypeCheckError, terms.NormalizationError) as exc:
        raise CliError(f"interpretation failed: {exc}", EXIT_INTERP) from None
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "predarg": cmd_predarg,
    "scopings": cmd_scopings,
    "to-bform": cmd_to_bform,
    "to-sform": cmd_to_sform,
    "interpret": cmd_interpret,
}


def build_parser():
    p = argparse.ArgumentParser(prog="sdep", description="Scoped dependency forms toolkit.")
    p.add_argument("command", choices=list(COMMANDS))
    p.add_argument("file", nargs="?", default="-", help="input file, or - for stdin (default)")
    p.add_argument("--lexicon", metavar="PATH", help="lexicon file (default: bundled sample)")
    p.add_argument("--rules", metavar="PATH", help="composition rule file (default: built-in)")
    p.add_argument("--trace", action="store_true", help="print the derivation steps")
    p.add_argument("--all-derivations", action="store_true",
                   help="fork on every matching rule instead of rejecting ambiguity")
    p.add_argument("--max-scopings", type=int, default=1000, metavar="N")
    p.add_argument("--format", choices=["text", "structured"], default="text")
    p.add_argument("--unicode", action="store_true", help="print λ, ∧ and → instead of ASCII")
    p.add_argument("--permute-det", action="store_true",
                   help="also reorder det dependents when enumerating scopings")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None, stdout=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="sdep: %(message)s")
    out = Output(None, stdout or sys.stdout)
    try:
        cfg = Config(args.lexicon, args.rules, args.format, args.max_scopings,
                     not args.all_derivations, args.trace, args.unicode, args.permute_det)
        out.cfg = cfg
        return COMMANDS[args.command](_read(args.file), cfg, out)
    except CliError as exc:
        print(f"sdep: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
