"""Command-line interface.

One subcommand per library operation, deterministic output, and
sysexits-style error codes: usage problems exit 64, a failed check exits
1, an inconclusive check (budget or stabilization limits) exits 2.
Reports print as text by default or as canonical JSON with --format
json; --out writes the report to a file instead of stdout, and
--plot-dir additionally renders CSV tables and PNG figures.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from wordav import __version__, catalog
from wordav.formulas import (
    EMPTY_BOUNDS,
    SearchBudgetExceeded,
    VarBounds,
    WordSource,
    divides,
    find_occurrence,
    parse_formula_or_circular,
    reverse_formula,
)
from wordav.freeness import (
    FreenessSpec,
    count_free_words,
    enumerate_free_words,
    lemma_length_bound,
)
from wordav.verify import (
    DEFAULT_NODE_CAP,
    EXCLUSION_DERIVATIONS,
    OUTCOME_NODE_CAPPED,
    backtrack_avoidance,
    check_synchronization,
    exit_code,
    explore_conjecture,
    render_json,
    render_text,
    verify_conjugacy_avoidance,
    verify_formula_exclusion,
    verify_image_freeness,
    verify_paper,
)
from wordav.words import (
    CompletenessError,
    ImageFactors,
    Morphism,
    MorphicFactors,
    StabilizationError,
    Word,
    WordFactors,
    contained_conjugacy_classes,
    fixed_point_prefix,
    load_morphism,
)

EX_USAGE = 64
DEFAULT_ITERATION_CAP = 40


@dataclass(frozen=True)
class Config:
    """Run-wide knobs shared by the subcommand handlers."""

    node_cap: int = DEFAULT_NODE_CAP
    format: str = "text"
    out: Path | None = None
    symmetry: bool = True
    iteration_cap: int = DEFAULT_ITERATION_CAP

    def __post_init__(self) -> None:
        if self.format not in ("json", "text"):
            raise ValueError(f"format must be 'json' or 'text', got {self.format!r}")
        if self.node_cap < 1:
            raise ValueError("node cap must be positive")
        if self.iteration_cap < 1:
            raise ValueError("iteration cap must be positive")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with the usage code on bad input."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return value


def _config_from(args: argparse.Namespace) -> Config:
    return Config(
        node_cap=getattr(args, "node_cap", DEFAULT_NODE_CAP),
        format=getattr(args, "format", "text"),
        out=getattr(args, "out", None),
        symmetry=not getattr(args, "no_symmetry", False),
        iteration_cap=getattr(args, "iteration_cap", DEFAULT_ITERATION_CAP),
    )


def _emit(text: str, cfg: Config) -> None:
    if cfg.out is not None:
        cfg.out.write_text(text)
    else:
        sys.stdout.write(text)


def _emit_report(report, cfg: Config) -> None:
    _emit(render_json(report) if cfg.format == "json" else render_text(report), cfg)


def _note_written(paths) -> None:
    for path in paths:
        print(path, file=sys.stderr)


def _resolve_morphism(args: argparse.Namespace) -> tuple[str | None, Morphism]:
    """Catalog name or --morphism-file, exactly one of the two."""
    file_path = getattr(args, "morphism_file", None)
    name = getattr(args, "morphism", None)
    if file_path is not None:
        if name is not None:
            raise ValueError("give a morphism name or --morphism-file, not both")
        return None, load_morphism(Path(file_path).read_text())
    if name is None:
        raise ValueError("a morphism name or --morphism-file is required")
    return name, catalog.named_morphism(name)


def _base_family(cfg: Config) -> MorphicFactors:
    return MorphicFactors(
        catalog.named_morphism("b4"), seed=0, iteration_cap=cfg.iteration_cap
    )


def _resolve_family(source: str, seed: int, cfg: Config):
    """Digit string -> that word; morphism name -> its canonical family.

    A non-uniform catalog morphism stands for its own fixed point; a
    uniform one stands for its image of the b4 fixed point.
    """
    if source and all("0" <= ch <= "9" for ch in source):
        return WordFactors(Word.from_text(source))
    m = catalog.named_morphism(source)
    if m.uniform_width is None:
        return MorphicFactors(m, seed=seed, iteration_cap=cfg.iteration_cap)
    return ImageFactors(m, _base_family(cfg))


# ---------------------------------------------------------------- handlers


def _cmd_fixed_point(args, cfg: Config) -> int:
    _, m = _resolve_morphism(args)
    prefix = fixed_point_prefix(m, args.seed_letter, args.length)
    print(prefix[: args.length].to_text())
    return 0


def _cmd_apply(args, cfg: Config) -> int:
    # `apply --morphism-file F WORD` leaves the single positional in the
    # morphism slot; shift it over.
    if args.word is None and args.morphism is not None and args.morphism_file:
        args.word, args.morphism = args.morphism, None
    if args.word is None:
        raise ValueError("a word of digits is required")
    _, m = _resolve_morphism(args)
    w = Word.from_text(args.word, m.source_size)
    print(m(w).to_text())
    return 0


def _cmd_factors(args, cfg: Config) -> int:
    family = _resolve_family(args.source, args.seed_letter, cfg)
    fs = family.factor_set(args.length)
    members = fs.sorted_members()
    if cfg.format == "json":
        payload = {
            "source": args.source,
            "length": fs.length,
            "count": len(members),
            "complete": fs.complete,
            "factors": [w.to_text() for w in members],
        }
        _emit(render_json(payload), cfg)
    else:
        _emit("".join(f"{w.to_text()}\n" for w in members), cfg)
    return 0


def _cmd_classes(args, cfg: Config) -> int:
    family = _resolve_family(args.source, args.seed_letter, cfg)
    fs = family.factor_set(args.length)
    classes = contained_conjugacy_classes(fs)
    reps = [c.representative.to_text() for c in classes]
    if cfg.format == "json":
        payload = {
            "source": args.source,
            "length": args.length,
            "count": len(reps),
            "classes": reps,
        }
        _emit(render_json(payload), cfg)
    else:
        _emit("".join(f"{rep}\n" for rep in reps), cfg)
    return 0


def _cmd_free_enum(args, cfg: Config) -> int:
    spec = FreenessSpec.parse(args.spec)
    report = enumerate_free_words(
        args.alphabet,
        spec,
        args.max_len,
        symmetry=cfg.symmetry,
        node_cap=cfg.node_cap,
    )
    if cfg.format == "json":
        _emit(render_json(report), cfg)
    else:
        lines = [f"{n}\t{c}" for n, c in enumerate(report.counts)]
        _emit("".join(f"{line}\n" for line in lines), cfg)
    if args.plot_dir is not None:
        from wordav import plots

        _note_written(plots.write_enumeration_outputs(report, args.plot_dir, stem=args.command))
    return 2 if report.cap_hit else 0


def _cmd_free_count(args, cfg: Config) -> int:
    spec = FreenessSpec.parse(args.spec)
    print(count_free_words(args.alphabet, spec, args.length, symmetry=cfg.symmetry))
    return 0


def _cmd_bound(args, cfg: Config) -> int:
    print(lemma_length_bound(args.target, args.source))
    return 0


def _cmd_occurs(args, cfg: Config) -> int:
    formula = parse_formula_or_circular(args.formula)
    word = Word.from_text(args.word)
    bounds = VarBounds.parse(args.bounds) if args.bounds else EMPTY_BOUNDS
    assignment = find_occurrence(formula, WordSource(word), bounds, budget=cfg.node_cap)
    if cfg.format == "json":
        payload = {
            "formula": formula.to_text(),
            "word": args.word,
            "occurs": assignment is not None,
            "assignment": None if assignment is None else assignment.as_dict(),
        }
        _emit(render_json(payload), cfg)
    elif assignment is None:
        _emit(f"{formula.to_text()} does not occur in {args.word}\n", cfg)
    else:
        _emit(f"{formula.to_text()} occurs in {args.word}: {assignment.to_text()}\n", cfg)
    return 0


def _cmd_divides(args, cfg: Config) -> int:
    small = parse_formula_or_circular(args.small)
    big = parse_formula_or_circular(args.big)
    assignment = divides(small, big)
    if cfg.format == "json":
        payload = {
            "divisor": small.to_text(),
            "formula": big.to_text(),
            "divides": assignment is not None,
            "assignment": None
            if assignment is None
            else assignment.as_dict(variables_as_letters=True),
        }
        _emit(render_json(payload), cfg)
    elif assignment is None:
        _emit(f"{small.to_text()} does not divide {big.to_text()}\n", cfg)
    else:
        _emit(
            f"{small.to_text()} divides {big.to_text()}: "
            f"{assignment.to_text(variables_as_letters=True)}\n",
            cfg,
        )
    return 0


def _cmd_circular(args, cfg: Config) -> int:
    from wordav.formulas import circular_formula

    print(circular_formula(args.size).to_text())
    return 0


def _cmd_reverse(args, cfg: Config) -> int:
    print(reverse_formula(parse_formula_or_circular(args.formula)).to_text())
    return 0


def _finish_check(report, cfg: Config, args) -> int:
    _emit_report(report, cfg)
    if getattr(args, "plot_dir", None) is not None:
        from wordav import plots

        _note_written(plots.write_check_outputs(report, args.plot_dir, stem=args.command))
    return exit_code(report)


def _finish_backtrack(report, cfg: Config, args) -> int:
    _emit_report(report, cfg)
    if getattr(args, "plot_dir", None) is not None:
        from wordav import plots

        _note_written(plots.write_backtrack_outputs(report, args.plot_dir, stem=args.command))
    return 2 if report.outcome == OUTCOME_NODE_CAPPED else 0


def _cmd_check_sync(args, cfg: Config) -> int:
    name, m = _resolve_morphism(args)
    label = f"synchronization({name})" if name else None
    base = _base_family(cfg) if args.restrict_to_base else None
    return _finish_check(check_synchronization(m, base=base, name=label), cfg, args)


def _cmd_check_classes(args, cfg: Config) -> int:
    name, m = _resolve_morphism(args)
    label = f"conjugacy-classes({name})" if name else None
    report = verify_conjugacy_avoidance(m, args.min, base=_base_family(cfg), name=label)
    return _finish_check(report, cfg, args)


def _cmd_check_freeness(args, cfg: Config) -> int:
    name, m = _resolve_morphism(args)
    label = f"image-freeness({name})" if name else None
    report = verify_image_freeness(
        m,
        FreenessSpec.parse(args.source_spec),
        args.alphabet,
        FreenessSpec.parse(args.target_spec),
        max_len=args.max_len,
        node_cap=cfg.node_cap,
        name=label,
    )
    return _finish_check(report, cfg, args)


def _cmd_check_exclusion(args, cfg: Config) -> int:
    name, m = _resolve_morphism(args)
    formula = parse_formula_or_circular(args.formula)
    bounds = VarBounds.parse(args.bounds)
    if (args.source_spec is None) != (args.alphabet is None):
        raise ValueError("--source-spec and --alphabet go together")
    source_spec = FreenessSpec.parse(args.source_spec) if args.source_spec else None
    derivation = EXCLUSION_DERIVATIONS.get((name, args.formula.strip()))
    label = f"formula-exclusion({name},{args.formula.strip()})" if name else None
    report = verify_formula_exclusion(
        m,
        formula,
        bounds,
        source_spec,
        args.alphabet,
        base=None if source_spec else _base_family(cfg),
        derivation=derivation,
        budget=cfg.node_cap,
        name=label,
    )
    return _finish_check(report, cfg, args)


def _cmd_backtrack(args, cfg: Config) -> int:
    formula = parse_formula_or_circular(args.formula)
    report = backtrack_avoidance(
        formula,
        args.alphabet,
        args.cap,
        node_cap=cfg.node_cap,
        symmetry=cfg.symmetry,
    )
    return _finish_backtrack(report, cfg, args)


def _cmd_explore(args, cfg: Config) -> int:
    report = explore_conjecture(
        args.alphabet,
        args.min_class_len,
        args.cap,
        node_cap=cfg.node_cap,
        symmetry=cfg.symmetry,
    )
    return _finish_backtrack(report, cfg, args)


def _cmd_verify_paper(args, cfg: Config) -> int:
    overrides = None
    if args.override:
        overrides = {}
        for item in args.override:
            slot, sep, path = item.partition("=")
            if not sep or not slot or not path:
                raise ValueError(f"--override takes NAME=FILE, got {item!r}")
            overrides[slot] = load_morphism(Path(path).read_text())
    timings: dict | None = {} if args.timings else None
    report = verify_paper(
        node_cap=cfg.node_cap,
        backtrack_cap=args.backtrack_cap,
        probe_length=args.probe_length,
        overrides=overrides,
        timings_out=timings,
    )
    code = _finish_check(report, cfg, args)
    if timings is not None:
        for label, seconds in timings.items():
            print(f"{label}: {seconds:.2f}s", file=sys.stderr)
    return code


# ------------------------------------------------------------------ parser


def _add_output_flags(p: argparse.ArgumentParser, *, plot: bool = False) -> None:
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", type=Path, help="write output to this file instead of stdout")
    if plot:
        p.add_argument(
            "--plot-dir", type=Path, help="also write CSV tables and PNG figures here"
        )


def _add_morphism_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("morphism", nargs="?", help=f"one of: {', '.join(sorted(catalog.MORPHISMS))}")
    p.add_argument("--morphism-file", help="load the morphism from 'letter -> image' lines")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wordav", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fixed-point", help="prefix of the fixed point of a morphism")
    _add_morphism_args(p)
    p.add_argument("--length", type=_positive_int, required=True)
    p.add_argument("--seed-letter", type=_nonneg_int, default=0)
    p.set_defaults(handler=_cmd_fixed_point)

    p = sub.add_parser("apply", help="apply a morphism to a word of digits")
    _add_morphism_args(p)
    p.add_argument("word", nargs="?", help="word as decimal digits")
    p.set_defaults(handler=_cmd_apply)

    p = sub.add_parser("factors", help="factors of a given length of a word or family")
    p.add_argument("source", help="digit word, or morphism name for its canonical family")
    p.add_argument("--length", type=_nonneg_int, required=True)
    p.add_argument("--seed-letter", type=_nonneg_int, default=0)
    p.add_argument("--iteration-cap", type=_positive_int, default=DEFAULT_ITERATION_CAP)
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_factors)

    p = sub.add_parser("classes", help="conjugacy classes contained in a factor set")
    p.add_argument("source", help="digit word, or morphism name for its canonical family")
    p.add_argument("--length", type=_positive_int, required=True)
    p.add_argument("--seed-letter", type=_nonneg_int, default=0)
    p.add_argument("--iteration-cap", type=_positive_int, default=DEFAULT_ITERATION_CAP)
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_classes)

    p = sub.add_parser("free-enum", help="count repetition-free words by length")
    p.add_argument("alphabet", type=_positive_int)
    p.add_argument("spec", help="freeness spec such as 5/4+ or 97/75+,61")
    p.add_argument("max_len", type=_nonneg_int)
    p.add_argument("--node-cap", type=_positive_int, default=DEFAULT_NODE_CAP)
    p.add_argument("--no-symmetry", action="store_true")
    _add_output_flags(p, plot=True)
    p.set_defaults(handler=_cmd_free_enum)

    p = sub.add_parser("free-count", help="number of repetition-free words of one length")
    p.add_argument("alphabet", type=_positive_int)
    p.add_argument("spec")
    p.add_argument("length", type=_nonneg_int)
    p.add_argument("--no-symmetry", action="store_true")
    p.set_defaults(handler=_cmd_free_count)

    p = sub.add_parser("bound", help="certification length bound for two thresholds")
    p.add_argument("target", help="target threshold, e.g. 13/10")
    p.add_argument("source", help="source threshold, e.g. 5/4")
    p.set_defaults(handler=_cmd_bound)

    p = sub.add_parser("occurs", help="search one word for an occurrence of a formula")
    p.add_argument("word", help="word as decimal digits")
    p.add_argument("--formula", required=True)
    p.add_argument("--bounds", help="variable caps such as 'A<=3,B+C<=5,*<=4'")
    p.add_argument("--node-cap", type=_positive_int, default=DEFAULT_NODE_CAP)
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_occurs)

    p = sub.add_parser("divides", help="test divisibility of one formula by another")
    p.add_argument("small", help="candidate divisor formula")
    p.add_argument("big", help="formula to divide")
    _add_output_flags(p)
    p.set_defaults(handler=_cmd_divides)

    p = sub.add_parser("circular", help="print the circular formula on t variables")
    p.add_argument("size", type=_positive_int, metavar="t")
    p.set_defaults(handler=_cmd_circular)

    p = sub.add_parser("reverse", help="print the mirror image of a formula")
    p.add_argument("formula")
    p.set_defaults(handler=_cmd_reverse)

    p = sub.add_parser("check-sync", help="check that a uniform morphism is synchronizing")
    _add_morphism_args(p)
    p.add_argument(
        "--restrict-to-base",
        action="store_true",
        help="only check letter pairs that occur in the b4 fixed point",
    )
    p.add_argument("--iteration-cap", type=_positive_int, default=DEFAULT_ITERATION_CAP)
    _add_output_flags(p, plot=True)
    p.set_defaults(handler=_cmd_check_sync)

    p = sub.add_parser(
        "check-classes", help="check that image factors contain no short conjugacy class"
    )
    _add_morphism_args(p)
    p.add_argument("--min", type=_positive_int, required=True, help="smallest class length")
    p.add_argument("--iteration-cap", type=_positive_int, default=DEFAULT_ITERATION_CAP)
    _add_output_flags(p, plot=True)
    p.set_defaults(handler=_cmd_check_classes)

    p = sub.add_parser(
        "check-freeness", help="check freeness of images of all short free words"
    )
    _add_morphism_args(p)
    p.add_argument("--source-spec", required=True)
    p.add_argument("--alphabet", type=_positive_int, required=True)
    p.add_argument("--target-spec", required=True)
    p.add_argument("--max-len", type=_positive_int)
    p.add_argument("--node-cap", type=_positive_int, default=DEFAULT_NODE_CAP)
    _add_output_flags(p, plot=True)
    p.set_defaults(handler=_cmd_check_freeness)

    p = sub.add_parser(
        "check-exclusion", help="check that a formula has no bounded occurrence in images"
    )
    _add_morphism_args(p)
    p.add_argument("--formula", required=True)
    p.add_argument("--bounds", required=True, help="variable caps such as 'A+B<=60,B+C<=60'")
    p.add_argument("--source-spec", help="search images of words free for this spec")
    p.add_argument("--alphabet", type=_positive_int, help="source alphabet size")
    p.add_argument("--node-cap", type=_positive_int, default=DEFAULT_NODE_CAP)
    p.add_argument("--iteration-cap", type=_positive_int, default=DEFAULT_ITERATION_CAP)
    _add_output_flags(p, plot=True)
    p.set_defaults(handler=_cmd_check_exclusion)

    p = sub.add_parser("backtrack", help="longest word avoiding a formula, by backtracking")
    p.add_argument("--formula", required=True)
    p.add_argument("--alphabet", type=_positive_int, required=True)
    p.add_argument("--cap", type=_positive_int, default=100, help="stop at this length")
    p.add_argument("--node-cap", type=_positive_int, default=DEFAULT_NODE_CAP)
    p.add_argument("--no-symmetry", action="store_true")
    _add_output_flags(p, plot=True)
    p.set_defaults(handler=_cmd_backtrack)

    p = sub.add_parser(
        "explore", help="longest word containing no full conjugacy class, by backtracking"
    )
    p.add_argument("alphabet", type=_positive_int)
    p.add_argument("--min-class-len", type=_positive_int, default=2)
    p.add_argument("--cap", type=_positive_int, default=200, help="stop at this length")
    p.add_argument("--node-cap", type=_positive_int, default=DEFAULT_NODE_CAP)
    p.add_argument("--no-symmetry", action="store_true")
    _add_output_flags(p, plot=True)
    p.set_defaults(handler=_cmd_explore)

    p = sub.add_parser("verify-paper", help="run the full built-in verification suite")
    p.add_argument("--node-cap", type=_positive_int, default=DEFAULT_NODE_CAP)
    p.add_argument("--backtrack-cap", type=_positive_int, default=100)
    p.add_argument("--probe-length", type=_positive_int, default=512)
    p.add_argument(
        "--override",
        action="append",
        metavar="NAME=FILE",
        help="replace a built-in morphism for this run (mutation control)",
    )
    p.add_argument("--timings", action="store_true", help="print per-check timings to stderr")
    _add_output_flags(p, plot=True)
    p.set_defaults(handler=_cmd_verify_paper)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EX_USAGE
    try:
        cfg = _config_from(args)
        return args.handler(args, cfg)
    except SearchBudgetExceeded as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 2
    except (CompletenessError, StabilizationError) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EX_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE


if __name__ == "__main__":
    sys.exit(main())
