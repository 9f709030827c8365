"""Command-line front end.

Exit codes: 0 success, 1 empty constraint or language, 2 input error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import spectral
from .blocks import check_nonempty, classify_rigidity, iter_blocks
from .errors import AlphabetMismatch
from .problem import Problem, ProblemError, load_problem
from .spectral import NormKind
from .subshift import AllWords, ConstrainedWords, build_graph, export_dot, sample_sequence

EXIT_OK, EXIT_EMPTY, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

CSV_HEADER = "n,rho_hat_per_n,rho_hat_n,rho_n,best_lower,best_upper,gap"
VERIFY_HEADER = "n,rho_hat_per_n,rho_hat_n,rho_n_rowsum,rho_n_colsum,rho_n_spectral,best_lower,best_upper,gap"


@dataclass(frozen=True)
class RunConfig:
    n_max: int = 10
    norm: NormKind = NormKind.ROWSUM
    mode: str = "constrained"
    output: str | None = None
    raw: bool = False

    def __post_init__(self):
        if self.n_max < 1:
            raise ProblemError("--n-max must be >= 1")


def _fmt(v: float, raw: bool) -> str:
    return float(v).hex() if raw else f"{v:.12g}"


def _word(w) -> str:
    return ",".join(str(s) for s in w) if w else "-"


class _Output:
    """CSV goes to --output or stdout; the human summary to whichever is free."""

    def __init__(self, path):
        self.path = path
        self.lines: list[str] = []

    def row(self, *fields):
        self.lines.append(",".join(fields))

    def note(self, text: str):
        print(text, file=sys.stdout if self.path else sys.stderr)

    def flush(self):
        text = "\n".join(self.lines) + "\n"
        if self.path:
            with open(self.path, "w", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(problem: Problem, args) -> int:
    c = problem.constraint
    rep = check_nonempty(c)
    b = rep.bounds
    print(f"alphabet size {c.r}, block length {c.ell}")
    print("lower counts: " + " ".join(map(str, b.lo)))
    print("upper counts: " + " ".join(map(str, b.hi)))
    if rep.per_symbol_ok:
        print("per-symbol condition (lower count <= upper count): holds for all symbols")
    else:
        bad = ",".join(map(str, rep.failing_symbols))
        print(f"per-symbol condition (lower count <= upper count): fails at i={bad}")
    verdict = "holds" if rep.sum_ok else "fails"
    print(f"sum condition: {rep.sum_lo} <= {c.ell} <= {rep.sum_hi} {verdict}")
    rigidity = classify_rigidity(c)
    if rep.nonempty:
        print(f"verdict: nonempty, {rigidity.value}, {rep.sum_lo} <= {c.ell} <= {rep.sum_hi}")
        return EXIT_OK
    print("verdict: empty")
    return EXIT_EMPTY


def cmd_blocks(problem: Problem, args) -> int:
    total = 0
    for block in iter_blocks(problem.constraint):
        if args.limit is None or total < args.limit:
            print("".join(map(str, block)))
        total += 1
    print(f"total={total}")
    return EXIT_OK if total else EXIT_EMPTY


def cmd_graph(problem: Problem, args) -> int:
    if not check_nonempty(problem.constraint).nonempty:
        print("empty constraint: no admissible blocks", file=sys.stderr)
        return EXIT_EMPTY
    g = build_graph(problem.constraint)
    dot = export_dot(g)
    summary = f"nodes={len(g)} edges={g.n_edges}"
    if g.dead_ends:
        summary += f" dead_ends={len(g.dead_ends)}"
    if args.dot:
        with open(args.dot, "w", newline="\n") as fh:
            fh.write(dot)
        print(summary)
    else:
        sys.stdout.write(dot)
        print(summary, file=sys.stderr)
    return EXIT_OK


def _source(problem: Problem, cfg: RunConfig):
    if cfg.mode == "constrained":
        return ConstrainedWords(problem.constraint)
    if cfg.mode == "all":
        return AllWords(problem.constraint.r)
    if problem.omega is None:
        raise ProblemError("mode 'markov' needs an 'omega' field in the problem file")
    return problem.omega


def _language_empty(src) -> bool:
    aut = src.automaton
    return bool((aut.delta[aut.start] < 0).all())


def _need_matrices(problem: Problem):
    if problem.matrices is None:
        raise ProblemError("this command needs a 'matrices' field in the problem file")
    return problem.matrices


def cmd_radius(problem: Problem, cfg: RunConfig) -> int:
    ms = _need_matrices(problem)
    src = _source(problem, cfg)
    out = _Output(cfg.output)
    out.row(CSV_HEADER)
    if _language_empty(src):
        out.row("1", *[_fmt(0.0, cfg.raw)] * 6)
        out.flush()
        return EXIT_EMPTY
    br = spectral.bracket(ms, src, cfg.n_max, cfg.norm)
    for row in br.rows:
        vals = (row.lower_per, row.lower, row.upper, row.best_lower, row.best_upper, row.gap)
        out.row(str(row.n), *(_fmt(v, cfg.raw) for v in vals))
    summary = (
        max(r.lower_per for r in br.rows),
        max(r.lower for r in br.rows),
        min(r.upper for r in br.rows),
        br.best_lower,
        br.best_upper,
        br.gap,
    )
    out.row("best", *(_fmt(v, cfg.raw) for v in summary))
    out.flush()
    return EXIT_OK


def cmd_verify(problem: Problem, cfg: RunConfig, tol: float) -> int:
    ms = _need_matrices(problem)
    src = _source(problem, cfg)
    out = _Output(cfg.output)
    out.row(VERIFY_HEADER)
    if _language_empty(src):
        out.row("1", *[_fmt(0.0, cfg.raw)] * 8)
        out.flush()
        out.note("verdict: empty language")
        return EXIT_EMPTY
    rep = spectral.verify_berger_wang(ms, src, cfg.n_max)
    best_lo, best_up = 0.0, float("inf")
    for row in rep.rows:
        best_lo = max(best_lo, row.lower_per)
        best_up = min(best_up, row.best_norm_upper)
        ups = [row.upper[k] for k in NormKind]
        vals = (row.lower_per, row.lower, *ups, best_lo, best_up, best_up - best_lo)
        out.row(str(row.n), *(_fmt(v, cfg.raw) for v in vals))
    out.flush()
    out.note(f"bracket: [{rep.best_lower:.12g}, {rep.best_upper:.12g}] gap={rep.gap:.12g}")
    out.note(f"lower witness: {_word(rep.lower_witness)}")
    norm = rep.upper_norm.value if rep.upper_norm else "-"
    out.note(f"upper witness: {_word(rep.upper_witness)} ({norm})")
    if not rep.consistent:
        for v in rep.violations:
            out.note(f"violation: {v}")
        out.note("verdict: internal inconsistency")
        return EXIT_INTERNAL
    if rep.gap <= tol:
        out.note(f"verdict: gap {rep.gap:.3g} <= tol {tol:g}")
    else:
        out.note(f"verdict: gap {rep.gap:.3g} > tol {tol:g}, bound chain consistent at every n")
    return EXIT_OK


def cmd_sample(problem: Problem, args) -> int:
    if not check_nonempty(problem.constraint).nonempty:
        print("empty constraint: nothing to sample", file=sys.stderr)
        return EXIT_EMPTY
    w = sample_sequence(problem.constraint, args.length, args.seed)
    print(_word(w))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="slidefreq",
        description="Sliding-block frequency constraints and constrained joint spectral radius bounds.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="JSON problem file")
        return sp

    add("check", "integer bounds, non-emptiness and rigidity")
    sp = add("blocks", "list admissible blocks")
    sp.add_argument("--limit", type=int, default=None, help="print at most K blocks")
    sp = add("graph", "build the block transition graph")
    sp.add_argument("--dot", metavar="PATH", help="write DOT here (default: stdout)")

    for name, help_ in (("radius", "per-n radius bounds as CSV"), ("verify", "bracket check across all norms")):
        sp = add(name, help_)
        sp.add_argument("--n-max", type=int, default=10)
        sp.add_argument("--norm", choices=[k.value for k in NormKind], default="rowsum")
        sp.add_argument("--mode", choices=["constrained", "markov", "all"], default="constrained")
        sp.add_argument("--raw", action="store_true", help="hexadecimal floats")
        sp.add_argument("-o", "--output", metavar="PATH", help="write CSV here (default: stdout)")
        if name == "verify":
            sp.add_argument("--tol", type=float, default=0.05)

    sp = add("sample", "random admissible word")
    sp.add_argument("--length", type=int, default=31)
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        problem = load_problem(args.file)
        if args.command in ("radius", "verify"):
            cfg = RunConfig(
                n_max=args.n_max,
                norm=NormKind(args.norm),
                mode=args.mode,
                output=args.output,
                raw=args.raw,
            )
            if args.command == "radius":
                return cmd_radius(problem, cfg)
            return cmd_verify(problem, cfg, args.tol)
        if args.command == "sample" and args.length < 1:
            raise ProblemError("--length must be >= 1")
        handler = {"check": cmd_check, "blocks": cmd_blocks, "graph": cmd_graph, "sample": cmd_sample}
        return handler[args.command](problem, args)
    except (ProblemError, AlphabetMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
