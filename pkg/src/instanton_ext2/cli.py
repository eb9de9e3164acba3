"""Command-line front end: grid verification, formula tables, decompositions.

Exit codes: 0 all cells pass, 1 at least one verification failure, 2 usage or
configuration error.  JSON output is deterministic for a fixed config and
seed; per-cell timings live in the dedicated ``elapsed_ms`` field so reports
can be compared after dropping it.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import instanton_maps as im
from . import cohomology as coh
from . import rep

__all__ = ["RunConfig", "ConfigError", "ExpressionError", "main",
           "cmd_verify", "cmd_table", "cmd_decompose",
           "parse_space_expression"]

SCHEMA_VERSION = 1
JOBS_ENV_VAR = "INSTANTON_EXT2_JOBS"


class ConfigError(ValueError):
    """Invalid configuration; reported on stderr with exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Validated settings for one grid run."""
    n_range: tuple[int, int]
    k_range: tuple[int, int]
    alpha_source: str
    alpha: tuple[Fraction, ...] | None
    seed: int
    samples: int
    output_format: str
    jobs: int

    def __post_init__(self):
        n0, n1 = self.n_range
        k0, k1 = self.k_range
        if n0 > n1 or k0 > k1:
            raise ConfigError("empty parameter range")
        if n0 < 1:
            raise ConfigError("need n >= 1")
        if k0 < 2:
            raise ConfigError("need k >= 2")
        if self.samples < 1:
            raise ConfigError("need samples >= 1")
        if self.jobs < 1:
            raise ConfigError("need jobs >= 1")
        if self.output_format not in ("json", "csv", "text"):
            raise ConfigError(f"unknown format {self.output_format!r}")

    def cells(self) -> list[tuple[int, int]]:
        return [(n, k)
                for n in range(self.n_range[0], self.n_range[1] + 1)
                for k in range(self.k_range[0], self.k_range[1] + 1)]

    def as_dict(self) -> dict:
        return {
            "n_range": list(self.n_range),
            "k_range": list(self.k_range),
            "alpha_source": self.alpha_source,
            "alpha": None if self.alpha is None else [str(a) for a in self.alpha],
            "seed": self.seed,
            "samples": self.samples,
            "format": self.output_format,
            "jobs": self.jobs,
        }


# ----------------------------------------------------------------------
# argument parsing helpers

def _parse_range(text: str, what: str) -> tuple[int, int]:
    m = re.fullmatch(r"(-?\d+)(?:\.\.(-?\d+))?", text.strip())
    if not m:
        raise ConfigError(f"cannot parse {what} range {text!r}; use A or A..B")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    return lo, hi


_RATIONAL_RE = re.compile(r"[+-]?\d+(?:/[1-9]\d*)?")


def _parse_rational(tok: str) -> Fraction:
    if not _RATIONAL_RE.fullmatch(tok):
        raise ValueError(tok)
    return Fraction(tok)


def _parse_alpha_file(path: str) -> tuple[Fraction, ...]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read alpha file {path}: {exc}") from exc
    values = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if not _RATIONAL_RE.fullmatch(stripped):
            lead = len(line) - len(line.lstrip())
            m = _RATIONAL_RE.match(stripped)
            col = lead + (m.end() if m else 0) + 1
            raise ConfigError(
                f"{path}:{lineno}:{col}: invalid rational {stripped!r}")
        values.append(Fraction(stripped))
    return tuple(values)


def _resolve_alpha(text: str) -> tuple[str, tuple[Fraction, ...] | None]:
    if text == "random":
        return "random", None
    if text.startswith("@"):
        return f"file:{text[1:]}", _parse_alpha_file(text[1:])
    values = []
    for i, tok in enumerate(text.split(",")):
        tok = tok.strip()
        try:
            values.append(_parse_rational(tok))
        except ValueError:
            raise ConfigError(
                f"alpha entry {i + 1}: invalid rational {tok!r}") from None
    return "explicit", tuple(values)


def _default_jobs(n_cells: int) -> int:
    env = os.environ.get(JOBS_ENV_VAR)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"{JOBS_ENV_VAR} must be an integer, got {env!r}")
    return max(1, min(n_cells, os.cpu_count() or 1))


def _build_config(args) -> RunConfig:
    n_range = _parse_range(args.n, "n")
    k_range = _parse_range(args.k, "k")
    alpha_source, alpha = _resolve_alpha(args.alpha)
    n_cells = ((n_range[1] - n_range[0] + 1) * (k_range[1] - k_range[0] + 1))
    jobs = args.jobs if args.jobs is not None else _default_jobs(n_cells)
    config = RunConfig(
        n_range=n_range,
        k_range=k_range,
        alpha_source=alpha_source,
        alpha=alpha,
        seed=args.seed,
        samples=args.samples,
        output_format=args.format,
        jobs=jobs,
    )
    if alpha is not None:
        if n_cells != 1:
            raise ConfigError("an explicit alpha applies to a single (n, k) cell")
        n, k = config.cells()[0]
        want = 2 * n + 2 * k - 1
        if len(alpha) != want:
            raise ConfigError(
                f"alpha must have {want} coefficients for n={n}, k={k}, "
                f"got {len(alpha)}")
        if not any(alpha):
            raise ConfigError("alpha must be nonzero")
    return config


# ----------------------------------------------------------------------
# cell execution

def _cell_alpha(config_seed: int, n: int, k: int,
                explicit: tuple[Fraction, ...] | None) -> tuple[Fraction, ...]:
    if explicit is not None:
        return explicit
    rng = random.Random(f"{config_seed}/{n}/{k}")
    return tuple(Fraction(a) for a in im.random_alpha(n, k, rng))


def _run_cell(task) -> dict:
    n, k, alpha, seed, samples = task
    spec = im.MonadSpec(n, k, alpha)
    rpt = coh.full_verification(spec, seed=seed, samples=samples)
    return {
        "n": rpt.n,
        "k": rpt.k,
        "pass": rpt.passed,
        "ext2_formula": rpt.ext2_formula,
        "ext2_computed": rpt.ext2_computed,
        "ext1_formula": rpt.ext1_formula,
        "euler": rpt.euler_formula,
        "char_match": rpt.character_match,
        "cross_check": rpt.cross_construction_match,
        "monad": {
            "complex_zero": rpt.monad_complex_zero,
            "fiber_a_full": rpt.fiber_a_full,
            "fiber_b_full": rpt.fiber_b_full,
            "samples": rpt.samples,
        },
        "ranks": {
            "phi": rpt.phi_rank,
            "epsilon": rpt.epsilon_rank,
            "kernel_of_phi": rpt.phi_kernel_dim,
        },
        "elapsed_ms": rpt.elapsed_ms,
    }


def _run_grid(config: RunConfig) -> list[dict]:
    tasks = [(n, k, _cell_alpha(config.seed, n, k, config.alpha),
              config.seed, config.samples)
             for n, k in config.cells()]
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            cells = list(pool.map(_run_cell, tasks))
    else:
        cells = [_run_cell(t) for t in tasks]
    cells.sort(key=lambda c: (c["n"], c["k"]))
    return cells


# ----------------------------------------------------------------------
# output rendering

_VERIFY_CSV_COLUMNS = [
    "n", "k", "pass", "ext2_formula", "ext2_computed", "ext1_formula",
    "euler", "char_match", "cross_check", "monad.complex_zero",
    "monad.fiber_a_full", "monad.fiber_b_full", "monad.samples",
    "ranks.phi", "ranks.epsilon", "ranks.kernel_of_phi", "elapsed_ms",
]

_TABLE_COLUMNS = [
    "n", "k", "ext2_formula", "ext2_computed", "ext1_formula", "euler",
    "char_match", "phi_rank", "eps_rank", "elapsed_ms",
]


def _flatten(cell: dict) -> dict:
    flat = {}
    for key, val in cell.items():
        if isinstance(val, dict):
            for sub, v in val.items():
                flat[f"{key}.{sub}"] = v
        else:
            flat[key] = val
    return flat


def _csv_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _emit_csv(rows: list[dict], columns: list[str]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_csv_value(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def _emit_verify(config: RunConfig, cells: list[dict]) -> str:
    if config.output_format == "json":
        report = {"schema": SCHEMA_VERSION, "config": config.as_dict(),
                  "cells": cells}
        return json.dumps(report, indent=2) + "\n"
    if config.output_format == "csv":
        return _emit_csv([_flatten(c) for c in cells], _VERIFY_CSV_COLUMNS)
    lines = []
    for c in cells:
        status = "PASS" if c["pass"] else "FAIL"
        lines.append(
            f"n={c['n']} k={c['k']}: {status}"
            f"  ext2={c['ext2_computed']}/{c['ext2_formula']}"
            f"  ext1={c['ext1_formula']} euler={c['euler']}"
            f"  char={'ok' if c['char_match'] else 'MISMATCH'}"
            f"  cross={'ok' if c['cross_check'] else 'MISMATCH'}"
            f"  monad={'ok' if (c['monad']['complex_zero'] and c['monad']['fiber_a_full'] and c['monad']['fiber_b_full']) else 'FAIL'}"
            f"  ({c['elapsed_ms']} ms)")
    n_pass = sum(1 for c in cells if c["pass"])
    lines.append(f"{n_pass}/{len(cells)} cells passed")
    return "\n".join(lines) + "\n"


def _emit_table(config: RunConfig, cells: list[dict]) -> str:
    rows = [{
        "n": c["n"], "k": c["k"],
        "ext2_formula": c["ext2_formula"], "ext2_computed": c["ext2_computed"],
        "ext1_formula": c["ext1_formula"], "euler": c["euler"],
        "char_match": c["char_match"],
        "phi_rank": c["ranks"]["phi"], "eps_rank": c["ranks"]["epsilon"],
        "elapsed_ms": c["elapsed_ms"],
    } for c in cells]
    if config.output_format == "json":
        report = {"schema": SCHEMA_VERSION, "config": config.as_dict(),
                  "rows": rows}
        return json.dumps(report, indent=2) + "\n"
    if config.output_format == "csv":
        return _emit_csv(rows, _TABLE_COLUMNS)
    widths = {c: max(len(c), *(len(_csv_value(r[c])) for r in rows))
              for c in _TABLE_COLUMNS}
    lines = ["  ".join(c.rjust(widths[c]) for c in _TABLE_COLUMNS)]
    for r in rows:
        lines.append("  ".join(_csv_value(r[c]).rjust(widths[c])
                               for c in _TABLE_COLUMNS))
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# space-expression parser for `decompose`

class ExpressionError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"position {position}: {message}")
        self.position = position


class _ExprParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _expect(self, ch: str):
        self._skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            raise ExpressionError(f"expected {ch!r}", self.pos + 1)
        self.pos += 1

    def _int(self) -> int:
        self._skip_ws()
        m = re.compile(r"\d+").match(self.text, self.pos)
        if not m:
            raise ExpressionError("expected a nonnegative integer", self.pos + 1)
        self.pos = m.end()
        return int(m.group())

    def _name(self) -> str:
        self._skip_ws()
        m = re.compile(r"[A-Za-z][A-Za-z0-9]*").match(self.text, self.pos)
        if not m:
            raise ExpressionError("expected a space constructor", self.pos + 1)
        return m.group()

    def _atom(self):
        name = self._name()
        start = self.pos
        if name in ("S", "V"):
            self.pos += len(name)
            self._expect("(")
            m = self._int()
            self._expect(")")
            return rep.S(m) if name == "S" else rep.V(m)
        if name in ("Sym2", "Wedge2", "Lambda2"):
            self.pos += len(name)
            self._expect("(")
            inner = self._name()
            if inner != "V":
                raise ExpressionError(
                    f"{name} applies to V(m) only, got {inner!r}", self.pos + 1)
            self.pos += 1
            self._expect("(")
            m = self._int()
            self._expect(")")
            self._expect(")")
            return rep.Sym2V(m) if name == "Sym2" else rep.Wedge2V(m)
        raise ExpressionError(f"unknown constructor {name!r}", start + 1)

    def parse(self) -> rep.TensorSpace:
        factors = [self._atom()]
        while True:
            self._skip_ws()
            if self.pos >= len(self.text):
                break
            if self.text[self.pos] != "*":
                raise ExpressionError("expected '*' between factors", self.pos + 1)
            self.pos += 1
            factors.append(self._atom())
        return rep.build_space(factors)


def parse_space_expression(text: str) -> rep.TensorSpace:
    if not text.strip():
        raise ExpressionError("empty expression", 1)
    return _ExprParser(text).parse()


def _emit_decompose(expression: str, fmt: str) -> str:
    space = parse_space_expression(expression)
    parts = rep.decompose_character(rep.character(space))
    items = sorted(parts.items(), reverse=True)
    if fmt == "json":
        return json.dumps({
            "schema": SCHEMA_VERSION,
            "expression": expression,
            "irreducibles": [{"m": m, "multiplicity": mult} for m, mult in items],
            "dimension": space.dim,
        }, indent=2) + "\n"
    if fmt == "csv":
        lines = ["m,multiplicity"]
        lines += [f"{m},{mult}" for m, mult in items]
        return "\n".join(lines) + "\n"
    if items:
        terms = " + ".join(f"{mult}*S_{m}" if mult > 1 else f"S_{m}"
                           for m, mult in items)
    else:
        terms = "0"
    return f"{terms}\ndim = {space.dim}\n"


# ----------------------------------------------------------------------
# subcommands

def cmd_verify(args) -> int:
    config = _build_config(args)
    cells = _run_grid(config)
    sys.stdout.write(_emit_verify(config, cells))
    return 0 if all(c["pass"] for c in cells) else 1


def cmd_table(args) -> int:
    config = _build_config(args)
    cells = _run_grid(config)
    sys.stdout.write(_emit_table(config, cells))
    return 0 if all(c["pass"] for c in cells) else 1


def cmd_decompose(args) -> int:
    try:
        sys.stdout.write(_emit_decompose(args.expression, args.format))
    except ExpressionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except rep.CharacterDecompositionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def _add_grid_options(p: argparse.ArgumentParser):
    p.add_argument("--n", default="1..3", help="n or A..B range (default 1..3)")
    p.add_argument("--k", default="2..6", help="k or A..B range (default 2..6)")
    p.add_argument("--alpha", default="random",
                   help="comma-separated rationals, @file, or 'random'")
    p.add_argument("--seed", type=int, default=0, help="sampling seed")
    p.add_argument("--samples", type=int, default=100,
                   help="random fiber points per cell (default 100)")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--jobs", type=int, default=None,
                   help=f"parallel cells (default: {JOBS_ENV_VAR} or cell/core count)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="instanton-ext2",
        description="Exact monad and obstruction-space verification "
                    "for special symplectic instanton bundles.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run all checks per (n, k) cell")
    _add_grid_options(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_table = sub.add_parser("table", help="tabulate formula vs computed dimensions")
    _add_grid_options(p_table)
    p_table.set_defaults(func=cmd_table)

    p_dec = sub.add_parser("decompose",
                           help="decompose a tensor space into irreducibles")
    p_dec.add_argument("expression",
                       help="e.g. 'S(1)*S(1)' or 'S(0)*S(0)*Sym2(V(0))'")
    p_dec.add_argument("--format", choices=("json", "csv", "text"),
                       default="text")
    p_dec.set_defaults(func=cmd_decompose)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
