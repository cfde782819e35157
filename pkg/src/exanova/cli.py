"""Command-line front end.

Two subcommands: `anova` ingests a CSV of factor labels plus an exact
decimal response and reports sums of squares, F, p, and the tested
subspace; `verify` runs the exact verification suites.  Output is fully
deterministic: identical inputs and seeds give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .effects import CellLayout, ContrastScheme, EffectId
from .exactlin import RatMatrix, primitive_columns
from .hypotest import TestResult, type_model_set, type_ss
from . import verify as verify_mod

__all__ = ["Dataset", "RunConfig", "parse_dataset", "serialize_dataset", "main"]

EFFECT_LABELS = {"A": (1, 0), "B": (0, 1), "AB": (1, 1)}
MODEL_PRESETS = {
    "a-only": ("00", "10"),
    "additive": ("00", "10", "01"),
    "saturated": ("00", "10", "01", "11"),
}


class InputError(Exception):
    """Bad user input (file contents or flag combinations)."""


@dataclass(frozen=True)
class Dataset:
    """Parsed observations: per-factor level labels plus exact responses,
    in file order."""

    factor_names: tuple[str, ...]
    labels: tuple[tuple[str, ...], ...]
    response: tuple[Fraction, ...]

    @property
    def nfactors(self) -> int:
        return len(self.factor_names)

    def level_values(self) -> list[list[str]]:
        """Distinct labels per factor, numerically sorted when possible."""
        out = []
        for k in range(self.nfactors):
            seen = sorted({row[k] for row in self.labels})
            if all(_is_int(s) for s in seen):
                seen.sort(key=int)
            out.append(seen)
        return out

    def layout_and_response(self) -> tuple[CellLayout, list[Fraction]]:
        """Cell layout plus the response reordered cell-by-cell (stable
        within a cell, so replicate order follows file order)."""
        levels = self.level_values()
        index = [{lab: i for i, lab in enumerate(vals)} for vals in levels]
        dims = tuple(len(vals) for vals in levels)
        ncells = 1
        for d in dims:
            ncells *= d
        counts = [0] * ncells
        keyed = []
        for pos, (labs, y) in enumerate(zip(self.labels, self.response)):
            cell = 0
            for k, lab in enumerate(labs):
                cell = cell * dims[k] + index[k][lab]
            counts[cell] += 1
            keyed.append((cell, pos, y))
        keyed.sort(key=lambda t: (t[0], t[1]))
        layout = CellLayout(dims, tuple(counts))
        return layout, [y for _, _, y in keyed]


def _is_int(s: str) -> bool:
    try:
        int(s)
    except ValueError:
        return False
    return True


def parse_dataset(text: str) -> Dataset:
    """Parse a headered CSV with one `y` column; all other columns are
    factors, in file order.  Responses are parsed exactly ("1.25" becomes
    5/4); malformed rows are rejected with their line number."""
    import csv as _csv

    rows = list(_csv.reader(text.splitlines()))
    if not rows:
        raise InputError("empty input: need a header row")
    header = [h.strip() for h in rows[0]]
    if header.count("y") != 1:
        raise InputError("header must contain exactly one 'y' column")
    y_pos = header.index("y")
    factor_names = tuple(h for i, h in enumerate(header) if i != y_pos)
    if not factor_names:
        raise InputError("need at least one factor column besides 'y'")
    labels: list[tuple[str, ...]] = []
    response: list[Fraction] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise InputError(
                f"line {lineno}: expected {len(header)} fields, got {len(row)}"
            )
        labs = tuple(c.strip() for i, c in enumerate(row) if i != y_pos)
        if any(not lab for lab in labs):
            raise InputError(f"line {lineno}: empty factor label")
        try:
            y = Fraction(row[y_pos].strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(
                f"line {lineno}: cannot parse response {row[y_pos].strip()!r} exactly"
            ) from None
        labels.append(labs)
        response.append(y)
    if not labels:
        raise InputError("no observation rows")
    return Dataset(factor_names, tuple(labels), tuple(response))


def serialize_dataset(ds: Dataset) -> str:
    """Inverse of parse_dataset: responses rendered as exact fractions."""
    lines = [",".join(ds.factor_names + ("y",))]
    for labs, y in zip(ds.labels, ds.response):
        lines.append(",".join(labs + (str(y),)))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RunConfig:
    """Resolved anova options: which model, effect, SS types, contrasts."""

    model_set: frozenset[EffectId]
    model_label: str
    effect: EffectId
    effect_label: str
    types: tuple[int, ...]
    scheme: ContrastScheme
    output: str


def _parse_model(text: str) -> tuple[frozenset[EffectId], str]:
    if text in MODEL_PRESETS:
        return frozenset(EffectId.parse(s) for s in MODEL_PRESETS[text]), text
    if text.startswith("custom:"):
        bits = [b.strip() for b in text[len("custom:") :].split(",") if b.strip()]
        if not bits:
            raise InputError("custom model needs at least one effect, e.g. custom:00,10")
        effs = frozenset(EffectId.parse(b) for b in bits)
        if any(e.nfactors != 2 for e in effs):
            raise InputError("custom model effects must be two-factor bit strings")
        return effs, text
    raise InputError(
        f"unknown model {text!r}; use saturated, additive, a-only, or custom:00,10,..."
    )


def _parse_effect(text: str) -> tuple[EffectId, str]:
    if text in EFFECT_LABELS:
        return EffectId(EFFECT_LABELS[text]), text
    try:
        eff = EffectId.parse(text)
    except ValueError:
        raise InputError(f"unknown effect {text!r}; use A, B, AB, or bits like 10") from None
    if eff.nfactors != 2:
        raise InputError("anova effects are two-factor (A, B, AB)")
    label = next((k for k, v in EFFECT_LABELS.items() if v == eff.bits), str(eff))
    return eff, label


def _parse_contrasts(text: str) -> ContrastScheme:
    if text in ("paper", "helmert", "default"):
        return ContrastScheme.helmert()
    try:
        with open(text, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read contrast file {text!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"contrast file {text!r} is not valid JSON: {exc}") from None
    if not isinstance(data, list):
        raise InputError("contrast file must hold a JSON array of per-factor matrices")
    try:
        mats = [RatMatrix.from_rows(m) for m in data]
        return ContrastScheme.user(mats)
    except (ValueError, TypeError) as exc:
        raise InputError(f"invalid contrast matrices: {exc}") from None


def _frac_json(value: Fraction) -> dict:
    return {"num": value.numerator, "den": value.denominator, "float": float(value)}


def _entry_json(t: int, cfg: RunConfig, res: TestResult) -> dict:
    assert res.estimable_part is not None
    return {
        "effect": cfg.effect_label,
        "type": t,
        "ss": _frac_json(res.ss_num),
        "df": res.nu_num,
        "f": _frac_json(res.f_value) if res.f_value is not None else None,
        "p": res.p_value,
        "target_basis": primitive_columns(res.estimable_part.basis),
        "estimable_dim": res.estimable_part.dim,
    }


def _annotate_column(col: list[int], dims: tuple[int, int]) -> str | None:
    """Readable description when a target column is a row-mean or
    column-mean combination of the cell means."""
    a, b = dims
    grid = [col[i * b : (i + 1) * b] for i in range(a)]
    if all(len(set(row)) == 1 for row in grid):
        coeffs = [row[0] for row in grid]
        terms = _combo_terms(coeffs, "avg[A={i}]")
        if terms:
            return f"proportional to {terms}"
    cols = list(zip(*grid))
    if all(len(set(c)) == 1 for c in cols):
        coeffs = [c[0] for c in cols]
        terms = _combo_terms(coeffs, "avg[B={i}]")
        if terms:
            return f"proportional to {terms}"
    return None


def _combo_terms(coeffs: list[int], pattern: str) -> str:
    parts = []
    for i, c in enumerate(coeffs, start=1):
        if c == 0:
            continue
        name = pattern.format(i=i)
        mag = abs(c)
        term = name if mag == 1 else f"{mag}*{name}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(parts)


def _render_table(cfg: RunConfig, layout: CellLayout, entries: list[tuple[int, TestResult]],
                  skipped: list[tuple[int, str]]) -> str:
    a, b = layout.dims
    lines = []
    lines.append(f"layout: {a}x{b} cells, n={layout.n}")
    grid = layout.grid()
    lines.append("counts: " + " | ".join(" ".join(str(v) for v in row) for row in grid))
    effs = ",".join(str(e) for e in sorted(cfg.model_set, key=EffectId.sort_key))
    lines.append(f"model: {cfg.model_label} (effects {effs})")
    lines.append(f"effect: {cfg.effect_label}")
    if entries:
        den = entries[0][1]
        lines.append(f"denominator: saturated-model residual, SS = {den.ss_den}, df = {den.nu_den}")
    lines.append("")
    lines.append(f"{'type':<6}{'SS':<18}{'df':<4}{'F':<18}{'p':<12}{'target dim'}")
    for t, res in entries:
        fstr = str(res.f_value) if res.f_value is not None else "undefined"
        pstr = f"{res.p_value:.6g}" if res.p_value is not None else "undefined"
        dim = res.estimable_part.dim if res.estimable_part is not None else 0
        lines.append(f"{t:<6}{str(res.ss_num):<18}{res.nu_num:<4}{fstr:<18}{pstr:<12}{dim}")
    for t, reason in skipped:
        lines.append(f"{t:<6}skipped: {reason}")
    for t, res in entries:
        assert res.estimable_part is not None
        cols = primitive_columns(res.estimable_part.basis)
        lines.append("")
        lines.append(
            f"type {t} testing target in model '{cfg.model_label}' "
            f"({len(cols)} column(s), shown as {a}x{b} cell arrays):"
        )
        if not cols:
            lines.append("  (zero subspace)")
        for ci, col in enumerate(cols, start=1):
            note = _annotate_column(col, (a, b))
            suffix = f"  [{note}]" if note else ""
            lines.append(f"  column {ci}:{suffix}")
            width = max(len(str(v)) for v in col)
            for i in range(a):
                row = col[i * b : (i + 1) * b]
                lines.append("    " + " ".join(f"{v:>{width}}" for v in row))
    return "\n".join(lines) + "\n"


def cmd_anova(args: argparse.Namespace) -> int:
    try:
        with open(args.data, encoding="utf-8") as fh:
            ds = parse_dataset(fh.read())
    except OSError as exc:
        print(f"error: cannot read {args.data!r}: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if ds.nfactors != 2:
            raise InputError(
                f"anova needs exactly two factor columns, found {ds.nfactors}"
            )
        model_set, model_label = _parse_model(args.model)
        effect, effect_label = _parse_effect(args.effect)
        if effect not in model_set:
            raise InputError(f"effect {effect_label} is not in model {model_label}")
        scheme = _parse_contrasts(args.contrasts)
        types = (1, 2, 3) if args.type == "all" else (int(args.type),)
        layout, y = ds.layout_and_response()
        cfg = RunConfig(model_set, model_label, effect, effect_label, types, scheme, args.output)
        entries: list[tuple[int, TestResult]] = []
        skipped: list[tuple[int, str]] = []
        for t in types:
            if effect not in type_model_set(t, effect):
                reason = f"effect {effect_label} is not in the type-{t} model"
                if args.type == "all":
                    skipped.append((t, reason))
                    continue
                raise InputError(reason)
            entries.append(
                (t, type_ss(t, effect, layout, y, scheme, report_set=model_set))
            )
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.output == "json":
        doc = {
            "layout": {"dims": list(layout.dims), "counts": layout.grid(), "n": layout.n},
            "model": cfg.model_label,
            "effect": cfg.effect_label,
            "denominator": (
                {"ss": _frac_json(entries[0][1].ss_den), "df": entries[0][1].nu_den}
                if entries
                else None
            ),
            "tests": [_entry_json(t, cfg, res) for t, res in entries],
            "skipped": [{"type": t, "reason": r} for t, r in skipped],
        }
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write(_render_table(cfg, layout, entries, skipped))
    return 0


VERIFY_TARGETS = ("table1", "prop1", "prop2", "dominance", "prop3", "fdist", "all")


def _adhoc_dominance(path: str) -> list["verify_mod.Check"]:
    """Run the four dominance conclusions on user-supplied X, H, L matrices
    from a JSON file {"X": rows, "H": rows, "L": rows}."""
    from .dominance import check_dominance

    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read matrices file {path!r}: {exc}") from None
    missing = [k for k in ("X", "H", "L") if k not in data]
    if missing:
        raise InputError(f"matrices file must define X, H, L; missing {missing}")
    try:
        x = RatMatrix.from_rows(data["X"])
        h = RatMatrix.from_rows(data["H"])
        l = RatMatrix.from_rows(data["L"])
        rpt = check_dominance(x, h, l)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None
    return [
        verify_mod.Check("dominance: projected competitor recovers sp(H)", rpt.span_recovered),
        verify_mod.Check("dominance: competitor inside sp(H) + residual space", rpt.containment),
        verify_mod.Check("dominance: noncentrality difference nonnegative definite", rpt.nnd_holds),
        verify_mod.Check(
            "dominance: df sandwich",
            rpt.df_bounds_hold,
            f"nu_H={rpt.nu_h}, nu_PXL={rpt.nu_pxl}, nu_L={rpt.nu_l}, slack={rpt.df_slack}",
        ),
    ]


def cmd_verify(args: argparse.Namespace) -> int:
    target = args.target
    seed = args.seed if args.seed is not None else verify_mod.DEFAULT_SEED
    checks: list[verify_mod.Check] = []
    try:
        if args.matrices and target not in ("prop2", "dominance"):
            raise InputError("--matrices only applies to the dominance (prop2) target")
        if target in ("table1", "all"):
            checks.extend(verify_mod.verify_table1())
        if target in ("prop1", "all"):
            checks.extend(verify_mod.verify_prop1(seed=seed, trials=args.trials or 500))
        if target in ("prop2", "dominance") and args.matrices:
            checks.extend(_adhoc_dominance(args.matrices))
        elif target in ("prop2", "dominance", "all"):
            checks.extend(verify_mod.verify_prop2(seed=seed, trials=args.trials or 200))
        if target in ("prop3", "all"):
            dims_list = _prop3_dims(args)
            checks.extend(verify_mod.verify_prop3(dims_list=dims_list))
        if target in ("fdist", "all"):
            checks.extend(verify_mod.verify_fdist())
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for c in checks:
        sys.stdout.write(c.line() + "\n")
    failed = sum(not c.passed for c in checks)
    sys.stdout.write(f"{len(checks) - failed}/{len(checks)} checks passed\n")
    return 0 if failed == 0 else 1


def _prop3_dims(args: argparse.Namespace) -> tuple[tuple[int, ...], ...]:
    if args.dims:
        try:
            dims = tuple(int(d) for d in args.dims.split(","))
        except ValueError:
            raise InputError(f"cannot parse --dims {args.dims!r}; want e.g. 2,3,2") from None
        if any(d < 1 for d in dims):
            raise InputError("--dims entries must be positive")
        if args.factors is not None and args.factors != len(dims):
            raise InputError("--factors disagrees with the number of --dims entries")
        return (dims,)
    if args.factors is not None:
        filtered = tuple(
            d for d in verify_mod.PROP3_DEFAULT_DIMS if len(d) == args.factors
        )
        if not filtered:
            raise InputError(f"no default dims for --factors {args.factors}")
        return filtered
    return verify_mod.PROP3_DEFAULT_DIMS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exanova",
        description="Exact-arithmetic ANOVA sums of squares and their tested subspaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_anova = sub.add_parser(
        "anova",
        help="compute type 1/2/3 sums of squares for one effect of a two-factor CSV dataset",
    )
    p_anova.add_argument("--data", required=True, help="CSV file: factor columns plus a 'y' column")
    p_anova.add_argument(
        "--model",
        default="saturated",
        help="saturated | additive | a-only | custom:00,10,... (model the target is reported in)",
    )
    p_anova.add_argument("--effect", default="A", help="A | B | AB (or bits like 10)")
    p_anova.add_argument("--type", default="all", choices=["1", "2", "3", "all"], help="SS type")
    p_anova.add_argument(
        "--contrasts",
        default="paper",
        help="'paper' (default scheme) or a JSON file with one contrast matrix per factor",
    )
    p_anova.add_argument("--output", default="table", choices=["table", "json"])
    p_anova.set_defaults(func=cmd_anova)

    p_verify = sub.add_parser("verify", help="run the exact verification suites")
    p_verify.add_argument("target", choices=VERIFY_TARGETS)
    p_verify.add_argument("--seed", type=int, default=None, help="seed for the randomized suites")
    p_verify.add_argument("--trials", type=int, default=None, help="trial count override")
    p_verify.add_argument("--factors", type=int, default=None, help="restrict prop3 to one factor count")
    p_verify.add_argument("--dims", default=None, help="prop3 level counts, e.g. 2,3,2")
    p_verify.add_argument(
        "--matrices",
        default=None,
        help="dominance only: JSON file with X, H, L for an ad-hoc check",
    )
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
