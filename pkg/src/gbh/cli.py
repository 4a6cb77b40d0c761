"""Command-line toolkit.

Three subcommands:

- ``gbh simulate --config cfg.json --out results.csv`` runs seeded
  Monte-Carlo sweeps and writes one CSV row per (parameter point,
  procedure).
- ``gbh analyze --in table.csv --proc NAME --alpha A --lambda L --out out.csv``
  applies a procedure to a real classified p-value table, inferring the
  layout from the row/column labels.
- ``gbh report --in results.csv --out pivot.csv`` pivots a simulate CSV
  into one row per sweep value with (fdr, power) column pairs per
  procedure.

Exit codes: 0 success, 2 validation failure, 3 I/O failure,
4 procedure/layout incompatibility.  The environment variable
``GBH_SEED`` overrides the config seed for ``simulate``.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import os
import sys

from .core import (
    OneWayLayout,
    PValueSet,
    TwoWayCellsLayout,
    TwoWayOnePerCellLayout,
)
from .errors import GbhError, UnequalCells, VariantMismatch
from .simgen import OneWaySimConfig, TwoWaySimConfig, run_replications
from .stepup import StepUpConfig, weighted_bh, weighted_pvalues
from .weights_adaptive import (
    AdaptiveGBH,
    AdaptiveVariant,
    LslGBH,
    NaiveAdaptiveBH,
    OracleGBH,
    PlainBH,
    TstGBH,
    procedure_weights,
)
from .weights_oracle import OracleVariant

SIMULATE_COLUMNS = [
    "procedure", "m", "n", "p",
    "pi_r", "pi_c", "pi_rc", "pi_dot", "pi",
    "rho_r", "rho_c", "rho_p",
    "lambda", "alpha", "reps", "seed",
    "fdr_hat", "se_fdr", "power_hat", "se_power",
]

ANALYZE_COLUMNS = [
    "row_id", "col_id", "member_id", "p_value", "weight", "weighted_p", "rejected",
]

_SWEEPABLE = ("pi_dot", "pi", "pi_r", "pi_c", "pi_rc", "lambda")


class CliError(Exception):
    """Carries the exit code alongside the message."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _fmt_param(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".12g")


def _fmt_estimate(value) -> str:
    return format(float(value), ".6g")


# --- simulate ----------------------------------------------------------------

_MODE_KEYS = {
    "oneway": {"mode", "m", "n", "mu", "rho", "pi", "pi_dot",
               "procedures", "alpha", "lambda", "reps", "seed", "out"},
    "twoway": {"mode", "m", "n", "mu", "rho_r", "rho_c", "pi_r", "pi_c",
               "pi_rc", "procedures", "alpha", "lambda", "reps", "seed", "out"},
    "twoway_cells": {"mode", "m", "n", "p", "mu", "rho_r", "rho_c", "rho_p",
                     "pi_r", "pi_c", "pi_rc", "procedures", "alpha", "lambda",
                     "reps", "seed", "out"},
}

_MODE_SWEEP_FIELDS = {
    "oneway": ("pi_dot", "pi", "lambda"),
    "twoway": ("pi_r", "pi_c", "pi_rc", "lambda"),
    "twoway_cells": ("pi_r", "pi_c", "pi_rc", "lambda"),
}


def _field_error(field: str, message: str) -> CliError:
    return CliError(2, f"config field '{field}': {message}")


def _as_int(doc, field, minimum=None, default=None):
    if field not in doc:
        if default is None:
            raise _field_error(field, "required")
        return default
    value = doc[field]
    if isinstance(value, bool) or not isinstance(value, int):
        raise _field_error(field, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise _field_error(field, f"must be >= {minimum}, got {value}")
    return value


def _as_number(value, field):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _field_error(field, f"expected a number, got {value!r}")
    return float(value)


def _check_range(field, value, lo, hi, lo_open=False, hi_open=False):
    if (value < lo or value > hi
            or (lo_open and value == lo) or (hi_open and value == hi)):
        lo_b = "(" if lo_open else "["
        hi_b = ")" if hi_open else "]"
        raise _field_error(field, f"must lie in {lo_b}{lo}, {hi}{hi_b}, got {value}")


def _sweep_list(doc, field, lo, hi, lo_open=False, hi_open=False, default=None):
    """Normalise a scalar-or-list config field to a list of floats."""
    if field not in doc:
        if default is None:
            raise _field_error(field, "required")
        return [default]
    raw = doc[field]
    values = raw if isinstance(raw, list) else [raw]
    if not values:
        raise _field_error(field, "list must not be empty")
    out = []
    for v in values:
        v = _as_number(v, field)
        _check_range(field, v, lo, hi, lo_open, hi_open)
        out.append(v)
    return out


_ORACLE_VARIANTS_BY_MODE = {
    "oneway": {OracleVariant.ONE_WAY},
    "twoway": {OracleVariant.TWO_WAY_EQUAL_SPLIT, OracleVariant.TWO_WAY_SIZE_ADJUSTED},
    "twoway_cells": {
        OracleVariant.CELLS_FOUR_TERM, OracleVariant.CELLS_TWO_TERM,
        OracleVariant.EQUAL_CELLS_TWO_TERM, OracleVariant.EQUAL_CELLS_FOUR_TERM,
    },
}
_ADAPTIVE_VARIANTS_BY_MODE = {
    "oneway": {AdaptiveVariant.ONE_WAY},
    "twoway": {AdaptiveVariant.TWO_WAY_EQUAL_SPLIT, AdaptiveVariant.TWO_WAY_SIZE_ADJUSTED},
    "twoway_cells": {
        AdaptiveVariant.CELLS_FOUR_TERM, AdaptiveVariant.CELLS_TWO_TERM,
        AdaptiveVariant.EQUAL_CELLS_FOUR_TERM, AdaptiveVariant.EQUAL_CELLS_TWO_TERM,
    },
}
_DEFAULT_ORACLE_VARIANT = {
    "oneway": OracleVariant.ONE_WAY,
    "twoway": OracleVariant.TWO_WAY_EQUAL_SPLIT,
    "twoway_cells": OracleVariant.CELLS_FOUR_TERM,
}
_DEFAULT_ADAPTIVE_VARIANT = {
    "oneway": AdaptiveVariant.ONE_WAY,
    "twoway": AdaptiveVariant.TWO_WAY_EQUAL_SPLIT,
    "twoway_cells": AdaptiveVariant.CELLS_FOUR_TERM,
}


def _procedure_factory(token: str, mode: str):
    """Map a procedure token to a builder ``lam -> ProcedureSpec``."""
    name, _, variant_name = token.partition(":")
    if name == "plain_bh":
        if variant_name:
            raise _field_error("procedures", f"'{token}': plain_bh takes no variant")
        return lambda lam: PlainBH()
    if name == "naive_adaptive_bh":
        if variant_name:
            raise _field_error("procedures", f"'{token}': takes no variant")
        return lambda lam: NaiveAdaptiveBH(lam)
    if name in ("lsl_gbh", "tst_gbh"):
        if variant_name:
            raise _field_error("procedures", f"'{token}': takes no variant")
        if mode != "oneway":
            raise _field_error(
                "procedures", f"'{token}' applies to one-way layouts only"
            )
        return (lambda lam: LslGBH()) if name == "lsl_gbh" else (lambda lam: TstGBH())
    if name == "oracle_gbh":
        if not variant_name:
            variant = _DEFAULT_ORACLE_VARIANT[mode]
        else:
            try:
                variant = OracleVariant(variant_name)
            except ValueError:
                raise _field_error("procedures", f"unknown oracle variant '{variant_name}'")
        if variant not in _ORACLE_VARIANTS_BY_MODE[mode]:
            raise _field_error(
                "procedures", f"variant '{variant.value}' incompatible with mode '{mode}'"
            )
        return lambda lam: OracleGBH(variant)
    if name == "adaptive_gbh":
        if not variant_name:
            variant = _DEFAULT_ADAPTIVE_VARIANT[mode]
        else:
            try:
                variant = AdaptiveVariant(variant_name)
            except ValueError:
                raise _field_error("procedures", f"unknown adaptive variant '{variant_name}'")
        if variant not in _ADAPTIVE_VARIANTS_BY_MODE[mode]:
            raise _field_error(
                "procedures", f"variant '{variant.value}' incompatible with mode '{mode}'"
            )
        return lambda lam: AdaptiveGBH(variant, lam)
    raise _field_error("procedures", f"unknown procedure '{token}'")


def _validate_simulate_config(doc: dict) -> dict:
    if not isinstance(doc, dict):
        raise CliError(2, "config must be a JSON object")
    mode = doc.get("mode")
    if mode not in _MODE_KEYS:
        raise _field_error("mode", f"must be one of {sorted(_MODE_KEYS)}, got {mode!r}")
    unknown = set(doc) - _MODE_KEYS[mode]
    if unknown:
        raise _field_error(sorted(unknown)[0], "unknown key")

    cfg = {"mode": mode}
    cfg["m"] = _as_int(doc, "m", minimum=1)
    cfg["n"] = _as_int(doc, "n", minimum=1)
    cfg["reps"] = _as_int(doc, "reps", minimum=1, default=200)
    cfg["seed"] = _as_int(doc, "seed")
    cfg["mu"] = _as_number(doc.get("mu", 3.0), "mu")
    alpha = _as_number(doc.get("alpha", 0.05), "alpha")
    _check_range("alpha", alpha, 0.0, 1.0, lo_open=True, hi_open=True)
    cfg["alpha"] = alpha
    cfg["lambda"] = _sweep_list(doc, "lambda", 0.0, 1.0, True, True, default=0.5)
    if mode == "oneway":
        rho = _as_number(doc.get("rho", 0.0), "rho")
        _check_range("rho", rho, 0.0, 1.0, hi_open=True)
        cfg["rho"] = rho
        cfg["pi"] = _sweep_list(doc, "pi", 0.0, 1.0)
        cfg["pi_dot"] = _sweep_list(doc, "pi_dot", 0.0, 1.0, default=0.0)
    else:
        for field in ("rho_r", "rho_c", "rho_p"):
            if mode == "twoway" and field == "rho_p":
                continue
            rho = _as_number(doc.get(field, 0.0), field)
            _check_range(field, rho, 0.0, 1.0, hi_open=True)
            cfg[field] = rho
        cfg["pi_r"] = _sweep_list(doc, "pi_r", 0.0, 1.0, default=0.0)
        cfg["pi_c"] = _sweep_list(doc, "pi_c", 0.0, 1.0, default=0.0)
        cfg["pi_rc"] = _sweep_list(doc, "pi_rc", 0.0, 1.0)
        if mode == "twoway_cells":
            cfg["p"] = _as_int(doc, "p", minimum=2)

    procedures = doc.get("procedures")
    if not isinstance(procedures, list) or not procedures:
        raise _field_error("procedures", "must be a non-empty list")
    factories = []
    for token in procedures:
        if not isinstance(token, str):
            raise _field_error("procedures", f"expected strings, got {token!r}")
        factories.append((token, _procedure_factory(token, mode)))
    cfg["procedures"] = factories
    cfg["out"] = doc.get("out")
    if cfg["out"] is not None and not isinstance(cfg["out"], str):
        raise _field_error("out", "must be a string path")
    return cfg


def _sim_rows(cfg: dict):
    """Yield one simulate-CSV row per (parameter point, procedure)."""
    mode = cfg["mode"]
    sweep_fields = _MODE_SWEEP_FIELDS[mode]
    grids = [cfg[f] for f in sweep_fields]
    for point_index, combo in enumerate(itertools.product(*grids)):
        point = dict(zip(sweep_fields, combo))
        lam = point["lambda"]
        if mode == "oneway":
            sim_cfg = OneWaySimConfig(
                m=cfg["m"], n=cfg["n"], pi_dot=point["pi_dot"], pi=point["pi"],
                mu=cfg["mu"], rho=cfg["rho"],
            )
        else:
            sim_cfg = TwoWaySimConfig(
                m=cfg["m"], n=cfg["n"], p=cfg.get("p", 1),
                pi_r=point["pi_r"], pi_c=point["pi_c"], pi_rc=point["pi_rc"],
                mu=cfg["mu"], rho_r=cfg["rho_r"], rho_c=cfg["rho_c"],
                rho_p=cfg.get("rho_p", 0.0),
            )
        for token, factory in cfg["procedures"]:
            summary = run_replications(
                factory(lam), sim_cfg, cfg["reps"], cfg["alpha"],
                seed=(cfg["seed"], point_index),
            )
            row = {
                "procedure": token,
                "m": cfg["m"], "n": cfg["n"],
                "p": cfg.get("p", 1 if mode != "oneway" else None),
                "pi_r": point.get("pi_r"), "pi_c": point.get("pi_c"),
                "pi_rc": point.get("pi_rc"),
                "pi_dot": point.get("pi_dot"), "pi": point.get("pi"),
                # the one-way model has a single correlation; it is
                # reported in the rho_r column
                "rho_r": cfg.get("rho_r", cfg.get("rho")),
                "rho_c": cfg.get("rho_c"),
                "rho_p": cfg.get("rho_p"),
                "lambda": lam, "alpha": cfg["alpha"],
                "reps": cfg["reps"], "seed": cfg["seed"],
            }
            yield {
                **{k: _fmt_param(v) for k, v in row.items()},
                "fdr_hat": _fmt_estimate(summary.fdr_hat),
                "se_fdr": _fmt_estimate(summary.se_fdr),
                "power_hat": _fmt_estimate(summary.power_hat),
                "se_power": _fmt_estimate(summary.se_power),
            }


def cmd_simulate(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(3, f"cannot read config: {exc}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(2, f"config is not valid JSON: {exc}")
    cfg = _validate_simulate_config(doc)
    env_seed = os.environ.get("GBH_SEED")
    if env_seed is not None:
        try:
            cfg["seed"] = int(env_seed)
        except ValueError:
            raise _field_error("seed", f"GBH_SEED is not an integer: {env_seed!r}")
    out_path = args.out or cfg["out"]
    if not out_path:
        raise _field_error("out", "required (or pass --out)")
    try:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, SIMULATE_COLUMNS, lineterminator="\n")
            writer.writeheader()
            for row in _sim_rows(cfg):
                writer.writerow(row)
    except OSError as exc:
        raise CliError(3, f"cannot write output: {exc}")
    return 0


# --- analyze -----------------------------------------------------------------


def _read_pvalue_table(path: str, one_way: bool):
    """Parse the input table; returns (records, fieldnames).

    Each record is (row_id, col_id, member_id, p_value, original_line_no).
    """
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise CliError(3, f"cannot read input: {exc}")
    with fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames
        if fields is None:
            raise CliError(2, "input file is empty")
        allowed = {"row_id", "col_id", "member_id", "p_value"}
        unknown = set(fields) - allowed
        if unknown:
            raise CliError(2, f"unknown column(s): {sorted(unknown)}")
        if "row_id" not in fields or "p_value" not in fields:
            raise CliError(2, "input needs at least columns row_id,p_value")
        if not one_way and "col_id" not in fields:
            raise CliError(2, "two-way analysis needs a col_id column (or pass --one-way)")
        records = []
        for line_no, rec in enumerate(reader, start=2):
            if None in rec or None in rec.values():
                raise CliError(2, f"line {line_no}: wrong number of fields")
            raw_p = (rec.get("p_value") or "").strip()
            try:
                p = float(raw_p)
            except ValueError:
                raise CliError(2, f"line {line_no}: p_value {raw_p!r} is not a number")
            if not (0.0 <= p <= 1.0):
                raise CliError(2, f"line {line_no}: p_value {p} outside [0, 1]")
            records.append((
                rec["row_id"],
                rec.get("col_id") or "",
                rec.get("member_id") or "",
                p,
                line_no,
            ))
        if not records:
            raise CliError(2, "input contains a header but no data rows")
    return records


def _infer_layout(records, one_way: bool):
    """Build the layout plus the canonical position of every record."""
    if one_way:
        row_order, row_index = [], {}
        members = {}
        for row_id, _c, _m, _p, _ln in records:
            if row_id not in row_index:
                row_index[row_id] = len(row_order)
                row_order.append(row_id)
                members[row_id] = 0
            members[row_id] += 1
        sizes = tuple(members[r] for r in row_order)
        layout = OneWayLayout(sizes)
        offsets = layout.offsets()
        seen = {r: 0 for r in row_order}
        positions = []
        for row_id, _c, _m, _p, _ln in records:
            g = row_index[row_id]
            positions.append(int(offsets[g]) + seen[row_id])
            seen[row_id] += 1
        summary = f"layout=oneway groups={len(row_order)}"
        return layout, positions, summary

    row_order, row_index = [], {}
    col_order, col_index = [], {}
    counts = {}
    for row_id, col_id, _m, _p, _ln in records:
        if row_id not in row_index:
            row_index[row_id] = len(row_order)
            row_order.append(row_id)
        if col_id not in col_index:
            col_index[col_id] = len(col_order)
            col_order.append(col_id)
        key = (row_index[row_id], col_index[col_id])
        counts[key] = counts.get(key, 0) + 1
    m, n = len(row_order), len(col_order)
    missing = [(g, h) for g in range(m) for h in range(n) if (g, h) not in counts]
    if missing:
        g, h = missing[0]
        raise CliError(
            2,
            f"incomplete grid: no entry for row_id={row_order[g]!r} "
            f"col_id={col_order[h]!r} (and {len(missing) - 1} more)",
        )
    if all(c == 1 for c in counts.values()):
        layout = TwoWayOnePerCellLayout(m, n)
        positions = [
            layout.flat_index(row_index[r], col_index[c])
            for r, c, _m2, _p, _ln in records
        ]
        summary = f"layout=twoway_oneper m={m} n={n}"
        return layout, positions, summary
    sizes = tuple(tuple(counts[(g, h)] for h in range(n)) for g in range(m))
    layout = TwoWayCellsLayout(m, n, sizes)
    offsets = layout.cell_offsets()
    seen = {key: 0 for key in counts}
    positions = []
    for row_id, col_id, _m2, _p, _ln in records:
        key = (row_index[row_id], col_index[col_id])
        positions.append(int(offsets[key[0] * n + key[1]]) + seen[key])
        seen[key] += 1
    summary = f"layout=twoway_cells m={m} n={n}"
    return layout, positions, summary


def _analyze_procedure(name, variant_name, layout, lam):
    if name != "adaptive_gbh" and variant_name:
        raise CliError(2, f"--variant applies to adaptive_gbh, not {name}")
    if name == "plain_bh":
        return PlainBH()
    if name == "naive_adaptive_bh":
        return NaiveAdaptiveBH(lam)
    if name in ("lsl_gbh", "tst_gbh"):
        if not isinstance(layout, OneWayLayout):
            raise CliError(4, f"{name} applies to one-way layouts only (pass --one-way)")
        return LslGBH() if name == "lsl_gbh" else TstGBH()
    if name == "adaptive_gbh":
        if variant_name:
            try:
                variant = AdaptiveVariant(variant_name)
            except ValueError:
                raise CliError(2, f"unknown adaptive variant '{variant_name}'")
        elif isinstance(layout, OneWayLayout):
            variant = AdaptiveVariant.ONE_WAY
        elif isinstance(layout, TwoWayOnePerCellLayout):
            variant = AdaptiveVariant.TWO_WAY_EQUAL_SPLIT
        else:
            variant = AdaptiveVariant.CELLS_FOUR_TERM
        return AdaptiveGBH(variant, lam)
    raise CliError(2, f"unknown procedure '{name}'")


def cmd_analyze(args) -> int:
    records = _read_pvalue_table(args.infile, args.one_way)
    layout, positions, layout_summary = _infer_layout(records, args.one_way)
    if not (0.0 < args.alpha < 1.0):
        raise CliError(2, f"--alpha must lie in (0, 1), got {args.alpha}")
    if not (0.0 < args.lam < 1.0):
        raise CliError(2, f"--lambda must lie in (0, 1), got {args.lam}")
    values = [0.0] * layout.size
    for (r_id, c_id, m_id, p, _ln), pos in zip(records, positions):
        values[pos] = p
    pvals = PValueSet(layout, values)
    proc = _analyze_procedure(args.proc, args.variant, layout, args.lam)
    try:
        weights = procedure_weights(pvals, proc, args.alpha)
    except (VariantMismatch, UnequalCells) as exc:
        raise CliError(4, str(exc))
    rej = weighted_bh(pvals, weights, StepUpConfig(args.alpha))
    wp = weighted_pvalues(pvals.values, weights.weights)
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(ANALYZE_COLUMNS)
            for (r_id, c_id, m_id, p, _ln), pos in zip(records, positions):
                writer.writerow([
                    r_id, c_id, m_id,
                    repr(p),
                    repr(float(weights.weights[pos])),
                    repr(float(wp[pos])),
                    int(rej.rejected[pos]),
                ])
            fh.write(
                f"# rejections={rej.n_rejected} N={layout.size} {layout_summary}\n"
            )
    except OSError as exc:
        raise CliError(3, f"cannot write output: {exc}")
    return 0


# --- report ------------------------------------------------------------------


def _read_simulate_csv(path: str):
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise CliError(3, f"cannot read input: {exc}")
    with fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    if reader.fieldnames is None:
        raise CliError(2, "input file is empty")
    missing = [c for c in SIMULATE_COLUMNS if c not in reader.fieldnames]
    if missing:
        raise CliError(2, f"input is missing column(s): {missing}")
    rows = list(reader)
    if not rows:
        raise CliError(2, "input contains a header but no data rows")
    return rows


def cmd_report(args) -> int:
    rows = _read_simulate_csv(args.infile)
    group_by = args.group_by
    if group_by is None:
        varying = [
            f for f in _SWEEPABLE
            if len({r[f] for r in rows if r[f] != ""}) > 1
        ]
        if len(varying) != 1:
            raise CliError(
                2,
                "cannot auto-detect the sweep column "
                f"(varying: {varying or 'none'}); pass --group-by",
            )
        group_by = varying[0]
    elif group_by not in SIMULATE_COLUMNS:
        raise CliError(2, f"unknown --group-by column '{group_by}'")

    procedures = []
    for r in rows:
        if r["procedure"] not in procedures:
            procedures.append(r["procedure"])
    table = {}
    for r in rows:
        key = r[group_by]
        if key == "":
            raise CliError(2, f"empty {group_by} value in input")
        cell = table.setdefault(key, {})
        if r["procedure"] in cell:
            raise CliError(
                2,
                f"duplicate rows for procedure={r['procedure']!r} "
                f"{group_by}={key!r}; fix the input or choose another --group-by",
            )
        cell[r["procedure"]] = (r["fdr_hat"], r["power_hat"])

    for key, cell in table.items():
        absent = [p for p in procedures if p not in cell]
        if absent:
            raise CliError(
                2, f"{group_by}={key!r} lacks rows for procedure(s) {absent}"
            )

    header = [group_by]
    for proc in procedures:
        header += [f"{proc}_fdr", f"{proc}_power"]
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for key in sorted(table, key=float):
                row = [key]
                for proc in procedures:
                    row += list(table[key][proc])
                writer.writerow(row)
    except OSError as exc:
        raise CliError(3, f"cannot write output: {exc}")
    return 0


# --- entry point -------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gbh",
        description="Weighted step-up FDR procedures for classified hypotheses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a seeded Monte-Carlo sweep")
    p_sim.add_argument("--config", required=True, help="JSON run configuration")
    p_sim.add_argument("--out", help="output CSV (overrides the config's 'out')")
    p_sim.set_defaults(func=cmd_simulate)

    p_an = sub.add_parser("analyze", help="apply a procedure to a p-value table")
    p_an.add_argument("--in", dest="infile", required=True,
                      help="CSV with header row_id,col_id,member_id,p_value")
    p_an.add_argument("--proc", required=True,
                      help="plain_bh | naive_adaptive_bh | adaptive_gbh | lsl_gbh | tst_gbh")
    p_an.add_argument("--alpha", type=float, default=0.05)
    p_an.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p_an.add_argument("--variant", default=None,
                      help="adaptive variant (defaults to the layout's natural choice)")
    p_an.add_argument("--one-way", action="store_true",
                      help="group on row_id alone, ignoring col_id")
    p_an.add_argument("--out", required=True)
    p_an.set_defaults(func=cmd_analyze)

    p_rep = sub.add_parser("report", help="pivot a simulate CSV into figure tables")
    p_rep.add_argument("--in", dest="infile", required=True)
    p_rep.add_argument("--out", required=True)
    p_rep.add_argument("--group-by", default=None,
                       help="sweep column (auto-detected when exactly one varies)")
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"gbh {args.command}: error: {exc}", file=sys.stderr)
        return exc.code
    except GbhError as exc:
        print(f"gbh {args.command}: error: {exc}", file=sys.stderr)
        return 2


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
