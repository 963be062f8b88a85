"""Command-line entry point.

Four subcommands cover the pipeline: ``gen`` writes a synthetic pool,
``select`` runs one algorithm over a pool, ``evaluate`` scores a saved
selection against the random baseline, and ``compare`` tabulates several
algorithms over one or more pools.

Every command is deterministic given its flags. All randomness flows from
``--seed``; each consumer derives its own sub-seed by hashing a fixed label,
so adding an algorithm never perturbs another's draws. Domain errors are
reported as one-line JSON records on stderr with exit status 1; usage errors
exit 2. ``FAIRFORM_CONFIG`` may point to a JSON file supplying flag
defaults, either flat (applied to every subcommand) or nested under a
subcommand name; explicit flags always win.
"""

from __future__ import annotations

import dataclasses
import functools
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import click

from . import __version__
from .errors import FairformError, SchemaError
from .ingestion import (
    apply_exclusions,
    dump_pool,
    load_epscor_states,
    load_gdp_table,
    load_pool,
)
from .metrics import EvaluationReport, evaluate_selection
from .profiles import derive_thresholds
from .seeding import derive_seed
from .selection import ALGORITHMS, ScoredCandidate, Selection, build_scored_pool, select
from .synth import generate_pool, load_synth_spec

_SUBCOMMANDS = ("gen", "select", "evaluate", "compare")


def _load_default_map() -> dict:
    path = os.environ.get("FAIRFORM_CONFIG")
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read FAIRFORM_CONFIG file {path}: {exc}")
    if not isinstance(payload, dict):
        raise click.UsageError(f"FAIRFORM_CONFIG file {path}: expected a JSON object")
    flat = {k: v for k, v in payload.items() if k not in _SUBCOMMANDS}
    default_map = {}
    for sub in _SUBCOMMANDS:
        section = payload.get(sub, {})
        if not isinstance(section, dict):
            raise click.UsageError(
                f"FAIRFORM_CONFIG file {path}: section {sub!r} must be an object"
            )
        default_map[sub] = {**flat, **section}
    return default_map


def _guarded(fn):
    """Turn domain errors into machine-readable stderr records, exit 1."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (FairformError, ValueError, OSError, json.JSONDecodeError) as exc:
            record = {"error": type(exc).__name__, "message": str(exc)}
            click.echo(json.dumps(record, sort_keys=True), err=True)
            sys.exit(1)

    return wrapper


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _parse_baseline(ctx, param, value: str) -> tuple[str, int]:
    v = value.strip().lower()
    if v == "analytic":
        return ("analytic", 0)
    for prefix in ("mc:", "monte_carlo:"):
        if v.startswith(prefix):
            try:
                trials = int(v[len(prefix):])
            except ValueError:
                raise click.BadParameter(f"trial count in {value!r} is not an integer")
            if trials < 1:
                raise click.BadParameter("trial count must be >= 1")
            return ("monte_carlo", trials)
    raise click.BadParameter(f"expected 'analytic' or 'mc:<trials>', got {value!r}")


def _pool_options(fn):
    fn = click.option(
        "--epscor", "epscor_path", default=None,
        type=click.Path(exists=True, dir_okay=False),
        help="EPSCoR state list, one code per line (default: bundled).",
    )(fn)
    fn = click.option(
        "--gdp", "gdp_path", default=None,
        type=click.Path(exists=True, dir_okay=False),
        help="Country GDP table CSV (default: bundled sample).",
    )(fn)
    return fn


def _report_options(fn):
    fn = click.option(
        "--format", "fmt", type=click.Choice(["json", "tsv"]), default="json",
        show_default=True, help="Report output format.",
    )(fn)
    fn = click.option(
        "--groups", type=click.Choice(["5", "6"]), default="6", show_default=True,
        help="Report 6 demographic groups or just the 5 scoring features.",
    )(fn)
    fn = click.option(
        "--baseline", default="analytic", callback=_parse_baseline,
        show_default=True, help="Baseline mode: 'analytic' or 'mc:<trials>'.",
    )(fn)
    return fn


def _scored_pool(
    pool_path: str, gdp_path: Optional[str], epscor_path: Optional[str]
) -> list[ScoredCandidate]:
    """Shared pipeline: load, filter, derive thresholds, flag and score."""
    pool_file = load_pool(pool_path)
    if pool_file.errors:
        click.echo(
            json.dumps({"warning": "rows_dropped", "count": len(pool_file.errors)},
                       sort_keys=True),
            err=True,
        )
    retained, excluded = apply_exclusions(pool_file)
    if excluded:
        click.echo(
            json.dumps({"warning": "candidates_excluded", "count": len(excluded)},
                       sort_keys=True),
            err=True,
        )
    gdp = load_gdp_table(gdp_path)
    epscor = load_epscor_states(epscor_path)
    thresholds = derive_thresholds(gdp, epscor, retained)
    return build_scored_pool(retained, thresholds)


def _load_selection(path: str) -> Selection:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    name = Path(path).name
    if not isinstance(payload, dict):
        raise SchemaError(f"{name}: expected a JSON object")
    for key in ("algorithm", "seed", "size", "members"):
        if key not in payload:
            raise SchemaError(f"{name}: selection file missing key {key!r}")
    ids = []
    for m in payload["members"]:
        if isinstance(m, str):
            ids.append(m)
        elif isinstance(m, dict) and "id" in m:
            ids.append(m["id"])
        else:
            raise SchemaError(f"{name}: members must be ids or objects with an 'id'")
    return Selection(
        member_ids=tuple(ids),
        algorithm=payload["algorithm"],
        seed=payload["seed"],
        size=payload["size"],
        shortfall=payload.get("shortfall", False),
    )


def _report_payload(rep: EvaluationReport, fmt: str) -> str:
    if fmt == "tsv":
        return rep.tsv_header() + "\n" + rep.to_tsv_row() + "\n"
    return rep.to_json() + "\n"


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(version=__version__, prog_name="fairform")
@click.pass_context
def main(ctx: click.Context) -> None:
    """Form demographically diverse groups and measure the utility cost."""
    ctx.default_map = _load_default_map()


@main.command()
@click.argument("spec", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Pool file to write (.csv or .json).")
@click.option("--seed", type=int, default=None,
              help="Override the seed recorded in the spec file.")
@_guarded
def gen(spec: str, out: str, seed: Optional[int]) -> None:
    """Generate a synthetic candidate pool from a JSON spec file."""
    synth_spec = load_synth_spec(spec)
    if seed is not None:
        synth_spec = dataclasses.replace(synth_spec, seed=seed)
    pool = generate_pool(synth_spec)
    dump_pool(pool.records, out)


@main.command("select")
@click.option("--pool", "pool_path", required=True,
              type=click.Path(exists=True, dir_okay=False), help="Candidate pool file.")
@_pool_options
@click.option("--algo", required=True, type=click.Choice(ALGORITHMS),
              help="Selection algorithm.")
@click.option("--size", required=True, type=click.IntRange(min=1),
              help="Group size to select.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Master seed; the algorithm's sub-seed is derived from it.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Selection JSON path (default: stdout).")
@_guarded
def cmd_select(pool_path: str, gdp_path: Optional[str], epscor_path: Optional[str],
               algo: str, size: int, seed: int, out: Optional[str]) -> None:
    """Select a group from a pool and write the selection as JSON."""
    pool = _scored_pool(pool_path, gdp_path, epscor_path)
    sub_seed = derive_seed(seed, f"select:{algo}")
    sel = select(algo, pool, size, sub_seed)
    by_id = {c.id: c for c in pool}
    members = []
    for mid in sel.member_ids:
        c = by_id[mid]
        members.append({
            "id": c.id,
            "score": c.score,
            "h_index": c.h_index,
            "flags": {
                "female": c.flags.female,
                "non_white": c.flags.non_white,
                "geo_protected": c.flags.geo_protected,
                "low_rank_university": c.flags.low_rank_university,
                "junior": c.flags.junior,
                "geo_subgroup": c.flags.geo_subgroup,
            },
        })
    payload = {
        "algorithm": sel.algorithm,
        "seed": seed,
        "derived_seed": sub_seed,
        "size": sel.size,
        "shortfall": sel.shortfall,
        "pool": pool_path,
        "members": members,
    }
    _emit(_json_text(payload), out)


@main.command()
@click.argument("selection", type=click.Path(exists=True, dir_okay=False))
@click.option("--pool", "pool_path", required=True,
              type=click.Path(exists=True, dir_okay=False), help="Candidate pool file.")
@_pool_options
@_report_options
@click.option("--seed", type=int, default=None,
              help="Master seed for the Monte-Carlo baseline "
                   "(default: the seed recorded in the selection).")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Report path (default: stdout).")
@_guarded
def evaluate(selection: str, pool_path: str, gdp_path: Optional[str],
             epscor_path: Optional[str], baseline: tuple[str, int], groups: str,
             fmt: str, seed: Optional[int], out: Optional[str]) -> None:
    """Evaluate a saved selection against the random baseline."""
    pool = _scored_pool(pool_path, gdp_path, epscor_path)
    sel = _load_selection(selection)
    mode, trials = baseline
    mc_master = seed if seed is not None else sel.seed
    rep = evaluate_selection(
        sel, pool,
        group_mode=int(groups),
        baseline=mode,
        trials=trials,
        seed=derive_seed(mc_master, "baseline:mc"),
    )
    _emit(_report_payload(rep, fmt), out)


_ROW_COLUMNS = EvaluationReport.TSV_COLUMNS  # d_gain, ul_pct, y_pct, f


def _row(algorithm: str, rep: EvaluationReport) -> dict:
    row = {"algorithm": algorithm}
    row.update({c: getattr(rep, c) for c in _ROW_COLUMNS})
    return row


def _average_rows(per_pool: Sequence[Sequence[dict]], algorithms: Sequence[str]) -> list[dict]:
    """Cross-pool per-column means, one row per algorithm.

    The F column is averaged like any other; it is not recomputed from the
    averaged gain and savings columns.
    """
    out = []
    for algo in algorithms:
        rows = [r for pool_rows in per_pool for r in pool_rows if r["algorithm"] == algo]
        avg = {"algorithm": algo}
        avg.update({c: sum(r[c] for r in rows) / len(rows) for c in _ROW_COLUMNS})
        out.append(avg)
    return out


@main.command()
@click.option("--pool", "pool_paths", required=True, multiple=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Candidate pool file; repeat for several pools.")
@_pool_options
@click.option("--algo", "algorithms", multiple=True, type=click.Choice(ALGORITHMS),
              default=("uga", "mga", "rsa"), show_default=True,
              help="Algorithms to compare; repeat the flag. The random "
                   "baseline is never a row of its own.")
@click.option("--size", required=True, type=click.IntRange(min=1),
              help="Group size to select.")
@click.option("--seed", type=int, default=0, show_default=True, help="Master seed.")
@_report_options
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Comparison report path (default: stdout).")
@_guarded
def compare(pool_paths: tuple[str, ...], gdp_path: Optional[str],
            epscor_path: Optional[str], algorithms: tuple[str, ...], size: int,
            seed: int, baseline: tuple[str, int], groups: str, fmt: str,
            out: Optional[str]) -> None:
    """Tabulate several algorithms over one or more pools, plus an average."""
    if len(algorithms) < 2:
        raise click.UsageError("compare needs at least two algorithms (--algo twice)")
    row_algos = [a for i, a in enumerate(algorithms)
                 if a != "rsa" and a not in algorithms[:i]]
    if not row_algos:
        raise click.UsageError("compare needs at least one non-baseline algorithm")

    mode, trials = baseline
    pool_sections = []
    per_pool_rows = []
    for pool_path in pool_paths:
        pool = _scored_pool(pool_path, gdp_path, epscor_path)
        rows = []
        for algo in row_algos:
            sub_seed = derive_seed(seed, f"select:{algo}")
            sel = select(algo, pool, size, sub_seed)
            rep = evaluate_selection(
                sel, pool,
                group_mode=int(groups),
                baseline=mode,
                trials=trials,
                seed=derive_seed(seed, "baseline:mc"),
            )
            rows.append(_row(algo, rep))
        pool_sections.append({"pool": pool_path, "rows": rows})
        per_pool_rows.append(rows)

    average = _average_rows(per_pool_rows, row_algos)

    if fmt == "tsv":
        lines = ["\t".join(("pool", "algorithm") + _ROW_COLUMNS)]
        for section in pool_sections:
            for row in section["rows"]:
                lines.append("\t".join(
                    [section["pool"], row["algorithm"]]
                    + [f"{row[c]:.2f}" for c in _ROW_COLUMNS]
                ))
        for row in average:
            lines.append("\t".join(
                ["average", row["algorithm"]]
                + [f"{row[c]:.2f}" for c in _ROW_COLUMNS]
            ))
        _emit("\n".join(lines) + "\n", out)
        return

    payload = {
        "seed": seed,
        "size": size,
        "baseline": mode if mode == "analytic" else f"monte_carlo:{trials}",
        "group_mode": int(groups),
        "pools": pool_sections,
        "average": average,
    }
    _emit(_json_text(payload), out)


if __name__ == "__main__":
    main()
