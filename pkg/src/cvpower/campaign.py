"""Campaign configuration, grid expansion, and result persistence.

The configuration is a flat key = value text file; grid axes take
comma-separated lists.  Scenario summaries persist as a CSV table with a
fixed header, per-repetition detail as newline-delimited JSON records.
All numbers are written with 17 significant digits so downstream fitting
is loss-free, and files are byte-identical for identical (config, seed)
regardless of worker count.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

from .crossval import METHODS, assert_feasible
from .datagen import DatasetSpec
from .errors import ConfigError, InfeasibleSplitError
from .montecarlo import McConfig, McSummary, run_scenario
from .selection import SelectionConfig

SUMMARY_HEADER = (
    "scenario",
    "method",
    "n_per_class",
    "m",
    "l",
    "d_effect",
    "gamma_db",
    "gamma_d",
    "repetitions",
    "alpha",
    "beta",
    "master_seed",
    "k",
    "mean_acc",
    "std_acc",
    "h0_upper",
    "ha_lower",
    "confidence",
    "selection_counts",
)

_AXIS_KEYS = ("n", "m", "l", "d", "method", "gamma_db", "gamma_d")
_REQUIRED_KEYS = ("n", "m", "l", "d", "method")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


@dataclass(frozen=True)
class CampaignConfig:
    n: tuple[int, ...]
    m: tuple[int, ...]
    l: tuple[int, ...]
    d: tuple[float, ...]
    method: tuple[str, ...]
    gamma_db: tuple[float, ...] = (1.0,)
    gamma_d: tuple[float, ...] = (1.0,)
    repetitions: int = 500
    alpha: float = 0.05
    beta: float = 0.2
    master_seed: int = 0
    k: int = 10
    train_fraction: float = 0.7
    test_fraction: float = 0.15
    selection: str = "fixed_size"
    improvement_epsilon: float = 0.0
    write_repetitions: bool = False
    out_dir: str | None = None
    workers: int | None = None


def _parse_scalar(raw: str, caster, origin: str):
    try:
        return caster(raw)
    except ValueError as exc:
        raise ConfigError(f"{origin}: cannot parse {raw!r}") from exc


def _parse_bool(raw: str, origin: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ConfigError(f"{origin}: expected a boolean, got {raw!r}")


def parse_campaign_config(path) -> CampaignConfig:
    """Parse the key = value campaign file; errors carry file:line anchors."""
    path = Path(path)
    entries: dict[str, tuple[str, str]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            origin = f"{path.name}:{lineno}"
            if "=" not in stripped:
                raise ConfigError(f"{origin}: expected 'key = value'")
            key, _, value = stripped.partition("=")
            key = key.strip()
            value = value.strip()
            if key in entries:
                raise ConfigError(f"{origin}: duplicate key {key!r}")
            entries[key] = (value, origin)

    known = set(CampaignConfig.__dataclass_fields__)
    for key, (_value, origin) in entries.items():
        if key not in known:
            raise ConfigError(f"{origin}: unknown key {key!r}")
    for key in _REQUIRED_KEYS:
        if key not in entries:
            raise ConfigError(f"{path.name}: missing required key {key!r}")

    def axis(key, caster, default=None):
        if key not in entries:
            return default
        raw, origin = entries[key]
        items = [part.strip() for part in raw.split(",")]
        if not any(items) or items == [""]:
            raise ConfigError(f"{origin}: empty list for {key!r}")
        return tuple(_parse_scalar(part, caster, origin) for part in items if part)

    def scalar(key, caster, default):
        if key not in entries:
            return default
        raw, origin = entries[key]
        if caster is bool:
            return _parse_bool(raw, origin)
        return _parse_scalar(raw, caster, origin)

    methods = axis("method", str)
    for meth in methods:
        if meth not in METHODS:
            _raw, origin = entries["method"]
            raise ConfigError(f"{origin}: unknown method {meth!r}; expected one of {METHODS}")
    selection = scalar("selection", str, "fixed_size")
    if selection not in ("fixed_size", "auto_stop"):
        _raw, origin = entries["selection"]
        raise ConfigError(f"{origin}: selection must be fixed_size or auto_stop")

    return CampaignConfig(
        n=axis("n", int),
        m=axis("m", int),
        l=axis("l", int),
        d=axis("d", float),
        method=methods,
        gamma_db=axis("gamma_db", float, (1.0,)),
        gamma_d=axis("gamma_d", float, (1.0,)),
        repetitions=scalar("repetitions", int, 500),
        alpha=scalar("alpha", float, 0.05),
        beta=scalar("beta", float, 0.2),
        master_seed=scalar("master_seed", int, 0),
        k=scalar("k", int, 10),
        train_fraction=scalar("train_fraction", float, 0.7),
        test_fraction=scalar("test_fraction", float, 0.15),
        selection=selection,
        improvement_epsilon=scalar("improvement_epsilon", float, 0.0),
        write_repetitions=scalar("write_repetitions", bool, False),
        out_dir=scalar("out_dir", str, None),
        workers=scalar("workers", int, None),
    )


def scenario_slug(cfg: McConfig) -> str:
    s = cfg.spec
    return (
        f"{cfg.method}_n{s.n_per_class}_m{s.m}_l{s.l}_d{s.d_effect:g}"
        f"_gdb{s.gamma_db:g}_gd{s.gamma_d:g}"
    )


def expand_scenarios(config: CampaignConfig) -> list[McConfig]:
    """Grid product in documented axis order (n, m, l, d, gamma_db,
    gamma_d, method); invalid spec combinations raise ConfigError."""
    scenarios = []
    for n, m, l, d, gdb, gd, method in itertools.product(
        config.n, config.m, config.l, config.d,
        config.gamma_db, config.gamma_d, config.method,
    ):
        try:
            spec = DatasetSpec(
                n_per_class=n, m=m, l=l, d_effect=d, gamma_db=gdb, gamma_d=gd
            )
            sel = (
                SelectionConfig.fixed(l)
                if config.selection == "fixed_size"
                else SelectionConfig.auto(config.improvement_epsilon)
            )
            scenarios.append(
                McConfig(
                    spec=spec,
                    method=method,
                    sel_cfg=sel,
                    repetitions=config.repetitions,
                    alpha=config.alpha,
                    beta=config.beta,
                    master_seed=config.master_seed,
                    k=config.k,
                    train_fraction=config.train_fraction,
                    test_fraction=config.test_fraction,
                )
            )
        except ValueError as exc:
            raise ConfigError(f"invalid grid combination n={n} m={m} l={l} d={d} "
                              f"gamma_db={gdb} gamma_d={gd}: {exc}") from exc
    return scenarios


def summary_row(cfg: McConfig, summary: McSummary) -> dict[str, str]:
    s = cfg.spec
    confidence = ";".join(
        f"{l}:{d}={_fmt(v)}" for (l, d), v in sorted(summary.confidence.items())
    )
    counts = ";".join(str(int(c)) for c in summary.selection_counts)
    return {
        "scenario": scenario_slug(cfg),
        "method": cfg.method,
        "n_per_class": str(s.n_per_class),
        "m": str(s.m),
        "l": str(s.l),
        "d_effect": _fmt(s.d_effect),
        "gamma_db": _fmt(s.gamma_db),
        "gamma_d": _fmt(s.gamma_d),
        "repetitions": str(cfg.repetitions),
        "alpha": _fmt(cfg.alpha),
        "beta": _fmt(cfg.beta),
        "master_seed": str(cfg.master_seed),
        "k": str(cfg.k),
        "mean_acc": _fmt(summary.mean_acc),
        "std_acc": _fmt(summary.std_acc),
        "h0_upper": "" if summary.h0_upper is None else _fmt(summary.h0_upper),
        "ha_lower": "" if summary.ha_lower is None else _fmt(summary.ha_lower),
        "confidence": confidence,
        "selection_counts": counts,
    }


def write_summary_csv(path, rows: list[dict[str, str]]) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SUMMARY_HEADER, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def read_summary_csv(path) -> list[dict[str, str]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != SUMMARY_HEADER:
            raise ConfigError(f"{Path(path).name}: unexpected summary header")
        return list(reader)


def parse_confidence_field(field_text: str) -> dict[tuple[int, int], float]:
    out: dict[tuple[int, int], float] = {}
    if not field_text:
        return out
    for part in field_text.split(";"):
        key, _, value = part.partition("=")
        l_text, _, d_text = key.partition(":")
        out[(int(l_text), int(d_text))] = float(value)
    return out


def write_repetition_records(path, cfg: McConfig, summary: McSummary) -> None:
    slug = scenario_slug(cfg)
    with open(path, "a", encoding="utf-8") as fh:
        for rep, (acc, sel) in enumerate(zip(summary.accuracies, summary.selected_sets)):
            record = {
                "scenario": slug,
                "rep": rep,
                "accuracy": float(acc),
                "selected": list(sel),
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def read_repetition_records(path) -> list[dict]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records


@dataclass
class CampaignOutcome:
    completed: list[str] = field(default_factory=list)
    skipped: list[tuple[str, str]] = field(default_factory=list)
    summary_path: Path | None = None
    repetitions_path: Path | None = None


def run_campaign(
    config: CampaignConfig,
    out_dir,
    workers: int = 1,
    strict: bool = False,
    log=print,
) -> CampaignOutcome:
    """Execute the scenario grid and persist results.

    Infeasible scenarios are listed and skipped (the outcome records
    them); with ``strict`` the campaign refuses to start instead.
    """
    scenarios = expand_scenarios(config)
    if not scenarios:
        raise ConfigError("campaign grid is empty")

    outcome = CampaignOutcome()
    runnable: list[McConfig] = []
    for cfg in scenarios:
        try:
            assert_feasible(
                cfg.spec.n_negative,
                cfg.spec.n_positive,
                cfg.method,
                k=cfg.k,
                train_fraction=cfg.train_fraction,
                test_fraction=cfg.test_fraction,
            )
            runnable.append(cfg)
        except InfeasibleSplitError as exc:
            outcome.skipped.append((scenario_slug(cfg), str(exc)))
    if strict and outcome.skipped:
        raise InfeasibleSplitError(
            "infeasible scenarios under --strict: "
            + "; ".join(f"{slug} ({reason})" for slug, reason in outcome.skipped)
        )

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary_path = out_dir / "summary.csv"
    reps_path = out_dir / "repetitions.ndjson"
    if config.write_repetitions and reps_path.exists():
        reps_path.unlink()

    for slug, reason in outcome.skipped:
        log(f"skip {slug}: {reason}")

    rows = []
    for i, cfg in enumerate(runnable, start=1):
        summary = run_scenario(cfg, workers=workers)
        rows.append(summary_row(cfg, summary))
        if config.write_repetitions:
            write_repetition_records(reps_path, cfg, summary)
        outcome.completed.append(scenario_slug(cfg))
        log(
            f"[{i}/{len(runnable)}] {scenario_slug(cfg)}: "
            f"mean_acc={summary.mean_acc:.4f} std={summary.std_acc:.4f}"
        )
    write_summary_csv(summary_path, rows)
    outcome.summary_path = summary_path
    if config.write_repetitions:
        outcome.repetitions_path = reps_path
    return outcome
