"""Scenario files: one ``kind`` plus a ``[params]`` table, dispatched to a module."""

from __future__ import annotations

import copy
import io
import json
import platform
from dataclasses import dataclass, field, fields, replace
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .. import __version__
from .. import config as _config
from ..attack import bound_table
from ..attack.io import write_bound_csv
from ..econ import io as econ_io
from ..econ.model import UPTAKE_PRESETS, PRICE_MODES, revenue_series
from ..netsim.config import AttackerConfig, SimConfig
from ..netsim.io import write_results_csv
from ..netsim.simulation import sweep
from ..treegraph import RewardParams, block_reward_drip, figure1, graph_rewards, snapshot

KINDS = ("consensus-demo", "selfish-mining", "revenue", "bounds")
ParseError = _config.ParseError


class ValidationError(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


@dataclass
class Scenario:
    kind: str
    params: dict = field(default_factory=dict)
    name: str = "scenario"
    output_path: Optional[str] = None
    seed: Optional[int] = None
    base_dir: Path = Path(".")


# -- loading ----------------------------------------------------------------


def preset_names() -> list[str]:
    root = resources.files(__package__) / "presets"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".toml"))


def preset_text(name: str) -> str:
    return (resources.files(__package__) / "presets" / f"{name}.toml").read_text(encoding="utf-8")


def load_raw(source: str) -> tuple[dict, str, Path]:
    """Parse a scenario file path or preset name into a raw dict."""
    path = Path(source)
    if path.is_file():
        return _config.load(path), path.stem, path.parent
    if source in preset_names():
        return _config.loads(preset_text(source)), source, Path(".")
    raise ParseError(f"no such scenario file or preset: {source}")


def apply_overrides(raw: dict, overrides) -> dict:
    raw = copy.deepcopy(raw)
    for item in overrides or ():
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ParseError(f"override must be key=value, got {item!r}")
        _config.set_dotted(raw, key.strip(), _config.parse_value(value.strip()))
    return raw


def from_raw(raw: dict, name: str = "scenario", base_dir: Path = Path(".")) -> Scenario:
    if "kind" not in raw:
        raise ParseError("scenario is missing 'kind'")
    params = raw.get("params", {})
    if not isinstance(params, dict):
        raise ParseError("'params' must be a table")
    extra = set(raw) - {"kind", "params", "output", "seed", "name"}
    if extra:
        raise ParseError(f"unknown top-level keys: {', '.join(sorted(extra))}")
    return Scenario(
        kind=raw["kind"],
        params=params,
        name=raw.get("name", name),
        output_path=raw.get("output"),
        seed=raw.get("seed"),
        base_dir=base_dir,
    )


# -- validation -------------------------------------------------------------

_SWEEP_KEYS = {"powers", "withholds", "seeds", "instant_network", "workers", "attacker", "seed"}
_SIM_KEYS = {f.name for f in fields(SimConfig)} - {"attacker", "seed"}


def _sim_plan(sc: Scenario) -> tuple[list[SimConfig], list[str]]:
    p = dict(sc.params)
    problems = []
    unknown = set(p) - _SWEEP_KEYS - _SIM_KEYS
    problems += [f"params.{k}: unknown field" for k in sorted(unknown)]
    base = SimConfig(**{k: v for k, v in p.items() if k in _SIM_KEYS})
    seed0 = sc.seed if sc.seed is not None else p.get("seed", 0)
    n_seeds = p.get("seeds", 1)
    if not isinstance(n_seeds, int) or n_seeds < 1:
        problems.append("params.seeds must be a positive integer")
        n_seeds = 1
    instant = p.get("instant_network", True)
    attackers: list[AttackerConfig] = []
    if "attacker" in p:
        a = p["attacker"]
        if not isinstance(a, dict):
            problems.append("params.attacker must be a table")
        else:
            bad = set(a) - {f.name for f in fields(AttackerConfig)}
            problems += [f"attacker.{k}: unknown field" for k in sorted(bad)]
            if "power" not in a:
                problems.append("attacker.power is required")
            else:
                attackers.append(AttackerConfig(**{k: v for k, v in a.items() if k not in bad}))
    if "powers" in p or "withholds" in p:
        for pw in p.get("powers", [0.0]):
            for wh in p.get("withholds", [0.0]):
                attackers.append(AttackerConfig(pw, float(wh), instant))
    cfgs = []
    for att in attackers or [None]:
        for s in range(seed0, seed0 + n_seeds):
            cfgs.append(replace(base, attacker=att, seed=s))
    for c in cfgs:
        for d in c.validate():
            if d not in problems:
                problems.append(d)
    return cfgs, problems


def _revenue_plan(sc: Scenario) -> tuple[dict, list[str]]:
    p = dict(sc.params)
    plan_keys = {"horizon_days", "price_mode", "fees", "uptakes", "compare_price_modes"}
    econ_raw = {k: v for k, v in p.items() if k not in plan_keys}
    params, problems = econ_io.params_from_dict(econ_raw, "params")
    horizon = p.get("horizon_days", 1095)
    if not isinstance(horizon, int) or horizon < 1:
        problems.append("params.horizon_days must be an integer >= 1")
    mode = p.get("price_mode", "inflation")
    if mode not in PRICE_MODES:
        problems.append(f"params.price_mode must be one of {', '.join(PRICE_MODES)}")
    for u in p.get("uptakes", []):
        if u not in UPTAKE_PRESETS:
            problems.append(f"params.uptakes: unknown preset {u!r}")
    for f in p.get("fees", []):
        if not isinstance(f, (int, float)) or f < 0:
            problems.append("params.fees entries must be non-negative numbers")
    return {"econ": params, "horizon": horizon, "mode": mode, "raw": p}, problems


def _bounds_plan(sc: Scenario) -> tuple[dict, list[str]]:
    p = sc.params
    problems = []
    lengths = p.get("lengths") or list(range(1, p.get("t_max", 100) + 1))
    advantages = p.get("advantages", [1.1, 1.5, 2, 5])
    rewards = p.get("rewards", [1, 12.5])
    if any((not isinstance(t, int)) or t < 1 for t in lengths):
        problems.append("params.lengths must be integers >= 1")
    if any(a <= 1 for a in advantages):
        problems.append("params.advantages must all exceed 1")
    if any(b < 0 for b in rewards):
        problems.append("params.rewards must be non-negative")
    extra = set(p) - {"lengths", "t_max", "advantages", "rewards"}
    problems += [f"params.{k}: unknown field" for k in sorted(extra)]
    return {"lengths": lengths, "advantages": advantages, "rewards": rewards}, problems


def _consensus_plan(sc: Scenario) -> tuple[dict, list[str]]:
    p = sc.params
    problems = []
    horizon = p.get("horizon_epochs", 10)
    if not isinstance(horizon, int) or horizon < 0:
        problems.append("params.horizon_epochs must be a non-negative integer")
    source = p.get("snapshot")
    graph = p.get("graph", "figure-1" if source is None else None)
    if graph not in (None, "figure-1"):
        problems.append("params.graph must be 'figure-1' (or give params.snapshot)")
    if source is not None and not (sc.base_dir / source).is_file():
        problems.append(f"params.snapshot: file not found: {source}")
    extra = set(p) - {"horizon_epochs", "snapshot", "graph", "base_reward"}
    problems += [f"params.{k}: unknown field" for k in sorted(extra)]
    return {"horizon": horizon, "snapshot": source, "base_reward": p.get("base_reward", 10**18)}, problems


_PLANS = {
    "selfish-mining": _sim_plan,
    "revenue": _revenue_plan,
    "bounds": _bounds_plan,
    "consensus-demo": _consensus_plan,
}


def plan(sc: Scenario):
    if sc.kind not in KINDS:
        return None, [f"kind must be one of {', '.join(KINDS)}"]
    try:
        return _PLANS[sc.kind](sc)
    except TypeError as exc:
        return None, [f"params: {exc}"]


def validate(sc: Scenario) -> list[str]:
    return plan(sc)[1]


# -- execution --------------------------------------------------------------


def _run_selfish(sc, cfgs, out: Path) -> dict:
    workers = int(sc.params.get("workers", 1))
    results = sweep(cfgs, workers=workers)
    buf = io.StringIO()
    write_results_csv(results, buf)
    (out / "selfish_mining.csv").write_text(buf.getvalue())
    return {"selfish_mining.csv": len(results)}


def _run_revenue(sc, pl, out: Path) -> dict:
    econ, horizon, mode, raw = pl["econ"], pl["horizon"], pl["mode"], pl["raw"]
    written = {}

    def series_file(name, params, m):
        rows = revenue_series(params, horizon, m)
        buf = io.StringIO()
        econ_io.write_revenue_csv(rows, buf)
        (out / name).write_text(buf.getvalue())
        written[name] = len(rows)
        return rows

    def wide(name, columns: dict):
        lines = ["day," + ",".join(columns)]
        cols = list(columns.values())
        for i in range(horizon):
            lines.append(f"{i + 1}," + ",".join(repr(c[i].total) for c in cols))
        (out / name).write_text("\n".join(lines) + "\n")
        written[name] = horizon

    if raw.get("fees"):
        cols = {f"total_f{f!r}": series_file(f"revenue_f{f!r}.csv", replace(econ, avg_fee=f), mode) for f in raw["fees"]}
        wide("revenue_fees.csv", cols)
    elif raw.get("uptakes"):
        cols = {f"total_{u}": series_file(f"revenue_{u}.csv", replace(econ, adoption=UPTAKE_PRESETS[u]), mode) for u in raw["uptakes"]}
        wide("revenue_uptake.csv", cols)
    elif raw.get("compare_price_modes"):
        cols = {f"total_{m}": series_file(f"revenue_{m}.csv", econ, m) for m in PRICE_MODES}
        wide("revenue_price_modes.csv", cols)
    else:
        series_file("revenue.csv", econ, mode)
    return written


def _run_bounds(sc, pl, out: Path) -> dict:
    rows = bound_table(pl["lengths"], pl["advantages"], pl["rewards"])
    buf = io.StringIO()
    write_bound_csv(rows, buf)
    (out / "bounds.csv").write_text(buf.getvalue())
    return {"bounds.csv": len(rows)}


def _run_consensus(sc, pl, out: Path) -> dict:
    if pl["snapshot"]:
        with open(sc.base_dir / pl["snapshot"], encoding="utf-8") as fh:
            g = snapshot.load(fh, pl["horizon"])
        label = str
    else:
        g = figure1.build(pl["horizon"])
        label = figure1.NAME.get
    params = RewardParams(pl["base_reward"], 100, pl["horizon"])
    rewards = graph_rewards(g, params)
    pivot = set(g.pivot_chain())
    position = {b: i for i, b in enumerate(g.total_order())}
    lines = ["id,label,epoch,order,on_pivot,anticone_size,mature,reward_drip,provisional_reward_drip"]
    for b in sorted(g.ids()):
        e = g.epoch_of(b)
        a = "" if e is None else g.anticone_size(b)
        provisional = "" if e is None else block_reward_drip(params, a)
        lines.append(
            f"{b},{label(b)},{'' if e is None else e},{position.get(b, '')},"
            f"{int(b in pivot)},{a},{int(g.is_mature(b))},{rewards.get(b, '')},{provisional}"
        )
    (out / "consensus.csv").write_text("\n".join(lines) + "\n")
    (out / "snapshot.txt").write_text(snapshot.dumps(g))
    return {"consensus.csv": len(g), "snapshot.txt": len(g)}


_RUNNERS = {
    "selfish-mining": _run_selfish,
    "revenue": _run_revenue,
    "bounds": _run_bounds,
    "consensus-demo": _run_consensus,
}


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


def execute(sc: Scenario, out_dir: Optional[Path] = None) -> dict:
    pl, problems = plan(sc)
    if problems:
        raise ValidationError(problems)
    out = Path(out_dir or sc.output_path or Path("out") / sc.name)
    out.mkdir(parents=True, exist_ok=True)
    written = _RUNNERS[sc.kind](sc, pl, out)
    meta = {
        "scenario": sc.name,
        "kind": sc.kind,
        "seed": sc.seed,
        "params": _jsonable(sc.params),
        "outputs": written,
        "versions": {
            "cfxsim": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
        },
    }
    (out / "run.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return meta
