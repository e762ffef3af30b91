from __future__ import annotations

import csv
from dataclasses import fields
from typing import Iterable, TextIO

from .model import UPTAKE_PRESETS, AdoptionCurve, EconParams, RevenueRow

REVENUE_HEADER = ["day", "block_reward_tokens", "fees", "interest_tokens", "price", "total"]

ALIASES = {
    "G": "genesis_tokens",
    "p0": "initial_price",
    "r_b": "block_inflation",
    "r_c": "interest_rate",
    "f": "avg_fee",
    "beta": "bond_per_tx",
    "R": "daily_bond_rate",
    "alpha": "locked_fraction",
    "g": "price_growth",
}


def params_from_dict(data: dict, prefix: str = "") -> tuple[EconParams, list[str]]:
    """Build EconParams from a config table; unknown keys become diagnostics."""
    p = prefix + "." if prefix else ""
    known = {f.name for f in fields(EconParams)}
    kwargs, problems = {}, []
    for key, value in data.items():
        name = ALIASES.get(key, key)
        if name == "uptake":
            if value not in UPTAKE_PRESETS:
                problems.append(f"{p}uptake must be one of {', '.join(UPTAKE_PRESETS)}")
            else:
                kwargs["adoption"] = UPTAKE_PRESETS[value]
        elif name == "adoption":
            try:
                kwargs["adoption"] = AdoptionCurve(**value)
            except TypeError as exc:
                problems.append(f"{p}adoption: {exc}")
        elif name in known:
            kwargs[name] = value
        else:
            problems.append(f"{p}{key}: unknown field")
    params = EconParams(**kwargs)
    problems.extend(p + d for d in params.validate())
    return params, problems


def fmt(x) -> str:
    return repr(float(x))


def write_revenue_csv(rows: Iterable[RevenueRow], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(REVENUE_HEADER)
    for r in rows:
        w.writerow([r.day, fmt(r.block_reward_tokens), fmt(r.fees), fmt(r.interest_tokens), fmt(r.price), fmt(r.total)])
