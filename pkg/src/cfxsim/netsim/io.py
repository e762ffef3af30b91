from __future__ import annotations

import csv
from typing import Iterable, TextIO

from .. import config as _config
from .config import ConfigError, SimConfig, SimResult

RESULT_HEADER = ["power", "withhold_s", "seed", "ratio", "blocks_measured"]


def load_sim_config(path) -> SimConfig:
    """Read a SimConfig from a TOML file (top level or a ``[sim]`` table)."""
    data = _config.load(path)
    data = data.get("sim", data)
    cfg = SimConfig.from_dict(data)
    problems = cfg.validate()
    if problems:
        raise ConfigError(problems)
    return cfg


def write_results_csv(results: Iterable[SimResult], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(RESULT_HEADER)
    for r in results:
        row = r.csv_row()
        ratio = "" if row["ratio"] is None else repr(float(row["ratio"]))
        w.writerow([repr(float(row["power"])), repr(float(row["withhold_s"])), row["seed"], ratio, row["blocks_measured"]])
