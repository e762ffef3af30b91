from __future__ import annotations

import csv
from typing import TextIO

BOUND_HEADER = ["t", "A", "B", "serial_bound", "pi_t", "conflux_bound", "gap"]


def write_bound_csv(rows: list[dict], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(BOUND_HEADER)
    for r in rows:
        w.writerow([r["t"]] + [repr(float(r[k])) for k in BOUND_HEADER[1:]])
