"""Result serialization: deterministic CSV and JSON writers.

Every experiment returns a ResultBundle: named tables (each a header plus
float columns), named verdicts ({threshold, observed, pass}), and an echo of
the configuration it ran under.  Writers emit UTF-8 with LF newlines and
render floats as %.12e so identical runs produce identical bytes.
"""

import json
import os
from dataclasses import dataclass, field

import numpy as np

FLOAT_FMT = "%.12e"


@dataclass
class Table:
    columns: list          # column names, in order
    data: list             # list of 1-D arrays, one per column

    def __post_init__(self):
        if len(self.columns) != len(self.data):
            raise ValueError("table must have one name per column")
        lengths = {len(c) for c in self.data}
        if len(lengths) > 1:
            raise ValueError(f"table columns disagree on length: {sorted(lengths)}")

    def rows(self):
        cols = [np.asarray(c) for c in self.data]
        for i in range(len(cols[0]) if cols else 0):
            yield [c[i] for c in cols]


@dataclass
class ResultBundle:
    experiment: str
    config: dict
    tables: dict = field(default_factory=dict)      # name -> Table
    verdicts: dict = field(default_factory=dict)    # name -> verdict dict
    notes: list = field(default_factory=list)

    def add_table(self, name, columns, data):
        self.tables[name] = Table(list(columns), [np.asarray(c) for c in data])

    def add_verdict(self, name, threshold, observed, passed=None):
        observed = float(observed)
        if passed is None:
            passed = bool(observed <= threshold)
        self.verdicts[name] = {
            "threshold": float(threshold),
            "observed": observed,
            "pass": bool(passed),
        }

    def all_passed(self):
        return all(v["pass"] for v in self.verdicts.values())


def _format_cell(value):
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return FLOAT_FMT % float(value)


def render_csv(table):
    lines = [",".join(table.columns)]
    for row in table.rows():
        lines.append(",".join(_format_cell(v) for v in row))
    return ("\n".join(lines) + "\n").encode("utf-8")


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render_json_summary(bundle):
    payload = {
        "experiment": bundle.experiment,
        "config": bundle.config,
        "verdicts": bundle.verdicts,
        "notes": list(bundle.notes),
        "tables": sorted(bundle.tables),
    }
    text = json.dumps(payload, indent=2, sort_keys=True, default=_json_default)
    return (text + "\n").encode("utf-8")


def render_json_table(table):
    payload = {name: np.asarray(col).tolist()
               for name, col in zip(table.columns, table.data)}
    text = json.dumps(payload, indent=2, sort_keys=True, default=_json_default)
    return (text + "\n").encode("utf-8")


def write_bundle(bundle, out_dir, fmt="csv"):
    """Write one file per table plus a JSON summary; returns written paths."""
    try:
        os.makedirs(out_dir, exist_ok=True)
        written = []
        for name in sorted(bundle.tables):
            table = bundle.tables[name]
            if fmt == "json":
                path = os.path.join(out_dir, f"{bundle.experiment}_{name}.json")
                blob = render_json_table(table)
            else:
                path = os.path.join(out_dir, f"{bundle.experiment}_{name}.csv")
                blob = render_csv(table)
            with open(path, "wb") as fh:
                fh.write(blob)
            written.append(path)
        summary = os.path.join(out_dir, f"{bundle.experiment}_summary.json")
        with open(summary, "wb") as fh:
            fh.write(render_json_summary(bundle))
        written.append(summary)
        return written
    except OSError as exc:
        raise IOError(f"cannot write results under {out_dir}: {exc}")


def alpha_label(alpha):
    """Stable column label for an α value, e.g. 2.356194490193e+00."""
    return FLOAT_FMT % float(alpha)
