"""CSV and JSON serialization of reports, sweeps and slices.

CSV: header row with unit-annotated names, RFC 4180 quoting, LF line endings,
floats as shortest round-trip decimals. JSON: envelope tagged with
``"schema": "biphoton-report/1"``. No timestamps go into data files.
"""

from __future__ import annotations

import csv
import io
import json
import os
from pathlib import Path

from .config import SweepSpec, config_document
from .errors import BiphotonError
from .observables import ObservablesReport, SliceGrid

SCHEMA_TAG = "biphoton-report/1"


class IoError(BiphotonError, OSError):
    pass


def _num(v):
    return repr(float(v))


def _csv_bytes(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def _json_bytes(doc):
    return (json.dumps(doc, indent=1, allow_nan=False) + "\n").encode("utf-8")


def _report_doc(rep: ObservablesReport):
    return {
        "schema": SCHEMA_TAG,
        "kind": "report",
        "eta_domain": rep.eta_domain.value,
        "config": config_document(rep.config),
        "observables": {k: float(v) for k, v in rep.values().items()},
    }


def _slice_doc(grid: SliceGrid):
    return {
        "schema": SCHEMA_TAG,
        "kind": "slice",
        "domain": grid.domain,
        "mask": grid.mask.value,
        "axis_names": list(grid.axis_names),
        "axis_s": [float(v) for v in grid.axis_s],
        "axis_i": [float(v) for v in grid.axis_i],
        "values": [[float(v) for v in row] for row in grid.values],
    }


def _sweep_doc(rows, spec: SweepSpec):
    return {
        "schema": SCHEMA_TAG,
        "kind": "sweep",
        "label": spec.label,
        "eta_domain": spec.eta_domain.value,
        "axes": [
            {"path": ax.path, "link": list(ax.link), "scale": ax.scale, "values": [float(v) for v in ax.values()]}
            for ax in spec.axes
        ],
        "observables": list(spec.observables),
        "rows": [
            {
                "axes": [float(v) for v in r.axis_values],
                "values": {k: float(v) for k, v in r.observables.items()},
                "error": r.error,
            }
            for r in rows
        ],
    }


def emit(obj, fmt="csv", *, sweep: SweepSpec | None = None) -> bytes:
    """Serialize a report, a slice, or sweep rows (which need their ``sweep`` spec)."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(obj, ObservablesReport):
        if fmt == "json":
            return _json_bytes(_report_doc(obj))
        values = obj.values()
        return _csv_bytes([list(values), [_num(v) for v in values.values()]])
    if isinstance(obj, SliceGrid):
        if fmt == "json":
            return _json_bytes(_slice_doc(obj))
        s_name, i_name = obj.axis_names
        table = [[f"{s_name}\\{i_name}"] + [_num(v) for v in obj.axis_i]]
        for s, row in zip(obj.axis_s, obj.values):
            table.append([_num(s)] + [_num(v) for v in row])
        return _csv_bytes(table)
    if sweep is None:
        raise ValueError("sweep rows need their SweepSpec for column names")
    rows = list(obj)
    if fmt == "json":
        return _json_bytes(_sweep_doc(rows, sweep))
    header = [ax.path for ax in sweep.axes] + list(sweep.observables) + ["error"]
    table = [header]
    for r in rows:
        vals = [_num(r.observables[k]) if k in r.observables else "" for k in sweep.observables]
        table.append([_num(v) for v in r.axis_values] + vals + [r.error])
    return _csv_bytes(table)


def output_path(path):
    """Resolve relative output paths under $BIPHOTON_OUT when it is set."""
    p = Path(path)
    root = os.environ.get("BIPHOTON_OUT")
    if root and not p.is_absolute():
        p = Path(root) / p
    return p


def write_bytes(path, data: bytes):
    p = output_path(path)
    try:
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_bytes(data)
    except OSError as exc:
        raise IoError(f"cannot write {p}: {exc}") from exc
    return p
