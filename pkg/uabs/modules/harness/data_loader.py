import csv
import json
from datetime import datetime, timezone
from io import StringIO

from uabs import __version__
from . import MetricsRow, RunConfig, EmptyMetricsError

TRAJECTORY_HEADER = ["method", "seed", "task_index", "t", "x", "y"]
TIMESTAMP_KEY = "created" # the only non-deterministic metadata entry

def build_metadata(cfg: RunConfig) -> dict:
    return {
        "version": __version__,
        "config_hash": cfg.get_hash(),
        TIMESTAMP_KEY: datetime.now(timezone.utc).isoformat(timespec="seconds"),
        **cfg.get_construct_config(),
    }

def _fmt(v):
    return repr(v) if isinstance(v, float) else str(v)

def _dump_csv(rows: list[tuple], header: list[str], metadata: dict) -> str:
    buf = StringIO()
    for k, v in metadata.items():
        buf.write(f"# {k}: {json.dumps(v)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()

def _dump_json(rows: list[tuple], metadata: dict) -> str:
    return json.dumps({"metadata": metadata, "rows": [row._asdict() for row in rows]}, indent=1)

def export_table(rows: list[tuple], fpath: str, fmt: str="csv", metadata: dict=None):
    if not rows:
        raise EmptyMetricsError("Refusing to export an empty table")
    metadata = metadata or {}
    text = _dump_json(rows, metadata) if fmt=="json" else _dump_csv(rows, list(rows[0]._fields), metadata)
    with open(fpath, mode="w", encoding="utf8", newline="") as fp:
        fp.write(text)

def export_metrics(rows: list[MetricsRow], fpath: str, fmt: str="csv", metadata: dict=None):
    export_table(rows, fpath, fmt, metadata)

def read_metrics(fpath: str, fmt: str=None) -> tuple[list[MetricsRow], dict]:
    fmt = fmt or ("json" if fpath.lower().endswith(".json") else "csv")
    with open(fpath, mode="r", encoding="utf8") as fp:
        text = fp.read()

    if fmt=="json":
        data = json.loads(text)
        return [_metrics_row(r) for r in data["rows"]], data.get("metadata", {})

    metadata = {}
    lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            k, _, v = line[1:].strip().partition(": ")
            metadata[k] = json.loads(v)
        elif line.strip():
            lines.append(line)
    return [_metrics_row(r) for r in csv.DictReader(lines)], metadata

def _metrics_row(r: dict) -> MetricsRow:
    return MetricsRow(str(r["method"]), int(r["seed"]), int(r["task_index"]), float(r["mean_packets"]), float(r["std_packets"]))

def save_trajectories(runs, fpath: str):
    with open(fpath, mode="w", encoding="utf8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(TRAJECTORY_HEADER)
        for run in runs:
            for i, positions in enumerate(run.trajectories):
                for t, (x, y) in enumerate(positions):
                    writer.writerow([run.method, run.seed, i, t, repr(float(x)), repr(float(y))])
