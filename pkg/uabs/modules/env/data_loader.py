import csv
from os import path

import numpy as np
import yaml

from uabs.core.data import ConfigValueError
from . import AreaSpec, WaypointPath, GueSpec, TrafficMode, TrafficPattern, TaskConfig, TraceTrack, TraceFormatError

TRACE_HEADER = ["gue_id", "t", "x", "y"]

def ingest_trace(fpath: str, area: AreaSpec=None, p_msg: float=1.0) -> TrafficPattern:
    """Read a `gue_id,t,x,y` trace into a playback traffic pattern.

    Rows are sorted by (gue_id, t) and every GUE's steps are contiguous; a GUE
    is active exactly on the steps listed for it.
    """
    tracks: dict[int, tuple[int, list]] = {}
    prev = None

    with open(fpath, mode="r", encoding="utf8", newline="") as fp:
        reader = csv.reader(fp)
        header = next(reader, None)
        if header is None:
            raise TraceFormatError("no GUEs", 0)
        if [h.strip() for h in header]!=TRACE_HEADER:
            raise TraceFormatError(f"header must be '{','.join(TRACE_HEADER)}'", 1)

        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row)!=4:
                raise TraceFormatError(f"expected 4 fields, got {len(row)}", line)
            try:
                gue_id, t = int(row[0]), int(row[1])
                x, y = float(row[2]), float(row[3])
            except ValueError:
                raise TraceFormatError(f"malformed row {row}", line) from None
            if gue_id<0 or t<1 or not (np.isfinite(x) and np.isfinite(y)):
                raise TraceFormatError(f"malformed row {row}", line)
            if area is not None and not area.contains((x, y)):
                raise TraceFormatError(f"position ({x}, {y}) outside the area", line)

            if prev is not None and (gue_id, t)<=prev:
                raise TraceFormatError(f"rows not sorted by (gue_id, t) at GUE {gue_id} t={t}", line)
            if gue_id in tracks:
                start, points = tracks[gue_id]
                if t!=start+len(points):
                    raise TraceFormatError(f"non-contiguous timestamps for GUE {gue_id}: t={t} after t={start+len(points)-1}", line)
                points.append((x, y))
            else:
                tracks[gue_id] = (t, [(x, y)])
            prev = (gue_id, t)

    if not tracks:
        raise TraceFormatError("no GUEs", reader.line_num)

    return TrafficPattern(
        p_msg=p_msg, mode=TrafficMode.TracePlayback,
        trace={g: TraceTrack(start, np.array(points)) for g, (start, points) in tracks.items()},
    )

def save_trace(traffic: TrafficPattern, fpath: str, horizon: int):
    from .world import tabulate_traffic
    positions, active = tabulate_traffic(traffic, horizon)
    with open(fpath, mode="w", encoding="utf8", newline="") as fp:
        writer = csv.writer(fp)
        writer.writerow(TRACE_HEADER)
        for g, gue_id in enumerate(traffic.gue_ids):
            for t in np.flatnonzero(active[:, g]):
                x, y = positions[t, g]
                writer.writerow([gue_id, int(t), repr(float(x)), repr(float(y))])

def load_task_manifest(fpath: str) -> TaskConfig:
    with open(fpath, mode="r", encoding="utf8") as fp:
        m: dict = yaml.safe_load(fp) or {}

    try:
        width, height = m['area']
        area = AreaSpec(width, height, m.get('altitude', 100.0))
        p_msg = m.get('p_msg', 1.0)
        if (trace_rel_path:=m.get('trace')) is not None:
            traffic = ingest_trace(path.join(path.dirname(fpath), trace_rel_path), area, p_msg)
        else:
            gues = [
                GueSpec(WaypointPath(g['path'], area), g['speed'], g['start_time'])
                for g in m['gues']
            ]
            traffic = TrafficPattern(gues=gues, p_msg=p_msg)
        return TaskConfig(
            name=m.get('name', path.splitext(path.basename(fpath))[0]),
            uabs_start=m['uabs_start'], traffic=traffic, horizon=m['horizon'],
            area=area, uabs_speed=m.get('uabs_speed', 1.0),
        )
    except (KeyError, TypeError) as e:
        raise ConfigValueError(f"Malformed task manifest '{fpath}': {e!r}") from e

def save_task_manifest(task: TaskConfig, fpath: str, trace_fpath: str=None):
    # waypoint patterns are written inline unless a trace file is requested
    area = task.area
    m = {
        'name': task.name,
        'area': [area.width, area.height],
        'altitude': area.uabs_altitude,
        'uabs_start': task.uabs_start.tolist(),
        'uabs_speed': task.uabs_speed,
        'p_msg': task.traffic.p_msg,
        'horizon': task.horizon,
    }
    if trace_fpath is not None or task.traffic.mode==TrafficMode.TracePlayback:
        trace_fpath = trace_fpath or path.splitext(fpath)[0] + ".csv"
        save_trace(task.traffic, trace_fpath, task.horizon)
        m['trace'] = path.relpath(trace_fpath, path.dirname(fpath) or ".")
    else:
        m['gues'] = [
            {'path': g.path.points.tolist(), 'speed': g.speed, 'start_time': g.start_time}
            for g in task.traffic.gues
        ]

    with open(fpath, mode="w", encoding="utf8") as fp:
        yaml.safe_dump(m, fp, sort_keys=False)
