from collections import defaultdict

import numpy as np

from . import MetricsRow, SummaryRow, EmptyMetricsError

def summarize(rows: list[MetricsRow]) -> list[SummaryRow]:
    # mean and population std across seeds, per (method, task index)
    if not rows:
        raise EmptyMetricsError("Nothing to summarize")
    groups = defaultdict(list)
    for row in rows:
        groups[(row.method, row.task_index)].append(row.mean_packets)

    methods = list(dict.fromkeys(row.method for row in rows))
    return [
        SummaryRow(method, i, float(np.mean(values)), float(np.std(values)))
        for method in methods
        for (m, i), values in sorted(groups.items(), key=lambda kv: kv[0][1])
        if m==method
    ]
