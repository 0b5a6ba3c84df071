"""
Aggregation of per-seed reports into mean and sample standard deviation.
"""

from typing import Dict, List, Sequence

import numpy as np
import pandas as pd

from riff.cli.utils.errors import DataError
from riff.src.be.evaluation.models import AggregateReport, AggregateRow, MetricsReport, MetricSummary

AGGREGATED_METRICS = ["recall_at_budget", "conservative_recall", "budget_metric_value", "rule_count"]

_COLUMN_TITLES = {
    "recall_at_budget": "Recall",
    "conservative_recall": "Conservative recall",
    "budget_metric_value": "Budget value",
    "rule_count": "Rule count",
}


def reports_frame(reports: Sequence[MetricsReport]) -> pd.DataFrame:
    rows = []
    for report in reports:
        row = report.model_dump(mode="json")
        row["configuration"] = report.configuration
        rows.append(row)
    return pd.DataFrame(rows)


def aggregate_runs(reports: Sequence[MetricsReport]) -> AggregateReport:
    """
    Mean and sample (n-1) standard deviation per metric and configuration.

    A configuration seen once gets std 0 and ``single_run`` set. Metrics that
    do not apply (rule count for score models) are left out of that row.
    """
    if not reports:
        raise DataError("Nothing to aggregate: no reports")
    frame = reports_frame(reports)

    rows: List[AggregateRow] = []
    for configuration, group in frame.groupby("configuration", sort=False):
        metrics: Dict[str, MetricSummary] = {}
        for metric in AGGREGATED_METRICS:
            values = group[metric].dropna().astype(float)
            if values.empty:
                continue
            std = float(values.std(ddof=1)) if len(values) > 1 else 0.0
            metrics[metric] = MetricSummary(mean=float(values.mean()), std=0.0 if np.isnan(std) else std)
        first = group.iloc[0]
        rows.append(AggregateRow(
            configuration=configuration,
            source=first["source"],
            model_kind=first["model_kind"] if isinstance(first["model_kind"], str) else None,
            n=len(group),
            single_run=len(group) == 1,
            metrics=metrics,
        ))

    head = reports[0]
    return AggregateReport(
        split_name=head.split_name,
        budget_metric=head.budget_metric,
        budget_max=head.budget_max,
        rows=rows,
    )


def format_aggregate(aggregate: AggregateReport) -> str:
    """Aligned plain-text table with ``mean ± std`` cells."""
    records = []
    for row in aggregate.rows:
        record = {"Configuration": row.configuration, "n": row.n}
        for metric, title in _COLUMN_TITLES.items():
            summary = row.metrics.get(metric)
            if metric == "rule_count":
                record[title] = f"{summary.mean:.1f} ± {summary.std:.1f}" if summary else "-"
            else:
                record[title] = f"{summary.mean:.3f} ± {summary.std:.3f}" if summary else "-"
        records.append(record)

    title = (
        f"Recall at {aggregate.budget_metric.value} <= {aggregate.budget_max:g} "
        f"on the {aggregate.split_name} split"
    )
    table = pd.DataFrame(records).to_string(index=False) if records else "(no results)"
    return f"{title}\n{table}\n"
