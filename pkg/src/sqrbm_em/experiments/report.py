"""
Comparison tables, learning-curve CSV/SVG and the results directory.

The SVG is rendered with matplotlib's Agg backend using a fixed hash salt and no
date metadata, so identical results give identical bytes.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import structlog  # noqa: E402

from ..core.errors import DomainError  # noqa: E402
from ..core.utils import read_json_object  # noqa: E402
from ..version import PRNG_ALGORITHM, __version__  # noqa: E402
from .harness import ExperimentResult  # noqa: E402
from .plan import plans_to_dict  # noqa: E402

logger = structlog.get_logger(__name__)

TABLE_COLUMNS = (
    "dataset",
    "n_visible",
    "n_hidden",
    "algorithm",
    "mean_final_kl",
    "std_final_kl",
    "runs",
    "failed",
    "epochs",
)
CURVE_COLUMNS = ("epoch", "algo", "mean_kl")
RESULT_FILES = ("table.csv", "curves.csv", "curves.svg", "result.json", "manifest.json")
_LOG_FLOOR = 1e-16


@dataclass
class ComparisonTable:
    rows: list[dict[str, Any]]

    def format_text(self) -> str:
        widths = {
            c: max(len(c), *(len(_cell(row[c])) for row in self.rows)) for c in TABLE_COLUMNS
        }
        header = "  ".join(c.ljust(widths[c]) for c in TABLE_COLUMNS)
        lines = [header, "  ".join("-" * widths[c] for c in TABLE_COLUMNS)]
        for row in self.rows:
            lines.append("  ".join(_cell(row[c]).ljust(widths[c]) for c in TABLE_COLUMNS))
        return "\n".join(lines)

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=TABLE_COLUMNS, lineterminator="\n")
            writer.writeheader()
            for row in self.rows:
                writer.writerow({c: _cell(row[c]) for c in TABLE_COLUMNS})


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6e}"
    return str(value)


def compare_table(results: list[ExperimentResult]) -> ComparisonTable:
    """
    One row per (dataset, N, M, algorithm) in plan then variant order.

    Raises:
        DomainError: If results is empty
    """
    if not results:
        raise DomainError("compare_table needs at least one result")
    rows = []
    for result in results:
        shape = result.plan.shape
        for summary in result.variants:
            rows.append(
                {
                    "dataset": result.name,
                    "n_visible": shape.n_visible,
                    "n_hidden": shape.n_hidden,
                    "algorithm": summary.label,
                    "mean_final_kl": summary.final_mean,
                    "std_final_kl": summary.final_std,
                    "runs": summary.runs,
                    "failed": summary.failed,
                    "epochs": result.n_epochs,
                }
            )
    return ComparisonTable(rows)


def _series_label(result: ExperimentResult, label: str, qualified: bool) -> str:
    return f"{result.name}:{label}" if qualified else label


def write_curves_csv(results: list[ExperimentResult], path: str | Path) -> None:
    """Rows (epoch, algo, mean_kl); algo is prefixed with the plan name for suites."""
    qualified = len(results) > 1
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CURVE_COLUMNS)
        for result in results:
            for summary in result.variants:
                algo = _series_label(result, summary.label, qualified)
                for epoch, value in enumerate(summary.mean_curve, start=1):
                    writer.writerow([epoch, algo, repr(value)])


def write_curves_svg(results: list[ExperimentResult], path: str | Path) -> None:
    """One panel per plan, one line per variant, log-scale KL axis."""
    with plt.rc_context({"svg.hashsalt": "sqrbm-em", "svg.fonttype": "path", "font.size": 8}):
        fig, axes = plt.subplots(
            1, len(results), figsize=(4 * len(results), 3), squeeze=False
        )
        for ax, result in zip(axes[0], results, strict=True):
            for summary in result.variants:
                if summary.runs and summary.mean_curve:
                    epochs = range(1, len(summary.mean_curve) + 1)
                    values = [max(v, _LOG_FLOOR) for v in summary.mean_curve]
                    ax.plot(epochs, values, label=summary.label, linewidth=1.2)
            ax.set_yscale("log")
            ax.set_title(result.name)
            ax.set_xlabel("epoch")
            ax.set_ylabel("mean KL")
            if ax.lines:
                ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)


def emit_curves(results: ExperimentResult | list[ExperimentResult], out_dir: str | Path) -> list[Path]:
    """
    Write curves.csv and curves.svg into out_dir.

    Raises:
        OSError: With the offending path, if a file cannot be written
    """
    if isinstance(results, ExperimentResult):
        results = [results]
    out = Path(out_dir)
    csv_path, svg_path = out / "curves.csv", out / "curves.svg"
    write_curves_csv(results, csv_path)
    write_curves_svg(results, svg_path)
    return [csv_path, svg_path]


def results_to_dict(results: list[ExperimentResult]) -> dict[str, Any]:
    return {"results": [result.to_dict() for result in results]}


def load_results(path: str | Path) -> list[ExperimentResult]:
    """Read a result.json written by write_results_dir."""
    payload = read_json_object(path, "Result file")
    try:
        return [ExperimentResult.from_dict(item) for item in payload["results"]]
    except (KeyError, TypeError, ValueError) as e:
        raise DomainError(f"Malformed result file {path}: {e}") from e


def write_results_dir(results: list[ExperimentResult], out_dir: str | Path) -> ComparisonTable:
    """Populate out_dir with table.csv, curves.csv, curves.svg, result.json and manifest.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    table = compare_table(results)
    table.write_csv(out / "table.csv")
    emit_curves(results, out)
    (out / "result.json").write_text(json.dumps(results_to_dict(results), indent=2), encoding="utf-8")

    manifest = {
        "tool": "sqrbm-em",
        "version": __version__,
        "prng": PRNG_ALGORITHM,
        "files": list(RESULT_FILES),
        **plans_to_dict([result.plan for result in results]),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    logger.info("results written", out_dir=str(out), plans=len(results))
    return table
