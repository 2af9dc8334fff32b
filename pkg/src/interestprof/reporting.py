"""Artifact writers shared by the CLI subcommands.

Floats are emitted with at most 9 significant digits (shortest representation
that round-trips the rounded value), which keeps repeated runs byte-identical.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .correlation import CorrelationMatrix
from .evaluation import EvalReport
from .ingest import ProfileDataset
from .ontometrics import SemioticReport, SizeMetrics, StructuralMetrics
from .profiling import UserProfile
from .scoring import TopicDistribution, build_matrices
from .svgchart import heatmap, line_chart
from .taxonomy import TOPICS, Taxonomy


def fmt_float(x: float) -> str:
    return f"{x:.9g}"


def round9(x: float) -> float:
    return float(f"{x:.9g}")


def json_ready(obj):
    """Recursively convert a payload to JSON-serializable values with 9-digit floats."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return None if math.isnan(obj) else round9(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Mapping):
        return {str(k): json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_ready(v) for v in obj]
    if hasattr(obj, "tolist"):  # numpy arrays and scalars
        return json_ready(obj.tolist())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_text(path: Path, content: str) -> None:
    path.write_text(content, encoding="utf-8")


def write_json(path: Path, payload) -> None:
    write_text(path, json.dumps(json_ready(payload), indent=2) + "\n")


def distribution_payload(v: TopicDistribution) -> dict[str, float]:
    return v.as_dict()


def profile_payload(p: UserProfile) -> dict:
    return {
        "user_id": p.user_id,
        "n_images": p.n_images,
        "mechanism": p.mechanism,
        "v_prob": distribution_payload(p.v_prob),
        "v_occ": distribution_payload(p.v_occ),
        "predicted_topic": p.predicted_topic,
        "ties": list(p.ties),
    }


def write_profiles(outdir: Path, profiles: Sequence[UserProfile],
                   sweep_map: Mapping[int, Sequence[UserProfile]] | None = None) -> None:
    write_json(outdir / "profiles.json", [profile_payload(p) for p in profiles])
    if sweep_map is not None:
        write_json(
            outdir / "profiles_sweep.json",
            {str(k): [profile_payload(p) for p in ps] for k, ps in sweep_map.items()},
        )


def write_metrics(outdir: Path, size: SizeMetrics, structural: StructuralMetrics,
                  semiotic: SemioticReport) -> None:
    payload = {
        "size": {
            "size_c": size.size_c,
            "size_i": size.size_i,
            "size_a": size.size_a,
            "size_r": size.size_r,
            "size_total": size.size_total,
        },
        "structural": {
            "n_rn": structural.n_rn,
            "n_ln": structural.n_ln,
            "max_spl": structural.max_spl,
            "n_ic": structural.n_ic,
            "tnrnr": structural.tnrnr,
            "anrnr": structural.anrnr,
        },
        "semiotic": {
            "lawfulness": semiotic.lawfulness,
            "richness": semiotic.richness,
            "interpretability": semiotic.interpretability,
            "consistency": semiotic.consistency,
            "clarity": semiotic.clarity,
            "comprehensiveness": semiotic.comprehensiveness,
            "accuracy": semiotic.accuracy,
        },
    }
    write_json(outdir / "ontology_metrics.json", payload)
    write_text(outdir / "ontology_metrics.txt", metrics_table(payload))


def metrics_table(payload: Mapping) -> str:
    lines = []
    for section, values in payload.items():
        lines.append(section)
        width = max(len(k) for k in values)
        for key, value in values.items():
            if isinstance(value, bool):
                value = "pass" if value else "fail"
            lines.append(f"  {key:<{width}}  {value}")
        lines.append("")
    return "\n".join(lines)


def write_scores(outdir: Path, dataset: ProfileDataset, tax: Taxonomy, k: int) -> None:
    header = "user_id,image_id," + ",".join(TOPICS) + ",unmapped\n"
    prob_lines = [header]
    occ_lines = [header]
    for user in dataset.users():
        m = build_matrices(dataset.records[user], tax, k)
        for image_id, prob_row, occ_row in zip(m.image_ids, m.prob_rows, m.occ_rows):
            prefix = f"{user},{image_id},"
            prob_lines.append(
                prefix + ",".join(fmt_float(s) for s in prob_row.scores)
                + f",{fmt_float(prob_row.unmapped_mass)}\n"
            )
            occ_lines.append(
                prefix + ",".join(fmt_float(s) for s in occ_row.scores)
                + f",{fmt_float(occ_row.unmapped_mass)}\n"
            )
    write_text(outdir / "image_scores_prob.csv", "".join(prob_lines))
    write_text(outdir / "image_scores_occ.csv", "".join(occ_lines))


def _matrix_csv(col_labels: Sequence[str], row_labels: Sequence[str],
                cells: Sequence[Sequence[str]]) -> str:
    lines = ["topic," + ",".join(col_labels) + "\n"]
    for name, row in zip(row_labels, cells):
        lines.append(name + "," + ",".join(row) + "\n")
    return "".join(lines)


def write_correlation(outdir: Path, corr: CorrelationMatrix, co_interest) -> None:
    n = len(TOPICS)
    rho_cells = [
        ["" if corr.value(i, j) is None else fmt_float(corr.value(i, j)) for j in range(n)]
        for i in range(n)
    ]
    write_text(outdir / "pearson.csv", _matrix_csv(TOPICS, TOPICS, rho_cells))
    write_text(
        outdir / "pearson_bands.csv",
        _matrix_csv(TOPICS, TOPICS, [list(row) for row in corr.bands]),
    )
    write_text(
        outdir / "pearson_heatmap.svg",
        heatmap(
            [[corr.value(i, j) for j in range(n)] for i in range(n)],
            TOPICS,
            title="Pearson correlation between topic scores",
        ),
    )
    co_cells = [[fmt_float(float(co_interest[i][j])) for j in range(n)] for i in range(n)]
    write_text(outdir / "co_interest.csv", _matrix_csv(TOPICS, TOPICS, co_cells))


def write_evaluation(outdir: Path, report: EvalReport) -> None:
    payload = {
        "mechanism": report.mechanism,
        "sweep": list(report.sweep),
        "n_labeled": report.n_labeled,
        "overall_accuracy": {str(k): v for k, v in report.overall_accuracy.items()},
        "overall_accuracy_by_mechanism": {
            m: {str(k): v for k, v in accs.items()}
            for m, accs in report.overall_accuracy_by_mechanism.items()
        },
        "per_topic_accuracy": {
            t: {str(k): v for k, v in accs.items()}
            for t, accs in report.per_topic_accuracy.items()
        },
        "precision": report.precision,
        "recall": report.recall,
        "undefined_precision": list(report.undefined_precision),
        "undefined_recall": list(report.undefined_recall),
        "confusion": [list(row) for row in report.confusion],
        "cmc": [list(point) for point in report.cmc],
        "roc": {t: [list(p) for p in pts] for t, pts in report.roc_points.items()},
    }
    write_json(outdir / "report.json", payload)

    ks = list(report.sweep)
    lines = ["topic," + ",".join(f"k={k}" for k in ks) + "\n"]
    for topic in TOPICS:
        accs = report.per_topic_accuracy[topic]
        lines.append(
            topic + "," + ",".join(
                "" if accs[k] is None else fmt_float(accs[k]) for k in ks
            ) + "\n"
        )
    lines.append(
        "overall," + ",".join(fmt_float(report.overall_accuracy[k]) for k in ks) + "\n"
    )
    write_text(outdir / "accuracy_by_topic.csv", "".join(lines))

    write_text(
        outdir / "confusion.csv",
        _matrix_csv(TOPICS, TOPICS, [[str(c) for c in row] for row in report.confusion]),
    )

    write_text(
        outdir / "cmc.csv",
        "rank,fraction\n" + "".join(f"{r},{fmt_float(f)}\n" for r, f in report.cmc),
    )

    write_text(
        outdir / "precision_recall.csv",
        "topic,precision,recall\n" + "".join(
            f"{t},{fmt_float(report.precision[t])},{fmt_float(report.recall[t])}\n"
            for t in TOPICS
        ),
    )

    write_text(
        outdir / "roc_points.csv",
        "topic,threshold,fpr,tpr\n" + "".join(
            f"{t},{fmt_float(th)},{fmt_float(fpr)},{fmt_float(tpr)}\n"
            for t in TOPICS
            for th, fpr, tpr in report.roc_points[t]
        ),
    )

    write_text(
        outdir / "cmc.svg",
        line_chart(
            [("CMC", [(float(r), f) for r, f in report.cmc])],
            title="Cumulative match characteristic",
            x_label="rank",
            y_label="fraction matched",
            y_min=0.0,
            y_max=1.0,
        ),
    )
    sweep_series = [
        (
            mech,
            [(float(k), report.overall_accuracy_by_mechanism[mech][k]) for k in ks],
        )
        for mech in sorted(report.overall_accuracy_by_mechanism)
    ]
    write_text(
        outdir / "accuracy_sweep.svg",
        line_chart(
            sweep_series,
            title="Overall accuracy vs images per user",
            x_label="images per user",
            y_label="accuracy",
            y_min=0.0,
            y_max=1.0,
        ),
    )
