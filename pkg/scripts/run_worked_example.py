#!/usr/bin/env python3
"""Score the shipped single-image example and print both mechanisms' output.

Usage: python scripts/run_worked_example.py
"""

from pathlib import Path

from interestprof.ingest import load_predictions
from interestprof.profiling import profile_user
from interestprof.scoring import score_image_occ, score_image_prob
from interestprof.taxonomy import load_taxonomy, topic_of_instance

ROOT = Path(__file__).resolve().parent.parent


def main() -> None:
    tax = load_taxonomy(ROOT / "data" / "uio-starter.taxonomy")
    with open(ROOT / "data" / "worked-example.jsonl", encoding="utf-8") as fh:
        dataset = load_predictions(fh)
    (record,) = dataset.records["u1"]

    print(f"user {record.user_id}, image {record.image_id}")
    for label, prob in record.predictions:
        print(f"  {label:<10} p={prob:.2f}  ->  {topic_of_instance(tax, label)}")

    prob_row = score_image_prob(record, tax)
    occ_row = score_image_occ(record, tax, k=5)
    print("\nimage-level probability scores:", prob_row.nonzero())
    print("image-level occurrence scores: ", occ_row.nonzero())

    profile = profile_user(dataset.records["u1"], tax, k=5, mechanism="occ")
    print("\nuser vector (prob):", {t: round(s, 4) for t, s in profile.v_prob.nonzero().items()})
    print("user vector (occ): ", profile.v_occ.nonzero())
    print("predicted topic:   ", profile.predicted_topic)


if __name__ == "__main__":
    main()
