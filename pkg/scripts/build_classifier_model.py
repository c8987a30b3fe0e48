#!/usr/bin/env python3
"""Fit the baseline gesture classifier and export its centroid model.

Also writes one silhouette PGM per gesture so the `classify` subcommand
has something to chew on out of the box.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from gestureswarm.classifier import CentroidClassifier
from gestureswarm.images import save_binary
from gestureswarm.silhouettes import sample_set


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "out")
    parser.add_argument("--per-class", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    samples = sample_set(per_class=args.per_class, seed=args.seed)
    clf = CentroidClassifier.fit(samples)
    hits = sum(clf.classify(img)[0] is gesture for gesture, img in samples)
    print(f"fitted on {len(samples)} silhouettes; training recovery {hits}/{len(samples)}")

    args.out.mkdir(parents=True, exist_ok=True)
    model_path = args.out / "classifier_model.json"
    clf.save(model_path)
    print(f"wrote {model_path}")

    sample_dir = args.out / "silhouettes"
    sample_dir.mkdir(exist_ok=True)
    seen = set()
    for gesture, img in samples:
        if gesture in seen:
            continue
        seen.add(gesture)
        save_binary(img, sample_dir / f"{gesture.value.lower()}.pgm")
    print(f"wrote {len(seen)} example silhouettes to {sample_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
