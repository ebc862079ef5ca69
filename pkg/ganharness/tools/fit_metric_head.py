"""Fit the frozen classifier head used by the inception-style score.

A multinomial logistic regression is trained once on pooled perceptual
features of the procedural 10-class dataset and the resulting weights are
frozen into the package as data/metric_head_v1.npy, a (10, 49) float32
matrix holding the class weights with the bias as the last column. The
artifact is versioned: rerunning this script on a different sklearn build
may shift the low-order bits, so shipped scores are tied to the committed
file, not to this script.

    python tools/fit_metric_head.py --out src/ganharness/data/metric_head_v1.npy
"""

import argparse
import sys
from pathlib import Path

import numpy as np
from sklearn.linear_model import LogisticRegression

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from ganharness.metric import PerceptualMetric
from ganharness.synth import synth_dataset

FIT_SEED = 20260815
PER_CLASS = 200


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", required=True, help="output .npy path")
    parser.add_argument("--per-class", type=int, default=PER_CLASS)
    parser.add_argument("--seed", type=int, default=FIT_SEED)
    args = parser.parse_args(argv)

    images, labels = synth_dataset(args.per_class, seed=args.seed)
    u8 = np.clip(
        np.round((images.transpose(0, 2, 3, 1) + 1.0) * 127.5), 0, 255
    ).astype(np.uint8)

    metric = PerceptualMetric.__new__(PerceptualMetric)
    arrays = PerceptualMetric._builtin_conv_weights()
    metric.convs = [arrays[f"conv{i + 1}"] for i in range(len(arrays))]
    feats = metric.embed_features(u8).astype(np.float64)

    clf = LogisticRegression(C=10.0, max_iter=2000)
    clf.fit(feats, labels)
    print(f"training accuracy: {clf.score(feats, labels):.4f}")

    head = np.concatenate(
        [clf.coef_.astype(np.float32), clf.intercept_.astype(np.float32)[:, None]],
        axis=1,
    )
    np.save(args.out, head)
    print(f"wrote {args.out} with shape {head.shape}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
