#!/usr/bin/env python3
"""Build a 28x28 handwritten-digit dataset in IDX format.

Upsamples the scikit-learn digits set (8x8, 1797 images) to 28x28 and
augments it with small deterministic shifts to the requested set sizes.
Output files use the classic big-endian IDX layout (magic 0x00000803 for
images, 0x00000801 for labels).

Usage: make_digits_idx.py OUTPUT_DIR [N_TRAIN] [N_TEST]
"""

import struct
import sys
from pathlib import Path

import numpy as np
from scipy import ndimage
from sklearn import datasets


def write_idx_images(path: Path, images: np.ndarray) -> None:
    with open(path, "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(images), 28, 28))
        f.write(images.astype(np.uint8).tobytes())


def write_idx_labels(path: Path, labels: np.ndarray) -> None:
    with open(path, "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(labels)))
        f.write(labels.astype(np.uint8).tobytes())


def upsample(img8: np.ndarray) -> np.ndarray:
    img = ndimage.zoom(img8 / 16.0, 28 / 8, order=1, prefilter=False)
    return np.clip(img * 255.0, 0, 255)


def augment(pool: np.ndarray, labels: np.ndarray, n: int, rng: np.random.RandomState):
    out_images = np.empty((n, 28, 28), dtype=np.uint8)
    out_labels = np.empty(n, dtype=np.uint8)
    for i in range(n):
        j = rng.randint(len(pool))
        dx, dy = rng.randint(-1, 2, size=2)
        out_images[i] = np.roll(np.roll(pool[j], dy, axis=0), dx, axis=1)
        out_labels[i] = labels[j]
    return out_images, out_labels


def main() -> None:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data")
    n_train = int(sys.argv[2]) if len(sys.argv) > 2 else 10000
    n_test = int(sys.argv[3]) if len(sys.argv) > 3 else 1000
    out_dir.mkdir(parents=True, exist_ok=True)

    raw, labels = datasets.load_digits(return_X_y=True)
    images = np.stack([upsample(img.reshape(8, 8)) for img in raw]).astype(np.uint8)

    # disjoint source pools so no test digit appears in training
    n_test_pool = 300
    train_pool, train_pool_labels = images[:-n_test_pool], labels[:-n_test_pool]
    test_pool, test_pool_labels = images[-n_test_pool:], labels[-n_test_pool:]

    rng = np.random.RandomState(0)
    train_images, train_labels = augment(train_pool, train_pool_labels, n_train, rng)
    test_images, test_labels = augment(test_pool, test_pool_labels, n_test, rng)

    write_idx_images(out_dir / "train-images.idx", train_images)
    write_idx_labels(out_dir / "train-labels.idx", train_labels)
    write_idx_images(out_dir / "test-images.idx", test_images)
    write_idx_labels(out_dir / "test-labels.idx", test_labels)
    print(f"wrote {n_train} train / {n_test} test images to {out_dir}")


if __name__ == "__main__":
    main()
