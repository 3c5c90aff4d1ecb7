#!/usr/bin/env python3
"""Regenerate the shipped Lebedev grid tables under data/grids/.

Writes one text file per order (rows: x y z w, weights normalized so they
sum to 1, i.e. sphere measure divided by 4*pi) plus a CHECKSUMS manifest
with FNV-1a-64 hashes of the file bytes, which the loader verifies.

Requires SciPy >= 1.15 (scipy.integrate.lebedev_rule).
"""

import os
import sys

import numpy as np
from scipy.integrate import lebedev_rule

ORDERS = [3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 29, 31,
          35, 41, 47, 53, 59, 65, 71, 77, 83, 89, 95, 101, 107, 113, 119, 125, 131]


def fnv1a64(data: bytes) -> str:
    h = 0xCBF29CE484222325
    for byte in data:
        h ^= byte
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return f"{h:016x}"


def check_antipodal(x: np.ndarray, w: np.ndarray) -> None:
    order = np.lexsort(x)
    key = {tuple(x[:, i]): w[i] for i in range(x.shape[1])}
    _ = order
    for i in range(x.shape[1]):
        partner = tuple(-x[:, i])
        if partner not in key or key[partner] != w[i]:
            raise SystemExit("grid not exactly antipodal; refusing to ship it")


def main() -> None:
    out_dir = os.path.join(os.path.dirname(__file__), "..", "data", "grids")
    os.makedirs(out_dir, exist_ok=True)
    manifest = []
    for order in ORDERS:
        x, w = lebedev_rule(order)
        w = w / (4.0 * np.pi)
        check_antipodal(x, w)
        name = f"lebedev_{order}.txt"
        lines = [f"# Lebedev grid, precision order {order}, {x.shape[1]} nodes",
                 "# columns: x y z weight   (weights sum to 1)"]
        for i in range(x.shape[1]):
            lines.append(f"{x[0, i]:.17e} {x[1, i]:.17e} {x[2, i]:.17e} {w[i]:.17e}")
        blob = ("\n".join(lines) + "\n").encode()
        with open(os.path.join(out_dir, name), "wb") as f:
            f.write(blob)
        manifest.append(f"{name} {fnv1a64(blob)}")
        print(f"{name}: {x.shape[1]} nodes, weight sum err {abs(w.sum() - 1.0):.2e}")
    with open(os.path.join(out_dir, "CHECKSUMS"), "w") as f:
        f.write("\n".join(manifest) + "\n")


if __name__ == "__main__":
    sys.exit(main())
