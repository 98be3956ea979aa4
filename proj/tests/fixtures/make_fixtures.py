#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the small CSV studies under tests/fixtures."""
import math
import pathlib
import random

HERE = pathlib.Path(__file__).resolve().parent
PLATES = ["A", "B", "C", "D"]
WELLS = 28
QC_EVERY = 7


def layout():
    wells = []
    order = 1
    for p in PLATES:
        for i in range(WELLS):
            qc = i % QC_EVERY == QC_EVERY // 2
            wells.append((order, f"{'QC' if qc else 'S'}{order:03d}", p, "QC" if qc else "experimental", i))
            order += 1
    return wells


def write(dirname, wells, columns, rows):
    d = HERE / dirname
    d.mkdir(exist_ok=True)
    with open(d / "samples.csv", "w", newline="\n") as f:
        f.write("run_order,sample_id,plate,sample_type\n")
        for w in wells:
            f.write(f"{w[0]},{w[1]},{w[2]},{w[3]}\n")
    with open(d / "intensities.csv", "w", newline="\n") as f:
        f.write("run_order," + ",".join(columns) + "\n")
        for w, row in zip(wells, rows):
            f.write(str(w[0]) + "," + ",".join(repr(round(v, 6)) for v in row) + "\n")


def main():
    rng = random.Random(20240611)
    wells = layout()
    offsets = {"A": 0.0, "B": 25.0, "C": -15.0, "D": 10.0}
    rows = []
    for order, _, plate, kind, pos in wells:
        qc = kind == "QC"
        base = 200.0 + rng.gauss(0, 6 if qc else 20)
        iid = 150.0 + rng.gauss(0, 5 if qc else 15)
        shifted = base + offsets[plate]
        drift = 30.0 * math.sin(2 * math.pi * pos / WELLS) if plate == "B" else 0.0
        drifting = 300.0 + offsets[plate] + drift + rng.gauss(0, 8 if qc else 20)
        rows.append([iid, shifted, drifting])
    write("golden", wells, ["glucose", "lactate", "alanine"], rows)
    write("constant_column", wells, ["glucose", "flat", "alanine"],
          [[r[0], 42.0, r[2]] for r in rows])
    no_qc = [(w[0], w[1], w[2], "experimental", w[4]) for w in wells]
    write("no_qc", no_qc, ["glucose", "lactate", "alanine"], rows)


if __name__ == "__main__":
    main()
