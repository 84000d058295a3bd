import csv
import math
import sys

import matplotlib.pyplot as plt


def load_rows(filepath):
    with open(filepath, 'r', newline='') as f:
        return list(csv.DictReader(f))


def _series(rows, column):
    return [float(row['snr_db']) for row in rows], [float(row[column]) for row in rows]


def sum_rate_graph(filepaths, output=None):
    """Sum rate against snr_db for `bound` CSVs (column total) and `sim` CSVs (column sum_rate)."""
    plt.figure(figsize=(8, 5))
    for filepath in filepaths:
        rows = load_rows(filepath)
        if not rows:
            print(f"No rows in {filepath}. Skipping.")
            continue
        if 'total' in rows[0]:
            db, values = _series(rows, 'total')
            plt.plot(db, values, linestyle='--', color="black", label="upper bound")
        else:
            db, values = _series(rows, 'sum_rate')
            plt.plot(db, values, marker='o', label=rows[0]['scheme'])

    plt.title("Sum Rate")
    plt.xlabel("SNR (dB)")
    plt.ylabel("Sum rate (nats per channel use)")
    plt.legend()
    plt.grid(True, alpha=0.3)
    plt.tight_layout()
    _finish(output)


def ratio_graph(filepaths, output=None):
    """Sum rate divided by ln(1 + snr); the bound tends to 2/3."""
    plt.figure(figsize=(8, 5))
    for filepath in filepaths:
        rows = load_rows(filepath)
        if not rows:
            print(f"No rows in {filepath}. Skipping.")
            continue
        column = 'total' if 'total' in rows[0] else 'sum_rate'
        label = "upper bound" if column == 'total' else rows[0]['scheme']
        db = [float(row['snr_db']) for row in rows]
        ratios = [float(row[column]) / math.log1p(float(row['snr'])) for row in rows]
        plt.plot(db, ratios, marker='.', label=label)

    plt.axhline(2.0 / 3.0, color="cornflowerblue", linestyle=':', label="2/3")
    plt.title("Ratio to ln(1 + SNR)")
    plt.xlabel("SNR (dB)")
    plt.ylabel("Ratio")
    plt.legend()
    plt.tight_layout()
    _finish(output)


def _finish(output):
    if output:
        plt.savefig(output)
        plt.close()
    else:
        plt.show()


if __name__ == "__main__":
    # python results/graphs.py bound.csv sim_cooperative.csv sim_zf-imperfect.csv
    sum_rate_graph(sys.argv[1:])
    ratio_graph(sys.argv[1:])
