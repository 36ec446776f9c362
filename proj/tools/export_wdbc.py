"""Write the Wisconsin diagnostic breast cancer data (569 x 30) as label,f1..f30 CSV.

Malignant is +1, benign -1. Uses the copy bundled with scikit-learn.
"""
import sys

from sklearn.datasets import load_breast_cancer


def main(path):
    data = load_breast_cancer()
    with open(path, "w") as out:
        for row, target in zip(data.data, data.target):
            label = 1 if target == 0 else -1
            out.write(",".join([str(label)] + [repr(float(v)) for v in row]) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
