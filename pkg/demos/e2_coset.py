"""Project rigid motions of the plane onto the Heisenberg chart of SL(3) by a UL factorization.

Run with ``python demos/e2_coset.py``.
"""
import math

from tanaka import catalog
from tanaka.contact import NoIntersection, R_chart


def main():
    model = catalog.load("e2-matrix-model")
    for y1 in (0.0, 0.4, 1.2, math.pi / 2):
        try:
            g, _q = model.project(R_chart(y1, 1.0, -2.0))
            image = (g[0, 1], g[1, 2], g[0, 2])
            print(f"y1 = {y1:.4f}: H{tuple(round(float(c), 12) for c in image)}  (tan y1 = {math.tan(y1):.12f})")
        except NoIntersection as exc:
            print(f"y1 = {y1:.4f}: {exc}")


if __name__ == "__main__":
    main()
