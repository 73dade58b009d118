"""
Field Health Check: identcert
Purpose:
- Prove modular arithmetic and elimination work on this machine
- Prove the seeded stream is reproducible
NO pytest. NO mocks. NO abstractions.
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))

from services.exactlin.field import PrimeField
from services.exactlin.matrix import Matrix, kernel, rank
from services.exactlin.rng import RngState, random_vector
from services.segre.model import Format
from services.wdcheck.checker import secant_dimension


def main():
    print("=== identcert Field Health Check ===")

    field = PrimeField()
    print("\n[Field]")
    print("prime:", field.p)
    print("inverse of 2:", field.inv(2), "check:", (2 * field.inv(2)) % field.p)

    print("\n[Elimination]")
    m = Matrix.from_rows(field, [[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    print("rank (expect 2):", rank(m))
    print("kernel rows (expect 1):", kernel(m).rows)

    print("\n[Seeded stream]")
    a = random_vector(4, RngState(7), field)
    b = random_vector(4, RngState(7), field)
    print("same seed, same vector:", bool((a == b).all()), a.tolist())

    print("\n[Secant]")
    actual, expected = secant_dimension(Format.of(3, 3, 3), 4, RngState(0), field)
    print(f"3x3x3, k=4: span {actual} of expected {expected} (expect 26 of 27)")

    print("\n=== Field Health Check COMPLETE ===")


if __name__ == "__main__":
    main()
