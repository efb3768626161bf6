"""Regenerate tests/data/fef_oracle.json.

Runs the brute-force reference (10^5 Haar unitaries, hill-climbing from the
best 10) on every state with a FEF expectation in the test suite. Takes a
couple of minutes; the test suite only reads the frozen output.

    python tests/fef_oracle.py
"""

import json
from pathlib import Path

import numpy as np

from telewit.fef import brute_force_fef
from telewit.states import example_state, isotropic, validate

OUT = Path(__file__).parent / "data" / "fef_oracle.json"


def product00(n):
    M = np.zeros((n * n, n * n))
    M[0, 0] = 1
    return validate(M, n)


def cases():
    yield "bell_n2", isotropic(2, 1.0)
    yield "bell_n3", isotropic(3, 1.0)
    yield "product00_n2", product00(2)
    yield "product00_n3", product00(3)
    for n in (2, 3):
        for p in (0.2, 0.6, 1.0):
            yield f"isotropic_n{n}_p{p}", isotropic(n, p)
    yield "example_a0.8", example_state(0.8)
    yield "example_a0.3", example_state(0.3)
    yield "maximally_mixed_n2", validate(np.eye(4) / 4, 2)


def main():
    results = {}
    for name, rho in cases():
        value, _ = brute_force_fef(rho, samples=100_000, refine=10, seed=2024)
        results[name] = value
        print(f"{name:24s} {value:.12f}")
    OUT.write_text(json.dumps({"samples": 100_000, "refine": 10, "seed": 2024, "values": results}, indent=2) + "\n")


if __name__ == "__main__":
    main()
