"""Generate projector lattices from seed rays and tabulate how Born
valuations of a few density matrices sit inside the state space.

Usage: python3 scripts/born_demo.py [--seed N]
"""

import argparse
import math

import numpy as np

from qlprob.classify import classify
from qlprob.hilbert import (
    born_valuation,
    generate_sublattice,
    max_mixed,
    pure,
    random_density,
    subspace_from_vectors,
)
from qlprob.states import is_state, subadditivity_scan


def show(ortho, embedding, rho, label):
    valuation = born_valuation(rho, ortho, embedding)
    verdict = is_state(ortho, valuation, tolerance=1e-8)
    cells = ", ".join(
        f"{name}={valuation.value(name):.4f}"
        for name, sub in zip(ortho.names, embedding) if sub.dim == 1
    )
    print(f"  {label}: {cells}  [state: {verdict.passed}]")
    hits = subadditivity_scan(ortho, valuation, tolerance=1e-9)
    for hit in hits:
        print(f"    defect {hit.defect:.4f} on join of {hit.pair}")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)

    r = 1 / math.sqrt(2)
    print("two rays in dimension 2 (|0> and |+>):")
    seeds2 = [subspace_from_vectors(2, [[1, 0]]),
              subspace_from_vectors(2, [[r, r]])]
    ortho2, embed2 = generate_sublattice(seeds2)
    print(f"  closure has {ortho2.n} elements;",
          f"blocks={len(classify(ortho2).blocks)}")
    show(ortho2, embed2, max_mixed(2), "maximally mixed")
    show(ortho2, embed2, pure([0, 1]), "pure |1>")
    show(ortho2, embed2, random_density(2, rng), "random rho")

    print("\naxes plus a tilted ray in dimension 3:")
    seeds3 = [subspace_from_vectors(3, [v]) for v in
              ([1, 0, 0], [0, 1, 0], [0, 0, 1], [r, r, 0])]
    ortho3, embed3 = generate_sublattice(seeds3)
    report = classify(ortho3)
    print(f"  closure has {ortho3.n} elements;",
          f"modular={report.is_modular},",
          f"distributive={report.is_distributive}")
    show(ortho3, embed3, max_mixed(3), "maximally mixed")
    show(ortho3, embed3, random_density(3, rng), "random rho")


if __name__ == "__main__":
    main()
