"""Distributed function evaluation with nonlocal boxes.

Three parties hold trits x, y, z and want everyone to learn F(x, y, z).
Classically that costs chatter; with a supply of functional boxes the
parties push each monomial of F through a box, add their shares locally,
and need only n-1 = 2 trits of broadcast.  The second half shows the
reverse direction: a box for a product-like F can emulate the standard
PR box after derivative and affine corrections.
"""

import itertools

import numpy as np

from lingame.boxworld import (FunctionTable, FunctionalBox, cc_protocol,
                              interpolate_polynomial, partial_derivative,
                              reduce_to_pr, simulate_pr_from_functional)


def main():
    rng = np.random.default_rng(7)
    grid = list(itertools.product(range(3), repeat=3))

    values = [int(v) for v in rng.integers(0, 3, size=27)]
    table = FunctionTable(3, (1, 1, 1), values)
    coeffs = interpolate_polynomial(table)
    print("a random F: Z_3 x Z_3 x Z_3 -> Z_3 as a polynomial:")
    terms = [f"{c}*x^{e[0]} y^{e[1]} z^{e[2]}" for e, c in coeffs.monomials()]
    print("  F =", " + ".join(terms) if terms else "0")

    print()
    print("protocol run on every input (27 boxes, 2 trits broadcast):")
    failures = 0
    for inputs in grid:
        transcript = cc_protocol(table, inputs, rng)
        failures += transcript.result != table.value(inputs)
    sample = cc_protocol(table, (1, 2, 0), rng)
    print(f"  boxes used {sample.boxes_used}, "
          f"dits communicated {sample.dits_communicated}, "
          f"failures {failures}/27")

    print()
    print("reduction: which boxes can stand in for a PR box?")
    xyz = FunctionTable(3, (1, 1, 1), [x * y * z % 3 for x, y, z in grid])
    additive = FunctionTable(3, (1, 1, 1), [(x + y + z) % 3
                                            for x, y, z in grid])
    curved = FunctionTable(3, (1, 1, 1), [(2 * x * x * y * z + x * y * z) % 3
                                          for x, y, z in grid])
    for name, candidate in [("x*y*z", xyz), ("x+y+z", additive),
                            ("2x^2yz+xyz", curved)]:
        reduction = reduce_to_pr(candidate)
        if reduction is None:
            print(f"  {name:12} not reducible (no derivative order leaves "
                  f"a clean product)")
        else:
            print(f"  {name:12} reducible: derivative order "
                  f"{reduction.order}, lambda {reduction.lam}")
            der = candidate
            for var, times in enumerate(reduction.order):
                for _ in range(times):
                    der = partial_derivative(der, var)
            print(f"               after derivatives: "
                  f"{interpolate_polynomial(der).monomials()}")

    print()
    print("simulating PR_3-3 from the curved box, input (1, 2, 1):")
    reduction = reduce_to_pr(curved)
    box = FunctionalBox(curved)
    counts = np.zeros((3, 3, 3), dtype=int)
    for _ in range(3000):
        a, b, c = simulate_pr_from_functional(box, reduction, (1, 2, 1), rng)
        assert (a + b + c) % 3 == 2  # 1*2*1 mod 3
        counts[a, b, c] += 1
    marginals = [counts.sum(axis=tuple(j for j in range(3) if j != i))
                 for i in range(3)]
    for i, m in enumerate(marginals):
        print(f"  party {i} output frequencies: "
              f"{np.array2string(m / m.sum(), precision=3)}")
    print("  constraint a+b+c = x*y*z held on every sample")


if __name__ == "__main__":
    main()
