"""Regenerate fixtures/data/product_corpus.json.

Membership tables come from sympy Groebner bases in the polynomial ring.
The product ideals are primary to (x, y), so polynomial-ring membership
agrees with membership in the local ring.
"""

import json
import random
from pathlib import Path

from sympy import QQ, groebner, symbols

from merobound.arith.poly import SparsePoly
from merobound.ideal import ProductIdeal, monomials_below

SEED = 20240611
COUNT = 20
OUT = Path(__file__).resolve().parents[1] / "src" / "merobound" / "fixtures" / "data" / "product_corpus.json"


def random_factors(rng, heavy):
    while True:
        k = 3 if heavy else rng.randint(1, 3)
        ms = [rng.randint(3 if heavy else 1, 4) for _ in range(k)]
        if sum(ms) <= 12:
            break
    x = SparsePoly.var("x")
    out = []
    for m in ms:
        q = SparsePoly.const(0)
        for d in range(1, m):
            q = q + rng.randint(-3, 3) * x**d
        out.append((q, m))
    return out


def member_table(I):
    xs, ys = symbols("x y")
    gens = [g.subs({}, vars=("x", "y")) for g in I.gens()]
    G = groebner([sum(int(c.re) * xs**a * ys**b for (a, b), c in g.items()) for g in gens], xs, ys, order="grevlex", domain=QQ)
    members = []
    for a, b in monomials_below(I.bound + 1, 2):
        if G.contains(xs**a * ys**b):
            members.append([a, b])
    return members


def main():
    rng = random.Random(SEED)
    ideals = []
    for n in range(COUNT):
        factors = random_factors(rng, heavy=n % 5 == 4)
        I = ProductIdeal(tuple(factors))
        ideals.append(
            {
                "name": f"corpus_{n:02d}",
                "factors": [{"q": str(q), "m": m} for q, m in factors],
                "bound": I.bound,
                "members": member_table(I),
            }
        )
    doc = {
        "schema": 1,
        "name": "product_corpus",
        "kind": "product_corpus",
        "oracle": "sympy Groebner basis membership in Q[x, y]; seed %d" % SEED,
        "ideals": ideals,
    }
    OUT.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
