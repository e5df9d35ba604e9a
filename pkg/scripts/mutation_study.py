"""How often do the doubling conditions and the Jordan check on the double disagree under bracket mutations?"""
import argparse
import random
from collections import Counter

from kanjordan.kantor import check_kantor_conditions, grassmann_poisson, kantor_double
from kanjordan.scalars import FieldContext
from kanjordan.superalg import check_jordan_superidentity


def mutate(A, rng):
    while True:
        i, j, k = (rng.randrange(A.dim) for _ in range(3))
        if (A.dot.parity[i] + A.dot.parity[j]) % 2 == A.dot.parity[k]:
            break
    entry = dict(A.bracket.product.get((i, j), ()))
    entry[k] = entry.get(k, 0) + rng.choice([1, -1, 2, 3])
    return A.with_bracket_entry(i, j, list(entry.items())), (A.dot.labels[i], A.dot.labels[j], A.dot.labels[k])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--field", default="Q")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    ctx = FieldContext.from_name(args.field)
    A = grassmann_poisson(args.n, ctx)
    rng = random.Random(args.seed)
    tally = Counter()
    for _ in range(args.trials):
        B, where = mutate(A, rng)
        cond = check_kantor_conditions(B, 1).ok
        jord = check_jordan_superidentity(kantor_double(B), 1).ok
        tally[(cond, jord)] += 1
        if cond or jord:
            print("undetected by one checker:", where, "conditions ok" if cond else "", "double ok" if jord else "")
    for (cond, jord), k in sorted(tally.items()):
        print(f"conditions {'pass' if cond else 'fail'} / double {'pass' if jord else 'fail'}: {k}")


if __name__ == "__main__":
    main()
