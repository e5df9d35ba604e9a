"""Time the exhaustive Jordan check on Kan(n) and on the tensor doubles, for several thread counts."""
import argparse
import json
import time

from kanjordan.kantor import build_kan
from kanjordan.scalars import FieldContext
from kanjordan.superalg import check_jordan_superidentity
from kanjordan.tensor import build_J_GnT_alpha


def bench(table, threads, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        rep = check_jordan_superidentity(table, threads=threads)
        best = min(best, time.perf_counter() - t0)
    return rep, best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--field", default="Q")
    ap.add_argument("--threads", type=int, nargs="+", default=[1, 2, 4])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="emit records as JSON lines")
    args = ap.parse_args()
    ctx = FieldContext.from_name(args.field)
    tables = [build_kan(n, ctx) for n in (2, 3, 4)]
    tables += [build_J_GnT_alpha(2, a, 4, ctx) for a in (0, 1)]
    for T in tables:
        for th in args.threads:
            rep, secs = bench(T, th, args.repeat)
            rec = {"table": T.name, "dim": T.dim, "threads": th, "tuples": rep.checked,
                   "status": rep.status, "seconds": round(secs, 4)}
            if args.json:
                print(json.dumps(rec))
            else:
                print(f"{T.name:32s} dim={T.dim:3d} threads={th}  {rep.status}  {secs:7.3f} s")


if __name__ == "__main__":
    main()
