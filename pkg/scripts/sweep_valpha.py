"""Sweep V(alpha) over fields, ranks, parities and alphas; record Jordan, lemma and classification results."""
import argparse
import json
import time

from kanjordan.analysis import check_irreducible, classify
from kanjordan.bimodule import build_V_alpha, check_jordan_bimodule
from kanjordan.config import RunRecord, SweepConfig
from kanjordan.kantor import build_kan
from kanjordan.lemmas import check_lemmas
from kanjordan.tensor import embed_V_alpha


def sweep(cfg: SweepConfig):
    for ctx in cfg.contexts():
        for n in cfg.module_ranks:
            K = build_kan(n, ctx)
            for p in cfg.parities:
                seen = set()
                for a in cfg.alphas:
                    a = ctx.coerce(a)
                    if a in seen:
                        continue
                    seen.add(a)
                    t0 = time.perf_counter()
                    V = build_V_alpha(n, a, p, ctx, K)
                    jordan = check_jordan_bimodule(K, V)
                    lemmas = check_lemmas(V, alpha=a)
                    key = classify(V).key()
                    irred = check_irreducible(V).irreducible
                    emb = embed_V_alpha(n, a, ctx).ok if p == n % 2 else None
                    ok = jordan.ok and lemmas.ok and key == (p, a) and irred and emb is not False
                    yield RunRecord(V.name + f" over {ctx.name}", ok, time.perf_counter() - t0,
                                    {"jordan": jordan.status, "lemmas": lemmas.status,
                                     "classified": [key[0], ctx.format(key[1])], "irreducible": irred,
                                     "embedding": emb})


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fields", nargs="+", default=["Q", "F3", "F5", "F7"])
    ap.add_argument("--out", help="write JSON lines here as well")
    args = ap.parse_args()
    cfg = SweepConfig(fields=tuple(args.fields))
    fh = open(args.out, "w", encoding="utf-8") if args.out else None
    failures = 0
    for rec in sweep(cfg):
        print(rec.line())
        failures += not rec.ok
        if fh:
            fh.write(json.dumps({"name": rec.name, "ok": rec.ok, "seconds": rec.seconds, **rec.details}) + "\n")
    if fh:
        fh.close()
    print(f"{failures} failures")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
