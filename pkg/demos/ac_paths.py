"""Bounded Andrews-Curtis search on the AK family.

AK(1) trivializes inside small budgets; the returned move path is
replayed step by step to the trivial presentation.  AK(3) exhausts the
same budgets, which is the only honest answer a bounded search can give.
"""

import time

from trisect.ac import (ab_det, ac_search, ak_presentation, canonical_key,
                        replay_ac_path, trivial_presentation)
from trisect.diagio import format_presentation


def main():
    p1 = ak_presentation(1)
    print("== AK(1) ==")
    print(format_presentation(p1))
    print("abelianized determinant: %d" % ab_det(p1))

    start = time.monotonic()
    res = ac_search(p1, max_total_length=32, max_depth=20)
    elapsed = time.monotonic() - start
    print("search: %s in %.3fs, %d states visited, path of %d moves"
          % (res.verdict.status, elapsed, res.stats["visited"],
             len(res.path)))
    for move in res.path:
        print("  %s" % (move,))
    final = replay_ac_path(p1, res.path)
    print("replayed endpoint matches the trivial presentation: %s"
          % (canonical_key(final) == canonical_key(trivial_presentation(2))))

    print()
    print("== AK(3), same budgets ==")
    p3 = ak_presentation(3)
    print(format_presentation(p3))
    start = time.monotonic()
    res3 = ac_search(p3, max_total_length=32, max_depth=20)
    elapsed = time.monotonic() - start
    print("search: %s in %.1fs" % (res3.verdict.status, elapsed))
    print("reason: %s" % res3.verdict.reason)
    print("stats: %s" % res3.stats)


if __name__ == "__main__":
    main()
