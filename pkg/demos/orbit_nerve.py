"""Orbits of the nerve versus the nerve of the orbit category, for conjugation on a group."""

import sys

from equicat import corpus
from equicat.fincat import conjugation_on_group_category
from equicat.nerve import orbit_compare


def main(specs):
    for spec in specs:
        act = conjugation_on_group_category(corpus.named(spec))
        r = orbit_compare(act.cat, act, 2)
        print(spec)
        for lv in r["levels"]:
            print(f"  q={lv['q']}: nerve of orbits {lv['nerve_of_orbits']:4d}   "
                  f"orbits of nerve {lv['orbits_of_nerve']:4d}   Burnside {lv['burnside']:4d}")


if __name__ == "__main__":
    main(sys.argv[1:] or ["S3", "D4", "A5"])
