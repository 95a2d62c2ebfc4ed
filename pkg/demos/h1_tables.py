"""Print H^1 tables for a few small contexts, with each class's size and stabiliser order."""

from equicat.cli import parse_context
from equicat.crossed import h1
from equicat.groups import subgroups

CONTEXTS = [("C2", "C3", "inversion"), ("C2", "C4", "trivial"), ("S3", "C2", "trivial"),
            ("C2", "GL1F4", "frobenius"), ("C3", "S3", "aut:1")]


def main():
    for gs, ps, act in CONTEXTS:
        G, P, action = parse_context(gs, ps, act)
        print(f"G={gs} Π={ps} action={act}")
        for H in subgroups(G):
            table = h1(G, P, action, H)
            rows = ", ".join(f"{c.size}/{c.aut.order}" for c in table.classes)
            print(f"  |H|={H.order}: {len(table)} classes (size/|aut|: {rows})")


if __name__ == "__main__":
    main()
