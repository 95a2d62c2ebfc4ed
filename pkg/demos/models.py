"""Check the symmetric-group and general linear models on small cases."""

from equicat import corpus
from equicat.models import build_universe, e_orbit, gl_orbit, verify_e_model, verify_gl_model
from equicat.skew import galois_field


def main():
    for spec in ("C2", "C3", "S3"):
        G = corpus.named(spec)
        for n in (1, 2):
            r = verify_e_model(G, n)
            print(f"Σ model G={spec} n={n}: ok={r['ok']} objects={r['objects']} "
                  f"admissible Λ={r['lambdas']} copies needed={r['copies_needed']}")
        U = build_universe(G, 1)
        o = e_orbit(G, 1, U)
        print(f"  orbit description n=1: {o['objects']} objects, {o['morphisms']} morphisms")
    K = galois_field(2, 2)
    g = verify_gl_model(1, K)
    print(f"GL model F4 n=1: ok={g['ok']} Λ={g['lambdas']}")
    o = gl_orbit(1, K, build_universe(K.group, 1))
    print(f"  orbit description: {o['objects']} lines, {o['morphisms']} morphisms")


if __name__ == "__main__":
    main()
