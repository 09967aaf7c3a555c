"""Hyperbolic volume and Chern-Simons invariant of twist knot complements.

The knot K_p is the (1, -p) filling of one cusp of the Whitehead link,
taken with reversed orientation so that K_2 is SnapPy's tabulated 5_2
(the chirality in which the colored Jones values of the library grow).
CS is reported as 2 pi^2 * SnapPy's normalized value, reduced into
[-pi^2/2, pi^2/2).
"""
import argparse
import json
import warnings

warnings.filterwarnings("ignore")
import snappy  # noqa: E402


def twist_knot(p):
    W = snappy.ManifoldHP("5^2_1")
    W.dehn_fill([(0, 0), (1, -p)])
    K = W.filled_triangulation()
    K.reverse_orientation()
    return K


def invariants(p):
    K = twist_knot(p)
    pi = K.volume().parent().pi()
    cs = 2 * pi**2 * K.chern_simons()
    half = pi**2 / 2
    cs = cs - pi**2 * ((cs + half) / pi**2).floor()
    return K.volume(), cs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("p", type=int, nargs="+")
    args = ap.parse_args()
    ref = snappy.ManifoldHP("5_2")
    v2, cs2 = invariants(2)
    assert abs(v2 - ref.volume()) < 1e-20 and abs(cs2 - 2 * v2.parent().pi() ** 2 * ref.chern_simons()) < 1e-20
    out = {}
    for p in args.p:
        vol, cs = invariants(p)
        out[p] = {"volume": str(vol), "cs": str(cs)}
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
