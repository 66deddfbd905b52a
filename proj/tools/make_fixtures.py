#!/usr/bin/env python3
"""Generate curve fixtures and frozen oracle data using PARI/GP (cypari2).

Usage: python3 tools/make_fixtures.py [outdir] [oracledir]
"""
import json
import sys
from fractions import Fraction

import cypari2

pari = cypari2.Pari()
pari.allocatemem(4 * 10**9)
pari.set_real_precision(80)

PREC = 20
FROB_PREC = 30

CURVES = [
    # label, a-invariants, p, rank
    ("37b_p5", [0, 1, 1, -3, 1], 5, 0),
    ("113a_p7", [1, 1, 1, 3, -4], 7, 0),
    ("307a_p13", [1, 1, 0, 0, -1], 13, 0),
    ("53a_p5", [1, -1, 1, 0, 0], 5, 1),
    ("43a_p7", [0, 1, 1, 0, 0], 7, 1),
    ("197a_p5", [0, 0, 1, -5, 4], 5, 1),
    ("274b_p5", [1, -1, 0, -2, 0], 5, 1),
]


def qstr(x):
    f = Fraction(int(pari.numerator(x)), int(pari.denominator(x)))
    return str(f.numerator) if f.denominator == 1 else "%d/%d" % (f.numerator, f.denominator)


def coord(x, p, N):
    """Canonical coordinate of a p-adic number known mod p^N: residue times p-power."""
    if str(pari.type(x)) == "t_PADIC":
        x = pari.truncate(x)
    f = Fraction(int(pari.numerator(x)), int(pari.denominator(x)))
    k = 0
    d = f.denominator
    while d % p == 0:
        d //= p
        k += 1
    mod = p ** (N + k)
    a = (f.numerator * pow(d, -1, mod)) % mod
    r = Fraction(a, p**k)
    if r.denominator == 1:
        return str(r.numerator)
    kk = 0
    dd = r.denominator
    while dd > 1:
        dd //= p
        kk += 1
    return "%d/%d^%d" % (r.numerator, p, kk)


def padic_str(x, p, N):
    """Q_p element -> 'a mod p^N'."""
    return "%s mod %d^%d" % (coord(x, p, N), p, N)


def ext_str(x, y, p, N):
    """x + y*sqrt(-p) with both coordinates known mod p^N."""
    return "%s + %s*s mod %d^%d" % (coord(x, p, N), coord(y, p, N), p, N)


def sigma_series(E, M):
    pari("default(seriesprecision,%d)" % (M + 5))
    z = pari.ellformallog(E, M + 4, "t")
    x = pari.ellformalpoint(E, M + 4, "t")[0]
    f = pari.deriv(z, "t")
    h = x + E[5] / 12 - 1 / z**2
    Dg = -pari.intformal(h * f, "t")
    g = pari.intformal(Dg * f, "t")
    return z * pari.exp(g)


def saturated_gens(E, r):
    if r == 0:
        return []
    pts = pari.ellrank(E)[3]
    pts = pari.ellsaturation(E, pts, 200)
    return [pts[i] for i in range(r)]


def analytic_sha(E, r, gens):
    L = pari.lfuncreate(E)
    val = pari.lfun(L, 1, r) / pari.factorial(r)
    reg = pari.ellheightmatrix(E, pari.Vec(gens)) if r else None
    R = pari.matdet(reg) if r else 1
    sha = val / (pari.ellbsd(E) * R)
    s = int(pari.round(sha))
    assert abs(float(sha - s)) < 1e-12, sha
    return s


def frob_uv(E, p):
    F = pari.ellpadicfrobenius(E, p, FROB_PREC)
    return F[0, 0] / p, F[1, 0] / p


def heights_oracle(E, p, P):
    h = pari.ellpadicheight(E, p, PREC, P)
    return [padic_str(h[0], p, PREC - 2), padic_str(h[1], p, PREC - 2)]


def symbols(E, p, n):
    Ms, x = pari.msfromell(E, 1)[:2]
    out = {}
    for m in sorted({1, p, p**n}):
        for a in range(m):
            v = -pari.mseval(Ms, x, pari("[%d/%d,oo]" % (a, m)))
            out["%d/%d" % (a, m)] = qstr(v)
    return out


def lalpha_oracle(E, p, n, K, J=3):
    """Riemann sum at level n in Q_p(alpha), alpha^2=-p, coefficients of X^0..X^{J-1}."""
    Ms, xs = pari.msfromell(E, 1)[:2]

    def sym(a, m):
        return -pari.mseval(Ms, xs, pari("[%d/%d,oo]" % (a % m, m)))

    O = pari("O(%d^%d)" % (p, K))
    lg = pari.log(1 + p + O)

    def mul(u, v):
        return (u[0] * v[0] - p * u[1] * v[1], u[0] * v[1] + u[1] * v[0])

    ainv = (0 * O, -1 / pari(p) + O)

    def pw(u, k):
        r = (1 + O, 0 * O)
        for _ in range(k):
            r = mul(r, u)
        return r

    an, an1 = pw(ainv, n), pw(ainv, n + 1)
    co = [(0 * O, 0 * O) for _ in range(J)]
    for a in range(1, p**n):
        if a % p == 0:
            continue
        m0, m1 = sym(a, p**n), sym(a, p ** (n - 1))
        mu = (an[0] * m0 - an1[0] * m1, an[1] * m0 - an1[1] * m1)
        l = pari.log(a + O) / lg
        b = 1 + O
        for j in range(J):
            co[j] = (co[j][0] + mu[0] * b, co[j][1] + mu[1] * b)
            b = b * (l - j) / (j + 1)
    return co


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else "fixtures"
    odir = sys.argv[2] if len(sys.argv) > 2 else "tests/data"
    oracle = {}
    for label, ai, p, r in CURVES:
        E = pari.ellinit(ai, precision=300)
        gr = pari.ellglobalred(E)
        N = int(gr[0])
        assert gr[1] == pari("[1,0,0,0]"), "model not minimal"
        assert int(pari.ellap(E, p)) == 0
        assert int(pari.ellanalyticrank(E)[0]) == r
        tors = pari.elltors(E)
        gens = saturated_gens(E, r)
        sha = analytic_sha(E, r, gens)
        u, v = frob_uv(E, p)
        bad = [int(q) for q in pari.factor(N)[0]]
        red = []
        for q in bad:
            aq = int(pari.ellap(E, q))
            red.append({"prime": q, "type": {1: "split", -1: "nonsplit", 0: "additive"}[aq]})
        om = E.omega()
        fx = {
            "label": label,
            "a1": ai[0], "a2": ai[1], "a3": ai[2], "a4": ai[3], "a6": ai[4],
            "conductor": N,
            "p": p,
            "rank": r,
            "generators": [[qstr(P[0]), qstr(P[1])] for P in gens],
            "torsion_order": int(tors[0]),
            "torsion_points": [[qstr(T[0]), qstr(T[1])] for T in tors[2]] if int(tors[0]) > 1 else [],
            "tamagawa_product": int(gr[2]),
            "sha_order": sha,
            "frobenius_on_omega": {"u": padic_str(u, p, FROB_PREC - 1), "v": padic_str(v, p, FROB_PREC - 1)},
            "periods": {"omega_plus": str(pari.real(om[0]))[:70], "omega_minus": str(abs(pari.imag(om[1])))[:70]},
            "reduction_types": red,
            "precision": PREC,
            "provenance": "PARI/GP %s via cypari2 (ellrank+ellsaturation, ellpadicfrobenius/p, lfun)" % ".".join(str(x) for x in pari.version()[:3]),
        }
        with open("%s/%s.json" % (outdir, label), "w") as fh:
            json.dump(fx, fh, indent=2)
            fh.write("\n")
        o = {"omega_real": str(pari.real(om[0]))[:70], "symbols_level1": symbols(E, p, 1)}
        s = sigma_series(E, 14)
        o["sigma_coeffs"] = [qstr(pari.polcoef(pari.truncate(s), k, "t")) for k in range(1, 13)]
        if gens:
            o["padic_height"] = heights_oracle(E, p, gens[0])
        n = 3
        co = lalpha_oracle(E, p, n, PREC)
        o["lalpha_level"] = n
        o["lalpha"] = [ext_str(c[0], c[1], p, PREC - 4) for c in co]
        oracle[label] = o
        print(label, "N", N, "sha", sha, "tors", int(tors[0]), "tam", int(gr[2]), "gens", fx["generators"], flush=True)
    with open("%s/pari_oracle.json" % odir, "w") as fh:
        json.dump(oracle, fh, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    main()
