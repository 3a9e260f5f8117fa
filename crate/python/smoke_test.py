#!/usr/bin/env python3
"""Smoke test for the eisenforms_py extension module.

Builds nothing itself: it expects `cargo build [--release] -p eisenforms-py`
to have produced target/{release,debug}/libeisenforms_py.so, copies the
library next to this script under the importable name eisenforms_py.so, and
exercises the bindings against independently computed values.

Run from the repository root (or anywhere):  python3 python/smoke_test.py
"""

import shutil
import sys
from fractions import Fraction
from pathlib import Path

HERE = Path(__file__).resolve().parent
ROOT = HERE.parent


def load_module():
    candidates = [
        ROOT / "target" / "release" / "libeisenforms_py.so",
        ROOT / "target" / "debug" / "libeisenforms_py.so",
    ]
    built = [p for p in candidates if p.exists()]
    if not built:
        sys.exit(
            "libeisenforms_py.so not found; run `cargo build --release -p eisenforms-py` first"
        )
    newest = max(built, key=lambda p: p.stat().st_mtime)
    dest = HERE / "eisenforms_py.so"
    if not dest.exists() or dest.stat().st_mtime < newest.stat().st_mtime:
        shutil.copy2(newest, dest)
    sys.path.insert(0, str(HERE))
    import eisenforms_py

    return eisenforms_py


def brute_sigma(d1, d2, k, n, ef):
    chi1 = ef.Character.from_discriminant(d1)
    chi2 = ef.Character.from_discriminant(d2)
    return sum(
        chi1.value(n // d) * chi2.value(d) * d ** (k - 1)
        for d in range(1, n + 1)
        if n % d == 0
    )


def main():
    ef = load_module()
    checks = 0

    def check(label, got, want):
        nonlocal checks
        if got != want:
            sys.exit(f"FAIL {label}: got {got!r}, want {want!r}")
        checks += 1
        print(f"ok {label}: {got!r}")

    # Characters.
    chi5 = ef.Character.from_discriminant(5)
    check("chi5 modulus", chi5.modulus(), 5)
    check("chi5 parity", chi5.parity(), 1)
    check("chi5 values", [chi5.value(n) for n in range(5)], [0, 1, -1, -1, 1])
    chi_m3 = ef.Character.from_discriminant(-3)
    check("chi(-3) parity", chi_m3.parity(), -1)
    check("product modulus", chi5.multiply(chi_m3).modulus(), 15)
    check("parse round trip", ef.Character.parse(chi5.canonical()), chi5)
    induced = chi5.induce(15)
    check("induce/primitive round trip", induced.primitive_part(), chi5)
    check("induced not primitive", induced.is_primitive(), False)

    # Newforms and coefficients.
    f = ef.Newform.from_discriminants(5, 8, 2)
    check("level", f.level(), 40)
    check("descriptor", f.descriptor(), "5:8:2")
    check("sigma oracle", ef.sigma(5, 8, 2, 3), brute_sigma(5, 8, 2, 3, ef))
    check("sigma(3) frozen", ef.sigma(5, 8, 2, 3), -4)
    check("coefficient matches sigma", f.coefficient(12), ef.sigma(5, 8, 2, 12))
    chi8 = ef.Character.from_discriminant(8)
    check("sign rule", [f.sign(p) for p in (3, 7, 11)], [chi8.value(p) for p in (3, 7, 11)])
    g = ef.Newform.from_discriminants(1, 5, 2)
    check("constant term", Fraction(g.constant_term()), Fraction(-1, 5))
    e4 = ef.Newform.from_discriminants(1, 1, 4)
    check("E4 constant term", Fraction(e4.constant_term()), Fraction(1, 240))
    p = 7
    lhs = e4.eigenvalue(p) ** 2
    rhs = e4.coefficient(p * p) + p**3
    check("Hecke identity at 7", lhs, rhs)
    check("coefficient field", f.coefficient_field()["field"], "rational")

    # Twists.
    theta = ef.Character.from_discriminant(-3)
    ft = g.twist(theta)
    # chi1*theta has conductor 3 and chi2*theta conductor 15, so level 45.
    check("twist level", ft.level(), 45)
    check(
        "twist eigenvalue scaling",
        ft.eigenvalue(7),
        theta.value(7) * g.eigenvalue(7),
    )

    # Statistics.
    check("theta constant", ef.theta_constant(200, 10), "3.9750223903")
    check("first negative", ef.first_negative(1, 40, 2), 7)
    dens = ef.sign_density(1, 5, 2, 10**4)
    check("sign density prediction", dens["predicted_coprime"], "1/2")
    emp = Fraction(dens["negative"], dens["coprime_count"])
    assert abs(emp - Fraction(1, 2)) < Fraction(3, 100), emp
    checks += 1
    print(f"ok sign density empirical: {float(emp):.4f}")
    check("census prediction", ef.predicted_census("3:-1"), "15/32")
    rep = ef.census("3:-1", 10**4, "box", True)
    assert abs(Fraction(rep["hits"], rep["sample_size"]) - Fraction(15, 32)) < Fraction(3, 100)
    checks += 1
    print(f"ok census empirical: {rep['hits']}/{rep['sample_size']}")
    check("prob epsilon", ef.prob_epsilon(0, 3), "1/4")

    # Multiplicity one.
    a = ef.eigenvalue_agreement(f, g)
    assert a["verdict"] in ("unrelated", "twist-related"), a
    checks += 1
    print(f"ok agreement verdict: {a['verdict']} at density {a['density']}")
    h = g.twist(ef.Character.from_discriminant(8))
    tw = ef.detect_twist(g, h)
    assert tw is not None and tw.is_quadratic(), tw
    checks += 1
    print(f"ok detect_twist: {tw!r}")

    # Decomposition round trip in the weight-4 level-4 principal space.
    chi0 = ef.Character.principal(1)
    pairs = ef.basis(4, chi0, 4)
    check("basis size", len(pairs), 3)
    bound = len(pairs) + 10
    coeffs = [0] * (bound + 1)
    for scale, (form, d) in zip((2, -3, 5), pairs):
        expansion = form.expansion(bound)
        for n in range(bound + 1):
            if n == 0:
                coeffs[0] += scale * Fraction(expansion[0])
            elif n % d == 0:
                coeffs[n] += scale * expansion[n // d]
    comb = ef.decompose([str(c) for c in coeffs], 4, chi0, 4)
    check("decompose ambient level", comb["N"], 4)
    check(
        "decompose round trip",
        [(t["c"], t["d"]) for t in comb["terms"]],
        [("2", 1), ("-3", 2), ("5", 4)],
    )

    # Negativity scan: 2*E(5:8:2) alone must dip below -100.
    hit = ef.nonneg_scan([("2", 5, 8, 2, 1)], 40, f.nebentypus(), 2, threshold="100")
    n, value = hit
    assert Fraction(value) < -100 and ef.sigma(5, 8, 2, n) * 2 == Fraction(value)
    checks += 1
    print(f"ok nonneg scan: a({n}) = {value}")

    print(f"\nsmoke test passed ({checks} checks)")


if __name__ == "__main__":
    main()
