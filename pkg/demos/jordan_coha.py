"""Dimension series of the Jordan COHA, two ways.

Builds the generating series from Kac polynomials and compares it with the
series assembled directly from point counts of the strongly semi-nilpotent
variety.

    python3 demos/jordan_coha.py
"""
from qcoha.coha import coha_series_from_kac, cross_check
from qcoha.kac import extract_nilpotent_kac
from qcoha.quiver import jordan_quiver

J = jordan_quiver()
table = extract_nilpotent_kac(J, 1, (2,), (2, 3, 5))
for tau in (0, 1):
    res = coha_series_from_kac(table, tau, 2)
    print(f"tau = {tau}")
    for e, coeffs in sorted(res.window(6).items()):
        shown = ", ".join(f"q^{k}: {c}" for k, c in sorted(coeffs.items(), reverse=True) if c)
        print(f"  z^{e[0]}: {shown}")
    print(f"  nonnegative integers in the window: {res.nonnegative_in_window(6)}")

print("\nCount route versus Kac route:")
for v, p, a, b, ok in cross_check(table, 0, (2, 3)):
    print(f"  v={list(v)} p={p}: {a} vs {b} {'equal' if ok else 'DIFFERENT'}")
