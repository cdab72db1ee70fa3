"""A short tour: normal forms, Hopf structure, a cyclic cocycle, and an action on jets.

Run with:  python3 demos/hopf_tour.py
"""
from kappa.cyclic import certify_cyclic_cocycle, hochschild_b
from kappa.interp import as_cochain, eval_text, format_value
from kappa.kn_hopf import antipode, coproduct, counit

# PBW normal forms in K_1: X1 moved to the right of the commutative generators
for text in ["X1 * s[1;1,1]", "X1 * sinv", "S(S(X1))"]:
    print(f"{text:>16}  =  {format_value(eval_text(text))}")

# Hopf structure on a product
h = eval_text("X1 s[1;1,1]")
print("\ncop(X1 s[1;1,1]) =", format_value(coproduct(h)))
print("S(X1 s[1;1,1])   =", format_value(antipode(h)))
print("eps(3 + s[1;1,1]) =", counit(eval_text("3 + s[1;1,1]")))

# the Godbillon-Vey type 2-cocycle, as a normalized Hopf cochain
gv = as_cochain(eval_text("1 (x) logs (x) s^-2 s[1;1,1] - 1 (x) s^-2 s[1;1,1] (x) sinv logs"))
print("\nb(GV) is zero:", hochschild_b(gv).is_zero())
for name, ok, detail in certify_cyclic_cocycle(gv):
    print(f"  {'PASS' if ok else 'FAIL'} {name} {detail}")

# action on a crossed-product element f U*_psi (here f = 1)
print("\ns[1;1,1] acting on U*_psi, psi(x) = x + x^2/2 + x^3/3:")
print(format_value(eval_text("s[1;1,1] |> jet(1, 1/2, 1/3)", order=4)))
