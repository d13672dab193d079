"""A tour of the Jordan shuffle algebra.

Multiplies generators, checks the wheel conditions and searches for a
certificate that x_2 lies in the subalgebra generated by the D_k.

    python3 demos/shuffle_tour.py
"""
from qcoha.shuffle import SymPoly, d_k_image, membership_in_generated, shuffle_product, wheel_check, x_l_image

one = SymPoly.constant(1)
print("1 * 1 =", shuffle_product(one, one).to_text())
print("D_0 * D_1 =", shuffle_product(d_k_image(0), d_k_image(1)).to_text())

x3 = x_l_image(3)
print("\nx_3 satisfies the wheel conditions:", wheel_check(x3))
print("the constant 1 in three variables:", wheel_check(SymPoly.constant(3)))

res = membership_in_generated(x_l_image(2), 2)
print(f"\nx_2 in the D_k subalgebra (words of weight <= 2): {res.status}")
for word, coeff in (res.certificate or {}).items():
    print(f"  {'*'.join(word)}: {coeff}")
