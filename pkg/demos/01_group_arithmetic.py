"""Tour of the exact group arithmetic.

The running example is the smallest interesting instance: base Z with the
doubling action (the classic one-relator group <a, t | t^-1 a t = a^2>),
then a rank-2 base with a non-diagonal action.
"""

from subsetkex import GroupParams, IntMatrix

# --- rank 1, doubling action -------------------------------------------------

G = GroupParams(IntMatrix(((2,),)))
x = G.generator(1)
t = G.stable_power(1)

print("generators:", x, "and the stable letter", t)
print("defining relation in action: t^-1 x t =", x.conj_t(1))

# Britton reduction cancels stable letters around image vectors:
print("t (x^2) t^-1 reduces to:", G.element(1, (2,), 1))
print("t x t^-1 cannot reduce:", G.element(1, (1,), 1))

# Words over the token alphabet evaluate to normal forms:
w = ("t^-1", "x1", "x1", "t", "x1^-1")
print("word", w, "evaluates to", G.evaluate(w))

# Every element embeds faithfully into Q x Z; products agree there:
g = G.element(1, (1,), 1)
h = G.element(0, (3,), 2)
print("oracle image of t x t^-1:", g.oracle())
print("product check:", (g * h).oracle() == g.oracle() * h.oracle())

# --- rank 2, non-diagonal action ---------------------------------------------

H = GroupParams(IntMatrix(((2, 1), (0, 3))))
v = (1, 0)
print("\nrank-2 action: v M^3 =", H.phi_power(v, 3))
print("preimage of (2, 1) under the action:", H.preimage_under_phi((2, 1)))
print("preimage of (1, 1) (outside the image):", H.preimage_under_phi((1, 1)))

a = H.element(2, (5, -1), 0)
b = H.element(0, (2, 2), 3)
print("a * b =", a * b)
print("(a * b) * b^-1 == a:", (a * b) * b.inverse() == a)
