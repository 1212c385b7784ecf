"""Diffie-Hellman along endomorphism powers of the base lattice.

Both parties push a public vector through secret powers of the matrix
action; square-and-multiply keeps exponents up to 2^20 cheap even though
the entries grow without bound.
"""

import time

from subsetkex import GroupParams, IntMatrix, orbit_dh

G = GroupParams(IntMatrix(((2, 1), (0, 3))))
x = (1, 0)

msg_a, msg_b, key = orbit_dh(G, x, m_a=2, n_b=1)
print("x M^2 =", msg_a, "  x M^1 =", msg_b, "  shared x M^3 =", key)

secret_a, secret_b = 123_456, 654_321
t0 = time.perf_counter()
msg_a, msg_b, key = orbit_dh(G, x, secret_a, secret_b)
dt = time.perf_counter() - t0
print(f"\nexponents {secret_a} + {secret_b}: key entries have "
      f"{max(e.bit_length() for e in key)} bits (computed in {dt:.3f}s)")

big = GroupParams(IntMatrix((
    (1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 1), (0, 0, 0, 1))))
_, _, key = orbit_dh(big, (1, 2, 3, 4), 1 << 19, 1 << 19)
print("unipotent action at exponent 2^20:", key)
