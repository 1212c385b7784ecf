"""Exact arithmetic in ascending HNN-extensions of free-abelian groups.

The ambient group G is generated by a free-abelian base Z^m together with a
stable letter t.  An integer m-by-m matrix M with nonzero determinant acts on
row vectors by v -> v M, and the defining relations are t^-1 x t = x M for
base elements x.  Every element of G has a unique Britton-reduced normal form

    t^p v t^-q    with p, q >= 0 and v in Z^m,

where reduced means p = 0, or q = 0, or v is not in the row image of M.
All arithmetic is exact: entries are plain Python integers (they grow like
``norm(M)**k`` and must never be truncated), and the companion "oracle"
representation uses exact rationals.

The oracle maps t^p v t^-q to (v M^-p, p - q) in Q^m x Z, the semidirect
product of the M-divisible hull of Z^m with an infinite cyclic group.  It is
an injective homomorphism on normal forms and serves throughout the test
suite as an independent cross-check of the group arithmetic.

Words over the generator tokens ``x1, x1^-1, ..., xm, xm^-1, t, t^-1`` are
plain tuples of strings; ``GroupParams.evaluate`` folds them into normal
forms and ``GroupElement.to_word`` is a (capped) unary section of that map.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

__all__ = [
    "IntMatrix",
    "GroupParams",
    "GroupElement",
    "OracleElement",
    "WordCapExceeded",
    "default_length",
    "make_token",
    "invert_token",
    "is_valid_token",
    "token_dimension",
    "word_inverse",
]

Vec = tuple  # length-m tuple of int entries

TOKEN_STABLE = "t"
TOKEN_STABLE_INV = "t^-1"
_GEN_TOKEN = re.compile(r"^x([1-9][0-9]*)(\^-1)?$")

DEFAULT_WORD_CAP = 10_000


class WordCapExceeded(ValueError):
    """Unary expansion of a normal form would emit more tokens than allowed."""


# ---------------------------------------------------------------------------
# tokens


def make_token(i: int, inverse: bool = False) -> str:
    """Generator token for the i-th base coordinate (1-indexed)."""
    if i < 1:
        raise ValueError("generator index is 1-indexed")
    return f"x{i}^-1" if inverse else f"x{i}"


def is_valid_token(token: str, m: Optional[int] = None) -> bool:
    """Syntactic token check; with ``m`` also bounds the generator index."""
    if token in (TOKEN_STABLE, TOKEN_STABLE_INV):
        return True
    match = _GEN_TOKEN.match(token)
    if not match:
        return False
    return m is None or int(match.group(1)) <= m


def token_dimension(token: str) -> int:
    """Smallest base dimension in which the token is a generator (0 for t)."""
    if token in (TOKEN_STABLE, TOKEN_STABLE_INV):
        return 0
    match = _GEN_TOKEN.match(token)
    if not match:
        raise ValueError(f"invalid token {token!r}")
    return int(match.group(1))


def invert_token(token: str) -> str:
    if token == TOKEN_STABLE:
        return TOKEN_STABLE_INV
    if token == TOKEN_STABLE_INV:
        return TOKEN_STABLE
    match = _GEN_TOKEN.match(token)
    if not match:
        raise ValueError(f"invalid token {token!r}")
    i = int(match.group(1))
    return make_token(i, inverse=match.group(2) is None)


def word_inverse(word: Sequence[str]) -> tuple:
    """Formal inverse of a word: reversed, with every token inverted."""
    return tuple(invert_token(tok) for tok in reversed(tuple(word)))


# ---------------------------------------------------------------------------
# integer matrices


def _det_bareiss(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant; exact for integer matrices."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _mat_mul_rows(a, b) -> tuple:
    n = len(a)
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(ra[k] * cb[k] for k in range(n)) for cb in bt) for ra in a
    )


def _identity_rows(n: int) -> tuple:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class IntMatrix:
    """Square integer matrix with nonzero determinant (checked on build)."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(e) for e in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        n = len(rows)
        if n == 0:
            raise ValueError("matrix must have positive dimension")
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        if self.det == 0:
            raise ValueError("matrix determinant must be nonzero")

    @property
    def dim(self) -> int:
        return len(self.rows)

    @cached_property
    def det(self) -> int:
        return _det_bareiss(self.rows)

    @cached_property
    def adjugate(self) -> "IntMatrix":
        """adj(M) with M * adj(M) = det(M) * I; used for exact division by M."""
        n = self.dim
        if n == 1:
            adj_rows = ((1,),)
        else:
            cof = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(n):
                    minor = [
                        [self.rows[r][c] for c in range(n) if c != j]
                        for r in range(n)
                        if r != i
                    ]
                    cof[i][j] = (-1) ** (i + j) * _det_bareiss(minor)
            adj_rows = tuple(tuple(cof[j][i] for j in range(n)) for i in range(n))
        adj = IntMatrix(adj_rows)
        scaled = tuple(
            tuple(self.det * e for e in row) for row in _identity_rows(n)
        )
        assert _mat_mul_rows(self.rows, adj.rows) == scaled
        return adj

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError("matrix dimension mismatch")
        return IntMatrix(_mat_mul_rows(self.rows, other.rows))


@lru_cache(maxsize=1024)
def _matrix_power_small(mat: IntMatrix, k: int) -> IntMatrix:
    if k == 0:
        return IntMatrix(_identity_rows(mat.dim))
    if k == 1:
        return mat
    half = _matrix_power_small(mat, k // 2)
    sq = half @ half
    return sq @ mat if k % 2 else sq


def matrix_power(mat: IntMatrix, k: int) -> IntMatrix:
    """M**k for k >= 0 by square-and-multiply; small powers are memoised."""
    if k < 0:
        raise ValueError("matrix power requires a nonnegative exponent")
    if k <= 64:
        return _matrix_power_small(mat, k)
    rows = _identity_rows(mat.dim)
    base = mat.rows
    while k:
        if k & 1:
            rows = _mat_mul_rows(rows, base)
        k >>= 1
        if k:
            base = _mat_mul_rows(base, base)
    return IntMatrix(rows)


def _vec_mat(v: Vec, mat: IntMatrix) -> Vec:
    rows = mat.rows
    n = len(rows)
    return tuple(sum(v[i] * rows[i][j] for i in range(n)) for j in range(n))


def _vec_add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def _vec_neg(a: Vec) -> Vec:
    return tuple(-x for x in a)


# ---------------------------------------------------------------------------
# the group


@dataclass(frozen=True)
class GroupParams:
    """Ambient group data: the base dimension and the matrix action.

    The determinant and adjugate are computed once and shared; the adjugate
    makes the image test exact integer arithmetic (division by det) rather
    than rational matrix inversion.
    """

    matrix: IntMatrix

    @property
    def m(self) -> int:
        return self.matrix.dim

    @property
    def det(self) -> int:
        return self.matrix.det

    @property
    def adjugate(self) -> IntMatrix:
        return self.matrix.adjugate

    @cached_property
    def _alphabet(self) -> tuple:
        toks = []
        for i in range(1, self.m + 1):
            toks.append(make_token(i))
            toks.append(make_token(i, inverse=True))
        toks.append(TOKEN_STABLE)
        toks.append(TOKEN_STABLE_INV)
        return tuple(toks)

    def tokens(self) -> tuple:
        """The full generator-token alphabet, x-generators first."""
        return self._alphabet

    def zero(self) -> Vec:
        return (0,) * self.m

    def identity(self) -> "GroupElement":
        return GroupElement(self, 0, self.zero(), 0)

    def base(self, v: Iterable[int]) -> "GroupElement":
        """The base element with coordinate vector v."""
        return self.element(0, v, 0)

    def generator(self, i: int) -> "GroupElement":
        if not 1 <= i <= self.m:
            raise ValueError(f"generator index {i} out of range 1..{self.m}")
        v = tuple(1 if j == i - 1 else 0 for j in range(self.m))
        return GroupElement(self, 0, v, 0)

    def stable_power(self, k: int) -> "GroupElement":
        """t**k as a reduced element (negative k gives t^-|k|)."""
        if k >= 0:
            return GroupElement(self, k, self.zero(), 0)
        return GroupElement(self, 0, self.zero(), -k)

    def preimage_under_phi(self, v: Iterable[int]) -> Optional[Vec]:
        """Return w with w M = v, or None when v is outside the image of M.

        Exact: w = v adj(M) / det(M), accepted only when the division has no
        remainder in every coordinate.
        """
        v = tuple(int(e) for e in v)
        if len(v) != self.m:
            raise ValueError("vector dimension mismatch")
        u = _vec_mat(v, self.adjugate)
        det = self.det
        out = []
        for e in u:
            q, r = divmod(e, det)
            if r:
                return None
            out.append(q)
        return tuple(out)

    def phi_power(self, v: Iterable[int], k: int) -> Vec:
        """v M**k for k >= 0 (square-and-multiply on M)."""
        if k < 0:
            raise ValueError("phi_power requires a nonnegative exponent")
        v = tuple(int(e) for e in v)
        if len(v) != self.m:
            raise ValueError("vector dimension mismatch")
        if k == 0:
            return v
        return _vec_mat(v, matrix_power(self.matrix, k))

    def rational_phi_power(self, v: Sequence[Fraction], k: int) -> tuple:
        """v M**k over the rationals, for any integer k."""
        if len(v) != self.m:
            raise ValueError("vector dimension mismatch")
        if k == 0:
            return tuple(Fraction(e) for e in v)
        if k > 0:
            rows = matrix_power(self.matrix, k).rows
            scale = 1
        else:
            rows = matrix_power(self.adjugate, -k).rows
            scale = self.det ** (-k)
        n = self.m
        return tuple(
            Fraction(sum(v[i] * rows[i][j] for i in range(n)), scale)
            for j in range(n)
        )

    def element(self, p: int, v: Iterable[int], q: int) -> "GroupElement":
        """Britton-reduce the triple t^p v t^-q into a normal form.

        While p > 0, q > 0 and v lies in the image of M, one t on each side
        is cancelled against the preimage; this terminates within
        min(p, q) steps.
        """
        p = int(p)
        q = int(q)
        v = tuple(int(e) for e in v)
        if p < 0 or q < 0:
            raise ValueError("stable exponents must be nonnegative")
        while p > 0 and q > 0:
            w = self.preimage_under_phi(v)
            if w is None:
                break
            p -= 1
            q -= 1
            v = w
        return GroupElement(self, p, v, q)

    @cached_property
    def _token_elements(self) -> dict:
        table = {}
        for i in range(1, self.m + 1):
            g = self.generator(i)
            table[make_token(i)] = g
            table[make_token(i, inverse=True)] = g.inverse()
        table[TOKEN_STABLE] = self.stable_power(1)
        table[TOKEN_STABLE_INV] = self.stable_power(-1)
        return table

    def evaluate(self, word: Sequence[str]) -> "GroupElement":
        """Fold a token word into its normal form (empty word is identity)."""
        table = self._token_elements
        g = self.identity()
        for tok in word:
            try:
                g = g * table[tok]
            except KeyError:
                raise ValueError(f"unknown token {tok!r}") from None
        return g


@dataclass(frozen=True)
class GroupElement:
    """Britton-reduced normal form t^p v t^-q.

    Direct construction insists on reducedness; use ``GroupParams.element``
    to normalise arbitrary triples.
    """

    group: GroupParams
    p: int
    v: Vec
    q: int

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(int(e) for e in self.v))
        if self.p < 0 or self.q < 0:
            raise ValueError("stable exponents must be nonnegative")
        if len(self.v) != self.group.m:
            raise ValueError("vector dimension mismatch")
        if (
            self.p > 0
            and self.q > 0
            and self.group.preimage_under_phi(self.v) is not None
        ):
            raise ValueError(
                "triple is not Britton-reduced; use GroupParams.element"
            )

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        g = self.group
        if other.group != g:
            raise ValueError("elements belong to different groups")
        p1, v1, q1 = self.p, self.v, self.q
        p2, v2, q2 = other.p, other.v, other.q
        if q1 >= p2:
            return g.element(p1, _vec_add(v1, g.phi_power(v2, q1 - p2)), q1 - p2 + q2)
        return g.element(p1 + p2 - q1, _vec_add(g.phi_power(v1, p2 - q1), v2), q2)

    def inverse(self) -> "GroupElement":
        # (t^p v t^-q)^-1 = t^q (-v) t^-p, reduced by symmetry of the invariant
        return GroupElement(self.group, self.q, _vec_neg(self.v), self.p)

    def conj_t(self, k: int) -> "GroupElement":
        """t^-k * self * t^k as a reduced element (k may be negative)."""
        g = self.group
        return g.stable_power(-k) * self * g.stable_power(k)

    def is_identity(self) -> bool:
        return self.p == 0 and self.q == 0 and not any(self.v)

    def length(self) -> int:
        return default_length(self)

    def to_word(self, cap: int = DEFAULT_WORD_CAP) -> tuple:
        """Unary token expansion: t^p, then x-tokens, then t^-1 repeated q times.

        Normal forms are the wire format; words are only for grammar-level
        interop, hence the cap on total tokens.
        """
        total = self.p + self.q + sum(abs(e) for e in self.v)
        if total > cap:
            raise WordCapExceeded(
                f"word form needs {total} tokens, cap is {cap}"
            )
        toks = [TOKEN_STABLE] * self.p
        for i, e in enumerate(self.v, start=1):
            if e:
                toks.extend([make_token(i, inverse=e < 0)] * abs(e))
        toks.extend([TOKEN_STABLE_INV] * self.q)
        return tuple(toks)

    def oracle(self) -> "OracleElement":
        """Faithful image (v M^-p, p - q) in the rational semidirect model."""
        g = self.group
        a = g.rational_phi_power(tuple(Fraction(e) for e in self.v), -self.p)
        return OracleElement(g, a, self.p - self.q)

    def __repr__(self) -> str:
        head = f"t^{self.p}·" if self.p else ""
        tail = f"·t^-{self.q}" if self.q else ""
        return f"{head}{self.v}{tail}"


@dataclass(frozen=True)
class OracleElement:
    """Point (a, d) of the rational semidirect model Q^m x Z.

    Multiplication is (a, i)(b, j) = (a + b M^-i, i + j).  Denominators of
    genuine images divide a power of det(M).
    """

    group: GroupParams
    a: tuple
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(Fraction(e) for e in self.a))
        if len(self.a) != self.group.m:
            raise ValueError("vector dimension mismatch")

    @classmethod
    def neutral(cls, group: GroupParams) -> "OracleElement":
        return cls(group, (Fraction(0),) * group.m, 0)

    def __mul__(self, other: "OracleElement") -> "OracleElement":
        if not isinstance(other, OracleElement):
            return NotImplemented
        g = self.group
        if other.group != g:
            raise ValueError("oracle elements belong to different groups")
        shifted = g.rational_phi_power(other.a, -self.d)
        a = tuple(x + y for x, y in zip(self.a, shifted))
        return OracleElement(g, a, self.d + other.d)

    def __repr__(self) -> str:
        return f"({self.a}, t-exp {self.d})"


def default_length(g: GroupElement) -> int:
    """Stable exponents plus total bit length of the base entries.

    Zero only on the identity, and invariant under inversion; the attack
    harness accepts any alternative callable in its place.
    """
    return g.p + g.q + sum(abs(e).bit_length() for e in g.v)
