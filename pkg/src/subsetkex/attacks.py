"""Length-based cryptanalysis harness for the subset key-exchange instances.

Two attack strategies against p1-style targets a1 w b1:

  rst_greedy          extend a candidate left factor one subgroup generator
                      at a time, steering by a distance-to-subset score of
                      the induced right factor,
  derivation_descent  beam search down the leftmost derivations of the
                      published grammar, scoring partial derivations by the
                      length of the induced right factor.

The right-factor membership test is exact: candidates are mapped into the
rational semidirect model, scaled by det(M)^K, and solved against the
Hermite-normal-form basis of the window lattice spanned by gen M^k for
|k| <= K.  A "member" verdict is a certificate; "unknown" only means the
window was too small to scale the candidate.  Success additionally requires
the recovered pair to reproduce the target exactly and to commute with
samples of the opposite subset, so the harness cannot report a false break.

Experiment sweeps are reproducible: per-trial seeds derive from one master
seed and the timing column uses an injectable clock that defaults to a
constant, so repeated sweeps emit byte-identical CSV.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

from .grammars import (
    SamplePolicy,
    SubsetSpec,
    shortest_nonempty_word,
    shortest_word,
)
from .groups import (
    GroupElement,
    GroupParams,
    IntMatrix,
    OracleElement,
    Vec,
    default_length,
    matrix_power,
    _vec_mat,
)
from .protocols import PublicParams1, p1_round, p1_setup
from .seeding import derive_seed

__all__ = [
    "MEMBER",
    "NON_MEMBER_IN_WINDOW",
    "UNKNOWN",
    "MembershipVerdict",
    "AttackInstance",
    "AttackResult",
    "GridPoint",
    "lattice_member",
    "subset_distance",
    "extract_orbit_generator",
    "rst_greedy",
    "derivation_descent",
    "verify_break",
    "build_p1_instance",
    "run_experiments",
    "zero_clock",
    "CSV_HEADER",
]

MEMBER = "member"
NON_MEMBER_IN_WINDOW = "non-member-in-window"
UNKNOWN = "unknown"

_T_PENALTY = 1 << 20
_MAX_DIST = 1 << 40

CSV_HEADER = "grid_id,mode,trials,successes,mean_iters,mean_ms"


def zero_clock() -> float:
    """Constant clock: keeps sweep output byte-identical across runs."""
    return 0.0


# ---------------------------------------------------------------------------
# integer lattices in echelon / Hermite form


def _xgcd(a: int, b: int):
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    return x, y, g


class _EchelonLattice:
    """Row lattice kept in Hermite-style echelon form.

    Supports exact membership (divisibility descent along pivots) and a
    nearest-rounding reduction used as the Babai residual for distances.
    Treated as immutable once built.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list = []
        self.pivots: list = []  # pivot column of each row, strictly increasing

    def add(self, vec: Sequence[int]) -> None:
        vec = list(vec)
        for j in range(self.dim):
            if not vec[j]:
                continue
            pos = None
            for idx, pcol in enumerate(self.pivots):
                if pcol == j:
                    pos = idx
                    break
                if pcol > j:
                    break
            if pos is None:
                where = 0
                while where < len(self.pivots) and self.pivots[where] < j:
                    where += 1
                self.rows.insert(where, vec)
                self.pivots.insert(where, j)
                return
            row = self.rows[pos]
            a, b = row[j], vec[j]
            if b % a == 0:
                q = b // a
                for k in range(j, self.dim):
                    vec[k] -= q * row[k]
            else:
                x, y, g = _xgcd(a, b)
                ag, bg = a // g, b // g
                for k in range(j, self.dim):
                    ra, rb = row[k], vec[k]
                    row[k] = x * ra + y * rb
                    vec[k] = -bg * ra + ag * rb

    def normalize(self) -> None:
        """Canonical Hermite form: positive pivots, reduced entries above."""
        for idx in range(len(self.rows)):
            j = self.pivots[idx]
            if self.rows[idx][j] < 0:
                self.rows[idx] = [-e for e in self.rows[idx]]
        for idx in range(len(self.rows) - 1, -1, -1):
            j = self.pivots[idx]
            piv = self.rows[idx][j]
            for above in range(idx):
                q = self.rows[above][j] // piv
                if q:
                    self.rows[above] = [
                        e - q * f for e, f in zip(self.rows[above], self.rows[idx])
                    ]

    def contains(self, vec: Sequence[int]) -> bool:
        vec = list(vec)
        for idx, j in enumerate(self.pivots):
            if vec[j]:
                q, r = divmod(vec[j], self.rows[idx][j])
                if r:
                    return False
                row = self.rows[idx]
                for k in range(j, self.dim):
                    vec[k] -= q * row[k]
        return not any(vec)

    def reduce_nearest(self, vec: Sequence[int]) -> list:
        """Residual after rounding each pivot coordinate to the nearest layer."""
        vec = list(vec)
        for idx, j in enumerate(self.pivots):
            piv = self.rows[idx][j]
            q = (2 * vec[j] + piv) // (2 * piv)
            if q:
                row = self.rows[idx]
                for k in range(j, self.dim):
                    vec[k] -= q * row[k]
        return vec


@lru_cache(maxsize=256)
def _window_lattice(group: GroupParams, gen: Vec, window: int) -> _EchelonLattice:
    """HNF basis of span{gen M^k : -K <= k <= K}, scaled by det(M)^K."""
    lat = _EchelonLattice(group.m)
    det = group.det
    for k in range(-window, window + 1):
        if k >= 0:
            row = _vec_mat(gen, matrix_power(group.matrix, k))
            scale = det ** window
        else:
            row = _vec_mat(gen, matrix_power(group.adjugate, -k))
            scale = det ** (window + k)
        lat.add([e * scale for e in row])
    lat.normalize()
    return lat


@dataclass(frozen=True)
class MembershipVerdict:
    """Outcome of a window-lattice membership query."""

    value: str
    window: int

    @property
    def is_member(self) -> bool:
        return self.value == MEMBER


def _as_oracle_parts(group: GroupParams, v):
    if isinstance(v, OracleElement):
        return v.a, v.d
    return tuple(Fraction(int(e)) for e in v), 0


def lattice_member(group: GroupParams, v, gen: Sequence[int],
                   window: int) -> MembershipVerdict:
    """Decide membership in the integer span of gen M^k for |k| <= window.

    ``v`` may be a base vector or an oracle point (a, d).  A nonzero
    stable-letter exponent d can never lie in the base hull, so it is a
    certified non-member.  Denominators beyond det^window cannot be scaled
    into the window and come back "unknown".  "member" is exact.
    """
    if window < 0:
        raise ValueError("window must be nonnegative")
    gen = tuple(int(e) for e in gen)
    a, d = _as_oracle_parts(group, v)
    if d != 0:
        return MembershipVerdict(NON_MEMBER_IN_WINDOW, window)
    scale = group.det ** window
    z = []
    for f in a:
        num = f * scale
        if num.denominator != 1:
            return MembershipVerdict(UNKNOWN, window)
        z.append(num.numerator)
    lat = _window_lattice(group, gen, window)
    value = MEMBER if lat.contains(z) else NON_MEMBER_IN_WINDOW
    return MembershipVerdict(value, window)


def subset_distance(group: GroupParams, v, gen: Sequence[int],
                    window: int) -> int:
    """Bit size of the Babai-rounded residual against the window basis.

    Nonzero stable exponents draw a stiff per-unit penalty; candidates that
    cannot be scaled into the window score as maximally distant.
    """
    gen = tuple(int(e) for e in gen)
    a, d = _as_oracle_parts(group, v)
    penalty = _T_PENALTY * abs(d)
    scale = group.det ** window
    z = []
    for f in a:
        num = f * scale
        if num.denominator != 1:
            return _MAX_DIST + penalty
        z.append(num.numerator)
    residual = _window_lattice(group, gen, window).reduce_nearest(z)
    return penalty + sum(abs(e).bit_length() for e in residual)


def extract_orbit_generator(spec: SubsetSpec) -> Vec:
    """Recover the orbit's base vector from a published grammar.

    The shortest nonempty word of an orbit closure is the un-conjugated
    generator word (or its inverse), which evaluates to a base element.
    This uses public information only.
    """
    word = shortest_nonempty_word(spec.grammar)
    if word is None:
        raise ValueError("language contains no nonempty word")
    g = spec.group.evaluate(word)
    if g.p or g.q:
        raise ValueError("shortest sample is not a base element")
    return g.v


# ---------------------------------------------------------------------------
# instances and results


@dataclass(frozen=True)
class AttackInstance:
    """One cryptanalysis target: pub is the public data, target = a1 w b1.

    ``gens_a`` switches on generator mode (a finite approximation of the
    left subset); when None the grammar of pub.spec_a is attacked directly.
    """

    pub: PublicParams1
    target: GroupElement
    gens_a: Optional[tuple] = None


@dataclass(frozen=True)
class AttackResult:
    success: bool
    recovered: Optional[tuple]  # (a, b) with a w b = target when success
    iterations: int
    best_score: int
    elapsed: float

    def __post_init__(self):
        if self.success:
            assert self.recovered is not None


def verify_break(pub: PublicParams1, target1: GroupElement,
                 target2: GroupElement, a: GroupElement, b: GroupElement,
                 c: GroupElement, d: GroupElement,
                 trials: int = 32, seed: int = 0) -> bool:
    """Sufficient condition for computing the shared key from two cracks.

    Requires a w b = target1 and c w d = target2 exactly, plus a commuting
    with samples of the right subset and b with samples of the left one
    (spot-checked); then a c w d b reproduces the session key.
    """
    if a * pub.w * b != target1:
        return False
    if c * pub.w * d != target2:
        return False
    policy = SamplePolicy(max_length=24, depth_cap=4)
    for i in range(trials):
        sb = pub.spec_b.sample_element(
            replace(policy, seed=derive_seed(seed, "verify.b", i)))
        if a * sb != sb * a:
            return False
        sa = pub.spec_a.sample_element(
            replace(policy, seed=derive_seed(seed, "verify.a", i)))
        if b * sa != sa * b:
            return False
    return True


def _membership_window(b: GroupElement, window: Optional[int]) -> int:
    # denominators of base-hull elements are bounded by det^(p+q)
    return window if window is not None else b.p + b.q + 8


def _right_factor_tools(instance: AttackInstance, window: Optional[int]):
    group = instance.pub.group
    gen_b = extract_orbit_generator(instance.pub.spec_b)

    def is_member(b: GroupElement) -> bool:
        verdict = lattice_member(group, b.oracle(), gen_b,
                                 _membership_window(b, window))
        return verdict.is_member

    def distance(b: GroupElement) -> int:
        return subset_distance(group, b.oracle(), gen_b,
                               _membership_window(b, window))

    return is_member, distance


def rst_greedy(instance: AttackInstance,
               ell: Callable[[GroupElement], int] = default_length,
               dist: Optional[Callable[[GroupElement], int]] = None,
               max_iter: int = 200, window: Optional[int] = None,
               verify_trials: int = 32,
               clock: Callable[[], float] = time.perf_counter) -> AttackResult:
    """Greedy one-generator-at-a-time attack on a generator-mode instance.

    Starting from the identity, every iteration appends the generator (or
    inverse) whose induced right factor w^-1 a^-1 target scores closest to
    the right subset; the scan stops as soon as a right factor is a
    certified member and the pair verifies.  Ties break toward the lowest
    generator index so runs reproduce.
    """
    if instance.gens_a is None:
        raise ValueError("rst_greedy needs generator mode (gens_a supplied)")
    del ell  # the default score is lattice-based; ell kept for signature parity
    pub = instance.pub
    is_member, default_dist = _right_factor_tools(instance, window)
    score = dist if dist is not None else default_dist
    steps = []
    for gen in instance.gens_a:
        steps.append(gen)
        steps.append(gen.inverse())
    w_inv = pub.w.inverse()
    t0 = clock()
    current = pub.group.identity()

    def induced(a_cand: GroupElement) -> GroupElement:
        return w_inv * a_cand.inverse() * instance.target

    def certified(a_cand: GroupElement, b_cand: GroupElement) -> bool:
        return is_member(b_cand) and verify_break(
            pub, instance.target, instance.target,
            a_cand, b_cand, a_cand, b_cand, trials=verify_trials,
        )

    b0 = induced(current)
    if certified(current, b0):
        return AttackResult(True, (current, b0), 0, 0, clock() - t0)
    best = score(b0)
    for it in range(1, max_iter + 1):
        scored = []
        hit = None
        for idx, step in enumerate(steps):
            a_cand = current * step
            b_cand = induced(a_cand)
            if certified(a_cand, b_cand):
                hit = (a_cand, b_cand)
                break
            scored.append((score(b_cand), idx, a_cand))
        if hit is not None:
            return AttackResult(True, hit, it, 0, clock() - t0)
        d0, _, a0 = min(scored, key=lambda s: (s[0], s[1]))
        best = min(best, d0)
        current = a0
    return AttackResult(False, None, max_iter, best, clock() - t0)


def derivation_descent(instance: AttackInstance,
                       ell: Callable[[GroupElement], int] = default_length,
                       beam: int = 8, max_nodes: int = 2048,
                       max_len: int = 48, window: Optional[int] = None,
                       verify_trials: int = 32,
                       clock: Callable[[], float] = time.perf_counter
                       ) -> AttackResult:
    """Beam search over partial leftmost derivations of the left grammar.

    Each partial derivation is completed optimistically (remaining
    nonterminals replaced by their shortest terminal yields, which keeps
    the completion inside the language), inducing a left-factor candidate
    whose right factor is scored by ``ell``.  Success is certified the same
    way as in the greedy attack.
    """
    if beam < 1:
        raise ValueError("beam must be at least 1")
    pub = instance.pub
    grammar = pub.spec_a.grammar
    group = pub.group
    is_member, _ = _right_factor_tools(instance, window)
    w_inv = pub.w.inverse()
    t0 = clock()

    yield_cache: dict = {}

    def completion(form: tuple) -> tuple:
        out: list = []
        for sym in form:
            if grammar.is_nonterminal(sym):
                if sym not in yield_cache:
                    yield_cache[sym] = shortest_word(grammar, sym)
                out.extend(yield_cache[sym])
            else:
                out.append(sym)
        return tuple(out)

    def assess(form: tuple):
        word = completion(form)
        a_cand = group.evaluate(word)
        b_cand = w_inv * a_cand.inverse() * instance.target
        return ell(b_cand), a_cand, b_cand

    def certified(a_cand, b_cand) -> bool:
        return is_member(b_cand) and verify_break(
            pub, instance.target, instance.target,
            a_cand, b_cand, a_cand, b_cand, trials=verify_trials,
        )

    root = (grammar.start,)
    s, a_cand, b_cand = assess(root)
    best = s
    if certified(a_cand, b_cand):
        return AttackResult(True, (a_cand, b_cand), 0, 0, clock() - t0)

    frontier = [(s, 0, root)]
    expanded = 0
    tiebreak = 1
    while frontier and expanded < max_nodes:
        children = []
        for _, _, form in frontier:
            left = next(
                (i for i, sym in enumerate(form) if grammar.is_nonterminal(sym)),
                None,
            )
            if left is None:
                continue
            for rhs in grammar._productive_rules_by_lhs.get(form[left], ()):
                child = form[:left] + rhs + form[left + 1:]
                terminals = sum(
                    1 for sym in child if not grammar.is_nonterminal(sym)
                )
                if terminals > max_len:
                    continue
                expanded += 1
                s, a_cand, b_cand = assess(child)
                best = min(best, s)
                if certified(a_cand, b_cand):
                    return AttackResult(
                        True, (a_cand, b_cand), expanded, 0, clock() - t0
                    )
                children.append((s, tiebreak, child))
                tiebreak += 1
                if expanded >= max_nodes:
                    break
            if expanded >= max_nodes:
                break
        children.sort(key=lambda node: (node[0], node[1]))
        frontier = children[:beam]
    return AttackResult(False, None, expanded, best, clock() - t0)


# ---------------------------------------------------------------------------
# experiment runner


@dataclass(frozen=True)
class GridPoint:
    """One cell of an experiment sweep; everything needed to build instances."""

    grid_id: str
    rows: tuple
    u: tuple
    v: tuple
    w: tuple  # (p, base vector, q), normalised through GroupParams.element
    krange: str = "integers"
    max_length: int = 20
    depth_cap: int = 4
    max_iter: int = 64
    beam: int = 8
    max_nodes: int = 512
    gens_window: int = 2
    window: Optional[int] = None


def build_p1_instance(point: GridPoint, trial_seed: int) -> AttackInstance:
    """A genuine seeded protocol round packaged as an attack target."""
    group = GroupParams(IntMatrix(point.rows))
    w = group.element(point.w[0], point.w[1], point.w[2])
    pub = p1_setup(group, point.u, point.v, w, point.krange,
                   check_trials=8, check_seed=derive_seed(trial_seed, "check"))
    policy_a = SamplePolicy(max_length=point.max_length,
                            depth_cap=point.depth_cap,
                            seed=derive_seed(trial_seed, "alice"))
    policy_b = SamplePolicy(max_length=point.max_length,
                            depth_cap=point.depth_cap,
                            seed=derive_seed(trial_seed, "bob"))
    _, msg_a, _, _ = p1_round(pub, policy_a, policy_b)
    u_vec = extract_orbit_generator(pub.spec_a)
    base = group.base(u_vec)
    gens = tuple(
        base.conj_t(k) for k in range(-point.gens_window, point.gens_window + 1)
    )
    return AttackInstance(pub, msg_a, gens)


def _run_one(point: GridPoint, mode: str, trial_seed: int,
             clock: Callable[[], float]) -> AttackResult:
    instance = build_p1_instance(point, trial_seed)
    if mode == "rst":
        return rst_greedy(instance, max_iter=point.max_iter,
                          window=point.window, clock=clock)
    if mode == "descent":
        return derivation_descent(instance, beam=point.beam,
                                  max_nodes=point.max_nodes,
                                  max_len=point.max_length,
                                  window=point.window, clock=clock)
    raise ValueError(f"unknown attack mode {mode!r}")


def run_experiments(grid: Sequence[GridPoint], trials: int, seed: int,
                    clock: Optional[Callable[[], float]] = None,
                    collect: bool = False):
    """Run both attacks over the grid; returns CSV text (and trial records).

    Per-trial seeds derive from the master seed, and the default clock is
    constant, so identical calls produce identical bytes.  Pass a real
    clock (time.perf_counter) to record wall-time means instead.
    """
    clock = clock if clock is not None else zero_clock
    lines = [CSV_HEADER]
    records = []
    for point in grid:
        for mode in ("rst", "descent"):
            if trials <= 0:
                continue
            successes = 0
            total_iters = 0
            total_ms = 0.0
            for trial in range(trials):
                trial_seed = derive_seed(
                    seed, "sweep", point.grid_id, mode, trial)
                t0 = clock()
                result = _run_one(point, mode, trial_seed, clock)
                elapsed_ms = (clock() - t0) * 1000.0
                successes += int(result.success)
                total_iters += result.iterations
                total_ms += elapsed_ms
                if collect:
                    records.append({
                        "grid_id": point.grid_id,
                        "mode": mode,
                        "trial": trial,
                        "success": result.success,
                        "iterations": result.iterations,
                        "best_score": str(result.best_score),
                        "elapsed_ms": round(elapsed_ms, 3),
                    })
            lines.append(
                f"{point.grid_id},{mode},{trials},{successes},"
                f"{total_iters / trials:.3f},{total_ms / trials:.3f}"
            )
    csv_text = "\n".join(lines) + "\n"
    if collect:
        return csv_text, records
    return csv_text
