"""Key-exchange flows over the HNN-extension groups.

Three desk-scale protocols, all exchanging exact normal forms:

  p1        both parties draw one factor from each of two public commuting
            subsets (grammar-sampled) and the shared key interleaves the
            four secret factors around a public word w,
  p2        each party anchors a secret element, publishes a grammar whose
            image commutes with that anchor, and picks its second factor
            from the peer's published grammar,
  orbit-dh  Diffie-Hellman along powers of the matrix endomorphism acting
            on the base lattice.

A full exchange is a pure function of public data and the parties' seeds:
every random pick flows through labelled substreams of the policy seeds, so
transcripts reproduce bit for bit.  Commutation of the published subsets is
spot-checked at setup and any key disagreement raises instead of returning,
so a silent mismatch cannot escape.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Optional

from .grammars import SamplePolicy, SubsetSpec, orbit_spec, subgroup_closure
from .groups import GroupElement, GroupParams, Vec
from .seeding import derive_seed

__all__ = [
    "PublicParams1",
    "PartySecret1",
    "PublicParams2",
    "Party2State",
    "OrbitDHParams",
    "SessionKey",
    "CommutationError",
    "KeyAgreementError",
    "commutation_spot_check",
    "p1_setup",
    "p1_round",
    "p1_keys",
    "p2_party_setup",
    "p2_exchange",
    "p2_exchange_full",
    "orbit_dh",
    "DEFAULT_EXP_BOUND",
]

DEFAULT_EXP_BOUND = 1 << 20


class CommutationError(RuntimeError):
    """A sampled cross pair failed to commute; the construction is broken."""


class KeyAgreementError(RuntimeError):
    """The two parties derived different keys; must not occur."""


@dataclass(frozen=True)
class PublicParams1:
    group: GroupParams
    w: GroupElement
    spec_a: SubsetSpec
    spec_b: SubsetSpec


@dataclass(frozen=True)
class PartySecret1:
    a: GroupElement
    b: GroupElement


@dataclass(frozen=True)
class PublicParams2:
    group: GroupParams
    w: GroupElement


@dataclass(frozen=True)
class Party2State:
    secret_anchor: GroupElement
    published_spec: SubsetSpec
    peer_pick: Optional[GroupElement] = None


@dataclass(frozen=True)
class OrbitDHParams:
    group: GroupParams
    x: Vec


@dataclass(frozen=True)
class SessionKey:
    value: object  # GroupElement for p1/p2, base vector for orbit-dh


_CHECK_POLICY = SamplePolicy(max_length=24, depth_cap=4)


def commutation_spot_check(spec_x: SubsetSpec, spec_y: SubsetSpec,
                           trials: int = 32, seed: int = 0,
                           policy: Optional[SamplePolicy] = None) -> None:
    """Sample cross pairs and require literal element equality of products."""
    base = policy if policy is not None else _CHECK_POLICY
    for i in range(trials):
        x = spec_x.sample_element(replace(base, seed=derive_seed(seed, "commute.x", i)))
        y = spec_y.sample_element(replace(base, seed=derive_seed(seed, "commute.y", i)))
        if x * y != y * x:
            raise CommutationError(
                f"sampled cross pair fails to commute (trial {i})"
            )


def _closure_of_orbit(group: GroupParams, u: Iterable[int], krange: str) -> SubsetSpec:
    word = group.base(u).to_word()
    return subgroup_closure(orbit_spec(group, word, krange))


def p1_setup(group: GroupParams, u: Iterable[int], v: Iterable[int],
             w: GroupElement, krange: str = "integers",
             check_trials: int = 32, check_seed: int = 0,
             check_policy: Optional[SamplePolicy] = None) -> PublicParams1:
    """Publish the subgroup closures of the conjugate orbits of u and v.

    Elements of the two closures commute pairwise for any u, v; the spot
    check guards the implementation, not the mathematics.
    """
    spec_a = _closure_of_orbit(group, u, krange)
    spec_b = _closure_of_orbit(group, v, krange)
    commutation_spot_check(spec_a, spec_b, trials=check_trials,
                           seed=check_seed, policy=check_policy)
    return PublicParams1(group, w, spec_a, spec_b)


def p1_round(pub: PublicParams1, policy_a: SamplePolicy,
             policy_b: SamplePolicy):
    """One exchange: Alice sends a1 w b1, Bob sends b2 w a2.

    Returns (alice_secret, msg_a, bob_secret, msg_b); the secrets stay with
    their parties, the messages go on the wire.
    """
    a1 = pub.spec_a.sample_element(
        replace(policy_a, seed=derive_seed(policy_a.seed, "p1.a1")))
    b1 = pub.spec_b.sample_element(
        replace(policy_a, seed=derive_seed(policy_a.seed, "p1.b1")))
    a2 = pub.spec_a.sample_element(
        replace(policy_b, seed=derive_seed(policy_b.seed, "p1.a2")))
    b2 = pub.spec_b.sample_element(
        replace(policy_b, seed=derive_seed(policy_b.seed, "p1.b2")))
    alice = PartySecret1(a1, b1)
    bob = PartySecret1(a2, b2)
    return alice, a1 * pub.w * b1, bob, b2 * pub.w * a2


def p1_keys(pub: PublicParams1, alice: PartySecret1, msg_b: GroupElement,
            bob: PartySecret1, msg_a: GroupElement):
    """Both parties wrap the peer's message in their own secrets.

    K_A = a1 (b2 w a2) b1 and K_B = b2 (a1 w b1) a2 agree exactly because
    the published subsets commute.
    """
    k_a = alice.a * msg_b * alice.b
    k_b = bob.b * msg_a * bob.a
    if k_a != k_b:
        raise KeyAgreementError("p1 key mismatch: commutation violated")
    return SessionKey(k_a), SessionKey(k_b)


def p2_party_setup(pub: PublicParams2, u: Iterable[int], policy: SamplePolicy,
                   krange: str = "integers",
                   check_trials: int = 32) -> Party2State:
    """Anchor a secret in the orbit closure of u and publish that closure.

    The closure is abelian, so every published sample commutes with the
    anchor; the spot check enforces it anyway.
    """
    u = tuple(int(e) for e in u)
    if not any(u):
        raise ValueError("orbit generator must be nonzero")
    spec = _closure_of_orbit(pub.group, u, krange)
    anchor = spec.sample_element(
        replace(policy, seed=derive_seed(policy.seed, "p2.anchor")))
    for i in range(check_trials):
        s = spec.sample_element(
            replace(policy, seed=derive_seed(policy.seed, "p2.check", i)))
        if s * anchor != anchor * s:
            raise CommutationError(
                f"published sample fails to commute with anchor (trial {i})"
            )
    return Party2State(anchor, spec)


def p2_exchange_full(pub: PublicParams2, alice: Party2State, bob: Party2State,
                     policy: SamplePolicy):
    """Run the hidden-anchor exchange, returning states, messages, and keys.

    Alice samples a2 from Bob's published grammar and sends a1 w a2; Bob
    samples b1 from Alice's and sends b1 w b2.  K_A = a1 (b1 w b2) a2 and
    K_B = b1 (a1 w a2) b2 agree exactly.
    """
    a2 = bob.published_spec.sample_element(
        replace(policy, seed=derive_seed(policy.seed, "p2.a2")))
    b1 = alice.published_spec.sample_element(
        replace(policy, seed=derive_seed(policy.seed, "p2.b1")))
    msg_a = alice.secret_anchor * pub.w * a2
    msg_b = b1 * pub.w * bob.secret_anchor
    k_a = alice.secret_anchor * msg_b * a2
    k_b = b1 * msg_a * bob.secret_anchor
    if k_a != k_b:
        raise KeyAgreementError("p2 key mismatch: centralizer invariant violated")
    states = (replace(alice, peer_pick=a2), replace(bob, peer_pick=b1))
    return states, (msg_a, msg_b), (SessionKey(k_a), SessionKey(k_b))


def p2_exchange(pub: PublicParams2, alice: Party2State, bob: Party2State,
                policy: SamplePolicy):
    _, _, keys = p2_exchange_full(pub, alice, bob, policy)
    return keys


def orbit_dh(group: GroupParams, x: Iterable[int], m_a: int, n_b: int,
             max_exp: int = DEFAULT_EXP_BOUND):
    """Diffie-Hellman in the base lattice: K = x M^(m_a + n_b).

    Returns (msg_a, msg_b, key); both association orders are computed and
    compared, so a disagreement raises instead of yielding a bad key.
    """
    x = tuple(int(e) for e in x)
    if m_a < 0 or n_b < 0:
        raise ValueError("exponents must be nonnegative")
    if m_a > max_exp or n_b > max_exp:
        raise ValueError(f"exponent bound {max_exp} exceeded")
    msg_a = group.phi_power(x, m_a)
    msg_b = group.phi_power(x, n_b)
    k_a = group.phi_power(msg_b, m_a)
    k_b = group.phi_power(msg_a, n_b)
    if k_a != k_b:
        raise KeyAgreementError("orbit-dh power mismatch")
    return msg_a, msg_b, k_a
