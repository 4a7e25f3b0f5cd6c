"""Local-hidden-variable-plus-communication protocols for the CHSH game.

A :class:`Protocol` bundles a shared hidden variable ``lam`` (visible to
both parties), private randomness for each party, Bob's output and
message tables, and Alice's output table.  The referee's settings ``a``
and ``b`` are external fair independent bits.  Communication is one-way:
Bob computes his outcome ``B`` and a message ``chi`` from ``(b, lam,
mu_B)``, Alice computes ``A`` from ``(a, lam, chi, mu_A)``.  Private
randomness is marginalised out of every exported joint, so ``lam`` and
``chi`` are exactly the resources Alice's information is measured
against.

Enumeration uses rational arithmetic throughout, which keeps structural
identities (non-signaling toward Bob, relabelling symmetries, exact
independence of masked outcomes) true at the level of dictionary
equality rather than within a tolerance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Mapping

import numpy as np

from .infocore import DiscreteJoint, marginalize
from .scores import (
    ALL_VARIANTS,
    InfoReport,
    ScoreReport,
    STANDARD_VARIANT,
    beta_score,
    chsh_setting_conditionals,
    chsh_variant_score,
    full_report,
    ic_alpha,
)

DEFAULT_PATH_CAP = 10_000_000

JOINT_VARIABLE_ORDER = ("a", "b", "A", "B", "lam", "chi")

#: named single-bit response maps accepted in ``local:<fA>,<fB>`` references
LOCAL_MAPS: dict[str, dict[int, int]] = {
    "const0": {0: 0, 1: 0},
    "const1": {0: 1, 1: 1},
    "id": {0: 0, 1: 1},
    "not": {0: 1, 1: 0},
}


class ProtocolError(ValueError):
    """A protocol definition or reference is malformed."""


class EnumerationCapError(ValueError):
    """Exact enumeration would exceed the configured path cap."""


Pmf = tuple[tuple[int, float], ...]


def _validate_pmf(name: str, pmf: Pmf) -> Pmf:
    pmf = tuple((int(v), p) for v, p in pmf)
    if not pmf:
        raise ProtocolError(f"{name}: empty support")
    values = [v for v, _ in pmf]
    if len(set(values)) != len(values):
        raise ProtocolError(f"{name}: duplicate values {values}")
    for v, p in pmf:
        if not 0 <= p <= 1:
            raise ProtocolError(f"{name}: probability {p!r} for value {v} outside [0, 1]")
    total = math.fsum(float(p) for _, p in pmf)
    if abs(total - 1.0) > 1e-9:
        raise ProtocolError(f"{name}: probabilities sum to {total!r}, not 1")
    return pmf


@dataclass(frozen=True)
class Protocol:
    """One LHV+C strategy: distributions plus total lookup tables.

    ``bob_output`` and ``message`` are keyed by ``(b, lam_value,
    mu_B_value)``; ``alice_output`` by ``(a, lam_value, chi, mu_A_value)``
    and must be total for every message symbol in ``range(message_alphabet)``.
    """

    lambda_dist: Pmf
    bob_private: Pmf
    alice_private: Pmf
    bob_output: Mapping[tuple[int, int, int], int]
    message: Mapping[tuple[int, int, int], int]
    alice_output: Mapping[tuple[int, int, int, int], int]
    message_alphabet: int = 2
    name: str = "protocol"
    seed: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "lambda_dist", _validate_pmf("lambda", self.lambda_dist))
        object.__setattr__(self, "bob_private", _validate_pmf("bob_private", self.bob_private))
        object.__setattr__(self, "alice_private", _validate_pmf("alice_private", self.alice_private))
        if self.message_alphabet < 2:
            raise ProtocolError(f"message_alphabet must be >= 2, got {self.message_alphabet}")
        lam_values = [v for v, _ in self.lambda_dist]
        for b in (0, 1):
            for lv in lam_values:
                for mv, _ in self.bob_private:
                    key = (b, lv, mv)
                    if key not in self.bob_output:
                        raise ProtocolError(f"bob_output missing entry for (b, lam, mu_B)={key}")
                    if self.bob_output[key] not in (0, 1):
                        raise ProtocolError(f"bob_output[{key}] = {self.bob_output[key]!r} is not a bit")
                    if key not in self.message:
                        raise ProtocolError(f"message missing entry for (b, lam, mu_B)={key}")
                    if not 0 <= self.message[key] < self.message_alphabet:
                        raise ProtocolError(
                            f"message[{key}] = {self.message[key]!r} outside "
                            f"range({self.message_alphabet})"
                        )
        for a in (0, 1):
            for lv in lam_values:
                for chi in range(self.message_alphabet):
                    for mv, _ in self.alice_private:
                        key = (a, lv, chi, mv)
                        if key not in self.alice_output:
                            raise ProtocolError(
                                f"alice_output missing entry for (a, lam, chi, mu_A)={key}"
                            )
                        if self.alice_output[key] not in (0, 1):
                            raise ProtocolError(
                                f"alice_output[{key}] = {self.alice_output[key]!r} is not a bit"
                            )

    @property
    def lambda_values(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.lambda_dist)


def exact_joint(protocol: Protocol, path_cap: int = DEFAULT_PATH_CAP) -> DiscreteJoint:
    """Exact joint over (a, b, A, B, lam, chi) by exhaustive enumeration.

    The hidden variable is exported as its index in the declared support.
    Private randomness is summed out.  Probabilities are exact rationals
    built from the declared pmf values.
    """
    n_lam = len(protocol.lambda_dist)
    n_b = len(protocol.bob_private)
    n_a = len(protocol.alice_private)
    paths = 4 * n_lam * n_b * n_a
    if paths > path_cap:
        raise EnumerationCapError(f"enumeration needs {paths} paths, cap is {path_cap}")

    quarter = Fraction(1, 4)
    lam = [(i, v, Fraction(p)) for i, (v, p) in enumerate(protocol.lambda_dist)]
    bob = [(v, Fraction(p)) for v, p in protocol.bob_private]
    alice = [(v, Fraction(p)) for v, p in protocol.alice_private]

    acc: dict[tuple[int, ...], Fraction] = {}
    zero = Fraction(0)
    for a in (0, 1):
        for b in (0, 1):
            for li, lv, lp in lam:
                base = quarter * lp
                for bv, bp in bob:
                    B = protocol.bob_output[(b, lv, bv)]
                    chi = protocol.message[(b, lv, bv)]
                    partial = base * bp
                    for av, ap in alice:
                        A = protocol.alice_output[(a, lv, chi, av)]
                        key = (a, b, A, B, li, chi)
                        acc[key] = acc.get(key, zero) + partial * ap

    variables = (
        ("a", 2),
        ("b", 2),
        ("A", 2),
        ("B", 2),
        ("lam", n_lam),
        ("chi", protocol.message_alphabet),
    )
    return DiscreteJoint(variables, acc)


@dataclass(frozen=True)
class EmpiricalJoint:
    """Monte Carlo counts over (a, b, A, B, lam, chi) from a seeded run."""

    variables: tuple[tuple[str, int], ...]
    counts: Mapping[tuple[int, ...], int]
    total: int
    seed: int

    def __post_init__(self) -> None:
        if self.total < 1:
            raise ValueError("total must be positive")
        if sum(self.counts.values()) != self.total:
            raise ValueError("counts do not sum to total")

    def to_joint(self) -> DiscreteJoint:
        """Exact empirical distribution: each count divided by the total."""
        return DiscreteJoint(
            self.variables,
            {k: Fraction(c, self.total) for k, c in self.counts.items()},
        )


def _categorical(cum: np.ndarray, u: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(cum, u, side="right")
    return np.minimum(idx, len(cum) - 1)


def sample_joint(protocol: Protocol, n: int, seed: int) -> EmpiricalJoint:
    """n i.i.d. rounds of the protocol with a seeded generator.

    One block of uniforms is drawn up front and consumed in the fixed
    order (a, b, lam, mu_B, mu_A), so identical (protocol, n, seed)
    inputs give identical counts.
    """
    if n < 1:
        raise ValueError(f"need at least one trial, got {n}")
    rng = np.random.default_rng(seed)
    u = rng.random(size=(5, n))

    lam_cum = np.cumsum([p for _, p in protocol.lambda_dist])
    bob_cum = np.cumsum([p for _, p in protocol.bob_private])
    alice_cum = np.cumsum([p for _, p in protocol.alice_private])

    a = (u[0] < 0.5).astype(np.int64)
    b = (u[1] < 0.5).astype(np.int64)
    lam_idx = _categorical(lam_cum, u[2])
    mu_b_idx = _categorical(bob_cum, u[3])
    mu_a_idx = _categorical(alice_cum, u[4])

    n_lam = len(protocol.lambda_dist)
    n_b = len(protocol.bob_private)
    n_a = len(protocol.alice_private)
    m = protocol.message_alphabet
    lam_values = protocol.lambda_values
    bob_values = [v for v, _ in protocol.bob_private]
    alice_values = [v for v, _ in protocol.alice_private]

    bob_tbl = np.zeros((2, n_lam, n_b), dtype=np.int64)
    msg_tbl = np.zeros((2, n_lam, n_b), dtype=np.int64)
    for bb in (0, 1):
        for li, lv in enumerate(lam_values):
            for mi, mv in enumerate(bob_values):
                bob_tbl[bb, li, mi] = protocol.bob_output[(bb, lv, mv)]
                msg_tbl[bb, li, mi] = protocol.message[(bb, lv, mv)]
    alice_tbl = np.zeros((2, n_lam, m, n_a), dtype=np.int64)
    for aa in (0, 1):
        for li, lv in enumerate(lam_values):
            for chi in range(m):
                for mi, mv in enumerate(alice_values):
                    alice_tbl[aa, li, chi, mi] = protocol.alice_output[(aa, lv, chi, mv)]

    B = bob_tbl[b, lam_idx, mu_b_idx]
    chi = msg_tbl[b, lam_idx, mu_b_idx]
    A = alice_tbl[a, lam_idx, chi, mu_a_idx]

    code = ((((a * 2 + b) * 2 + A) * 2 + B) * n_lam + lam_idx) * m + chi
    counts = np.bincount(code, minlength=16 * n_lam * m)

    atoms: dict[tuple[int, ...], int] = {}
    for flat in np.nonzero(counts)[0]:
        rest, c_chi = divmod(int(flat), m)
        rest, c_lam = divmod(rest, n_lam)
        rest, c_B = divmod(rest, 2)
        rest, c_A = divmod(rest, 2)
        c_a, c_b = divmod(rest, 2)
        atoms[(c_a, c_b, c_A, c_B, c_lam, c_chi)] = int(counts[flat])

    variables = (("a", 2), ("b", 2), ("A", 2), ("B", 2), ("lam", n_lam), ("chi", m))
    return EmpiricalJoint(variables, atoms, n, seed)


# ---------------------------------------------------------------------------
# named constructions
# ---------------------------------------------------------------------------

_TRIVIAL: Pmf = ((0, 1.0),)


def make_local_deterministic(fA: Mapping[int, int], fB: Mapping[int, int]) -> Protocol:
    """Classical no-communication strategy: A = fA(a), B = fB(b).

    The hidden variable and message are constant, so the exported joint
    carries no nonlocal information at all.
    """
    for label, f in (("fA", fA), ("fB", fB)):
        if set(f) != {0, 1} or any(f[x] not in (0, 1) for x in (0, 1)):
            raise ProtocolError(f"{label} must map each bit to a bit, got {dict(f)}")
    return Protocol(
        lambda_dist=_TRIVIAL,
        bob_private=_TRIVIAL,
        alice_private=_TRIVIAL,
        bob_output={(b, 0, 0): fB[b] for b in (0, 1)},
        message={(b, 0, 0): 0 for b in (0, 1)},
        alice_output={(a, 0, chi, 0): fA[a] for a in (0, 1) for chi in (0, 1)},
        name=f"local:{fA[0]}{fA[1]},{fB[0]}{fB[1]}",
    )


def enumerate_local_deterministic() -> Iterator[Protocol]:
    """All 256 deterministic no-communication strategy pairs.

    Each party's strategy is a response table (own setting, shared bit)
    -> output, 16 tables per party, evaluated over a fair shared bit with
    a constant message.  The 16 tables that ignore the shared bit recover
    the plain deterministic pairs.
    """
    for fa_code in range(16):
        for fb_code in range(16):
            alice = {
                (a, lam, chi, 0): (fa_code >> (2 * a + lam)) & 1
                for a in (0, 1)
                for lam in (0, 1)
                for chi in (0, 1)
            }
            bob = {(b, lam, 0): (fb_code >> (2 * b + lam)) & 1 for b in (0, 1) for lam in (0, 1)}
            yield Protocol(
                lambda_dist=((0, 0.5), (1, 0.5)),
                bob_private=_TRIVIAL,
                alice_private=_TRIVIAL,
                bob_output=bob,
                message={(b, lam, 0): 0 for b in (0, 1) for lam in (0, 1)},
                alice_output=alice,
                name=f"local-det:{fa_code}:{fb_code}",
            )


def make_one_bit_pr() -> Protocol:
    """PR-box simulation with one bit of communication.

    Shared fair bit r; Bob outputs B = r and sends chi = b; Alice outputs
    A = r xor (a and chi).  The joint satisfies A xor B = a*b always.
    """
    return Protocol(
        lambda_dist=((0, 0.5), (1, 0.5)),
        bob_private=_TRIVIAL,
        alice_private=_TRIVIAL,
        bob_output={(b, r, 0): r for b in (0, 1) for r in (0, 1)},
        message={(b, r, 0): b for b in (0, 1) for r in (0, 1)},
        alice_output={(a, r, chi, 0): r ^ (a & chi) for a in (0, 1) for r in (0, 1) for chi in (0, 1)},
        name="pr-onebit",
    )


def make_biased_strategy(p: float, flavor: str | int) -> Protocol:
    """Bell violation with zero outcome information, via a biased marginal.

    Bob's outcome is a private p-biased coin (P(B=1) = p; the hidden
    variable is constant, so nothing upstream of Alice knows B) and the
    message is B xor b, which is a fair bit independent of B.  Alice
    outputs a constant on a=0 and decodes B xor b from the message on
    a=1.

    ``flavor="one"`` is the constant-1 version, which scores (1+p)/2 on
    the standard variant (0,0,0).  ``flavor="zero"`` is the image of the
    "one" protocol under the local relabelling A -> A xor 1, b -> b xor 1
    (messages included), which moves the same score onto variant (1,0,1).
    """
    if not 0.0 <= p <= 1.0:
        raise ProtocolError(f"bias p={p!r} outside [0, 1]")
    if flavor in ("one", 1):
        constant, invert = 1, 0
    elif flavor in ("zero", 0):
        constant, invert = 0, 1
    else:
        raise ProtocolError(f"flavor must be 'one' or 'zero', got {flavor!r}")
    return Protocol(
        lambda_dist=_TRIVIAL,
        bob_private=((0, 1.0 - p), (1, p)),
        alice_private=_TRIVIAL,
        bob_output={(b, 0, mu): mu for b in (0, 1) for mu in (0, 1)},
        message={(b, 0, mu): mu ^ b ^ invert for b in (0, 1) for mu in (0, 1)},
        alice_output={
            (a, 0, chi, 0): constant if a == 0 else chi ^ invert
            for a in (0, 1)
            for chi in (0, 1)
        },
        name=f"biased:{p}:{'one' if constant else 'zero'}",
    )


# ---------------------------------------------------------------------------
# seeded random protocol generators
# ---------------------------------------------------------------------------


def _random_pmf(rng: np.random.Generator, n: int) -> Pmf:
    w = rng.random(n) + 0.05
    w = w / w.sum()
    return tuple((i, float(p)) for i, p in enumerate(w))


def _random_bit_table(rng: np.random.Generator, keys: list[tuple]) -> dict[tuple, int]:
    bits = rng.integers(0, 2, size=len(keys))
    return {k: int(v) for k, v in zip(keys, bits)}


def random_protocol(
    seed: int,
    sizes: tuple[int, int, int] = (3, 3, 3),
    b_independent_message: bool = False,
) -> Protocol:
    """Fully random lookup tables over the given (lam, mu_B, mu_A) support sizes.

    With ``b_independent_message`` the message table is drawn as a
    function of (lam, mu_B) alone, so the exported joint has exactly zero
    setting information at Alice's site.
    """
    rng = np.random.default_rng(seed)
    n_lam, n_b, n_a = sizes
    lam_dist = _random_pmf(rng, n_lam)
    bob_priv = _random_pmf(rng, n_b)
    alice_priv = _random_pmf(rng, n_a)

    bob_keys = [(b, l, mu) for b in (0, 1) for l in range(n_lam) for mu in range(n_b)]
    bob_output = _random_bit_table(rng, bob_keys)
    if b_independent_message:
        core = _random_bit_table(rng, [(l, mu) for l in range(n_lam) for mu in range(n_b)])
        message = {(b, l, mu): core[(l, mu)] for b, l, mu in bob_keys}
    else:
        message = _random_bit_table(rng, bob_keys)
    alice_keys = [
        (a, l, chi, mu) for a in (0, 1) for l in range(n_lam) for chi in (0, 1) for mu in range(n_a)
    ]
    alice_output = _random_bit_table(rng, alice_keys)
    tag = "random-b-indep" if b_independent_message else "random"
    return Protocol(
        lambda_dist=lam_dist,
        bob_private=bob_priv,
        alice_private=alice_priv,
        bob_output=bob_output,
        message=message,
        alice_output=alice_output,
        name=f"{tag}:{seed}",
        seed=seed,
    )


def random_protocol_b_independent(seed: int, sizes: tuple[int, int, int] = (3, 3, 3)) -> Protocol:
    """Random protocol whose message ignores Bob's setting (chi = f(lam, mu_B))."""
    return random_protocol(seed, sizes, b_independent_message=True)


def random_protocol_outcome_masked(
    seed: int,
    sizes: tuple[int, int, int] = (3, 3, 3),
    xor_message: bool = False,
) -> Protocol:
    """Random protocol with an unbiased outcome carrying no information to Alice.

    Bob's private randomness is (t, s) with s a fair coin.  In the default
    family B = table(b, lam, t) xor s while the message sees only (b,
    lam, t), so B is fair and independent of (lam, chi) by construction.
    With ``xor_message`` the coin itself is the outcome (B = s) and the
    message is B xor b xor mask(lam, t): the fair setting bit masks the
    outcome inside the message, again forcing I(B; lam, chi) = 0, while a
    lucky Alice can still decode B xor b and reach the classical boundary.
    """
    rng = np.random.default_rng(seed)
    n_lam, n_t, n_a = sizes
    lam_dist = _random_pmf(rng, n_lam)
    t_pmf = _random_pmf(rng, n_t)
    # mu_B = 2*t + s with s fair given t
    bob_priv = tuple((2 * t + s, p / 2.0) for t, p in t_pmf for s in (0, 1))
    alice_priv = _random_pmf(rng, n_a)

    core_keys = [(b, l, t) for b in (0, 1) for l in range(n_lam) for t in range(n_t)]
    bob_keys = [(b, l, 2 * t + s) for b, l, t in core_keys for s in (0, 1)]

    if xor_message:
        mask_on_t = bool(rng.integers(0, 2))
        mask = _random_bit_table(rng, [(l, t) for l in range(n_lam) for t in range(n_t)])
        bob_output = {(b, l, mu): mu & 1 for b, l, mu in bob_keys}
        message = {
            (b, l, 2 * t + s): s ^ b ^ mask[(l, t if mask_on_t else 0)]
            for b, l, t in core_keys
            for s in (0, 1)
        }
        smart_alice = not mask_on_t and bool(rng.integers(0, 2))
        alice_keys = [
            (a, l, chi, mu)
            for a in (0, 1)
            for l in range(n_lam)
            for chi in (0, 1)
            for mu in range(n_a)
        ]
        alice_output = _random_bit_table(rng, alice_keys)
        if smart_alice:
            for l in range(n_lam):
                for chi in (0, 1):
                    for mu in range(n_a):
                        alice_output[(1, l, chi, mu)] = chi ^ mask[(l, 0)]
    else:
        base = _random_bit_table(rng, core_keys)
        msg_core = _random_bit_table(rng, core_keys)
        bob_output = {(b, l, 2 * t + s): base[(b, l, t)] ^ s for b, l, t in core_keys for s in (0, 1)}
        message = {(b, l, 2 * t + s): msg_core[(b, l, t)] for b, l, t in core_keys for s in (0, 1)}
        alice_keys = [
            (a, l, chi, mu)
            for a in (0, 1)
            for l in range(n_lam)
            for chi in (0, 1)
            for mu in range(n_a)
        ]
        alice_output = _random_bit_table(rng, alice_keys)

    return Protocol(
        lambda_dist=lam_dist,
        bob_private=bob_priv,
        alice_private=alice_priv,
        bob_output=bob_output,
        message=message,
        alice_output=alice_output,
        name=f"random-outcome-masked:{seed}" + (":xor" if xor_message else ""),
        seed=seed,
    )


# ---------------------------------------------------------------------------
# analysis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CellStats:
    """Conditional outcome probabilities inside one (lam, chi) cell.

    ``p1 = P(B=0 | b=0, cell)`` and ``p2 = P(B=0 | b=1, cell)``; either is
    None when the cell gives the corresponding setting no support.
    """

    lam_index: int
    lam_value: int
    chi: int
    weight: float
    p1: float | None
    p2: float | None


@dataclass(frozen=True)
class AnalysisReport:
    """Scores, information quantities and per-cell statistics of one protocol."""

    protocol: str
    seed: int | None
    score: ScoreReport
    info: InfoReport
    standard_conditionals: Mapping[tuple[int, int], float]
    cells: tuple[CellStats, ...]
    joint: DiscreteJoint = field(repr=False)


def _cell_stats(joint: DiscreteJoint, protocol: Protocol) -> tuple[CellStats, ...]:
    reduced = marginalize(joint, ("b", "B", "lam", "chi"))
    ib, iB = reduced.index("b"), reduced.index("B")
    il, ic = reduced.index("lam"), reduced.index("chi")
    weight: dict[tuple[int, int], Fraction | float] = {}
    by_setting: dict[tuple[int, int, int], Fraction | float] = {}
    zeros: dict[tuple[int, int, int], Fraction | float] = {}
    for key, p in reduced.pmf.items():
        cell = (key[il], key[ic])
        weight[cell] = weight.get(cell, 0) + p
        sk = (key[il], key[ic], key[ib])
        by_setting[sk] = by_setting.get(sk, 0) + p
        if key[iB] == 0:
            zeros[sk] = zeros.get(sk, 0) + p
    lam_values = protocol.lambda_values
    cells = []
    for (li, chi), w in sorted(weight.items()):
        ps = []
        for b in (0, 1):
            den = by_setting.get((li, chi, b), 0)
            ps.append(float(zeros.get((li, chi, b), 0) / den) if den != 0 else None)
        cells.append(CellStats(li, lam_values[li], chi, float(w), ps[0], ps[1]))
    return tuple(cells)


def analyze(protocol: Protocol, path_cap: int = DEFAULT_PATH_CAP) -> AnalysisReport:
    """Exact joint plus the full score/information report for one protocol."""
    joint = exact_joint(protocol, path_cap)
    score, info = full_report(joint)
    return AnalysisReport(
        protocol=protocol.name,
        seed=protocol.seed,
        score=score,
        info=info,
        standard_conditionals=chsh_setting_conditionals(joint, STANDARD_VARIANT),
        cells=_cell_stats(joint, protocol),
        joint=joint,
    )


def empirical_scores(emp: EmpiricalJoint) -> dict:
    """Score estimates with binomial standard errors from Monte Carlo counts."""
    joint = emp.to_joint()
    frag = beta_score(joint)
    ia = [n for n, _ in emp.variables].index("a")
    n_a = {0: 0, 1: 0}
    for key, c in emp.counts.items():
        n_a[key[ia]] += c
    se = {}
    for label, p_hat, n in (
        ("p_match_a0", frag.p_match_a0, n_a[0]),
        ("p_match_a1", frag.p_match_a1, n_a[1]),
    ):
        se[label] = math.sqrt(p_hat * (1.0 - p_hat) / n) if n else float("nan")
    se["beta_score"] = 0.5 * math.hypot(se["p_match_a0"], se["p_match_a1"])
    return {
        "p_match_a0": frag.p_match_a0,
        "p_match_a1": frag.p_match_a1,
        "beta_score": frag.beta_score,
        "ic_alpha": ic_alpha(frag.p_match_a0, frag.p_match_a1),
        "variant_scores": {v.label: chsh_variant_score(joint, v) for v in ALL_VARIANTS},
        "stderr": se,
        "trials": emp.total,
        "seed": emp.seed,
    }


# ---------------------------------------------------------------------------
# references: builtin names and protocol files
# ---------------------------------------------------------------------------

BUILTIN_PROTOCOLS = (
    "local:const0,const0",
    "local:id,const0",
    "pr-onebit",
    "biased:0.8:one",
    "biased:0.8:zero",
    "biased:0.5:one",
)

#: Monte Carlo seed shipped with the builtin protocols
SHIPPED_MC_SEED = 7


def resolve_protocol(ref: str | Path) -> Protocol:
    """Builtin name (``local:..``, ``pr-onebit``, ``biased:..``,
    ``random-b-indep:<seed>``) or a path to a protocol JSON file."""
    if isinstance(ref, Path):
        return load_protocol(ref)
    if ref == "pr-onebit":
        return make_one_bit_pr()
    if ref.startswith("local:"):
        spec = ref.removeprefix("local:")
        parts = spec.split(",")
        if len(parts) != 2:
            raise ProtocolError(f"local reference needs two maps, got {ref!r}")
        maps = []
        for part in parts:
            if part not in LOCAL_MAPS:
                raise ProtocolError(f"unknown response map {part!r}; have {sorted(LOCAL_MAPS)}")
            maps.append(LOCAL_MAPS[part])
        p = make_local_deterministic(*maps)
        return _renamed(p, ref)
    if ref.startswith("biased:"):
        parts = ref.split(":")
        if len(parts) != 3:
            raise ProtocolError(f"biased reference is biased:<p>:<flavor>, got {ref!r}")
        try:
            bias = float(parts[1])
        except ValueError as exc:
            raise ProtocolError(f"bad bias in {ref!r}") from exc
        return make_biased_strategy(bias, parts[2])
    if ref.startswith("random-b-indep:"):
        return random_protocol_b_independent(_seed_of(ref, "random-b-indep:"))
    if ref.startswith("random-outcome-masked:"):
        body = ref.removeprefix("random-outcome-masked:")
        xor = body.endswith(":xor")
        seed_text = body.removesuffix(":xor")
        try:
            seed = int(seed_text)
        except ValueError as exc:
            raise ProtocolError(f"bad seed in {ref!r}") from exc
        return random_protocol_outcome_masked(seed, xor_message=xor)
    if ref.startswith("random:"):
        return random_protocol(_seed_of(ref, "random:"))
    path = Path(ref)
    if path.exists():
        return load_protocol(path)
    raise ProtocolError(f"unknown protocol reference {ref!r} (not a builtin name or a file)")


def _seed_of(ref: str, prefix: str) -> int:
    try:
        return int(ref.removeprefix(prefix))
    except ValueError as exc:
        raise ProtocolError(f"bad seed in {ref!r}") from exc


def _renamed(p: Protocol, name: str) -> Protocol:
    return Protocol(
        p.lambda_dist, p.bob_private, p.alice_private,
        p.bob_output, p.message, p.alice_output,
        p.message_alphabet, name, p.seed,
    )


def _pmf_to_jsonable(pmf: Pmf) -> list[dict]:
    return [{"value": v, "prob": p} for v, p in pmf]


def _pmf_from_jsonable(name: str, doc) -> Pmf:
    try:
        return tuple((int(e["value"]), float(e["prob"])) for e in doc)
    except (TypeError, KeyError) as exc:
        raise ProtocolError(f"{name}: expected a list of {{value, prob}} entries") from exc


def _table_to_jsonable(table: Mapping[tuple, int]) -> dict[str, int]:
    return {",".join(str(x) for x in key): int(v) for key, v in sorted(table.items())}


def _table_from_jsonable(name: str, doc, arity: int) -> dict[tuple, int]:
    if not isinstance(doc, dict):
        raise ProtocolError(f"{name}: expected an object keyed by comma-joined tuples")
    out = {}
    for key, v in doc.items():
        parts = key.split(",")
        if len(parts) != arity:
            raise ProtocolError(f"{name}: key {key!r} should have {arity} components")
        try:
            out[tuple(int(x) for x in parts)] = int(v)
        except ValueError as exc:
            raise ProtocolError(f"{name}: non-integer entry at {key!r}") from exc
    return out


def protocol_to_jsonable(p: Protocol) -> dict:
    return {
        "lambda": _pmf_to_jsonable(p.lambda_dist),
        "bob_private": _pmf_to_jsonable(p.bob_private),
        "alice_private": _pmf_to_jsonable(p.alice_private),
        "bob_output": _table_to_jsonable(p.bob_output),
        "message": _table_to_jsonable(p.message),
        "alice_output": _table_to_jsonable(p.alice_output),
        "message_alphabet": p.message_alphabet,
    }


def protocol_from_jsonable(doc: dict, name: str = "file-protocol") -> Protocol:
    if not isinstance(doc, dict):
        raise ProtocolError("protocol document must be a JSON object")
    for key in ("lambda", "bob_private", "alice_private", "bob_output", "message", "alice_output"):
        if key not in doc:
            raise ProtocolError(f"protocol document missing field {key!r}")
    return Protocol(
        lambda_dist=_pmf_from_jsonable("lambda", doc["lambda"]),
        bob_private=_pmf_from_jsonable("bob_private", doc["bob_private"]),
        alice_private=_pmf_from_jsonable("alice_private", doc["alice_private"]),
        bob_output=_table_from_jsonable("bob_output", doc["bob_output"], 3),
        message=_table_from_jsonable("message", doc["message"], 3),
        alice_output=_table_from_jsonable("alice_output", doc["alice_output"], 4),
        message_alphabet=int(doc.get("message_alphabet", 2)),
        name=name,
    )


def load_protocol(path: str | Path) -> Protocol:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ProtocolError(f"cannot read protocol file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"protocol file {path} is not valid JSON: {exc}") from exc
    return protocol_from_jsonable(doc, name=str(path))


def save_protocol(p: Protocol, path: str | Path) -> None:
    Path(path).write_text(json.dumps(protocol_to_jsonable(p), indent=2) + "\n")
