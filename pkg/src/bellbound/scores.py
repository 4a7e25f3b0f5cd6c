"""CHSH scores, the information-causality functional, and information reports.

Joints handed to this module carry the referee settings ``a``, ``b`` and
the outcomes ``A``, ``B`` (all bits); full reports additionally need the
shared hidden variable ``lam`` and Bob's message ``chi``.  Scores are in
the probability normalisation, where every local no-communication
strategy obeys ``score <= 3/4``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping, NamedTuple

from .infocore import (
    DiscreteJoint,
    InvariantBreach,
    derive_xor,
    entropy,
    guessed_information,
    mutual_information,
)

#: scores within this margin of 3/4 count as boundary, not violation
VIOLATION_MARGIN = 1e-12

XOR_NAME = "B_xor_b"


class EvaluationError(ValueError):
    """A conditional score needed an event of zero probability."""


@dataclass(frozen=True, order=True)
class VariantSpec:
    """One of the eight sign conventions of the CHSH probability functional.

    The scored event is ``A xor B == a*b xor alpha*a xor beta*b xor gamma``;
    (0, 0, 0) is the standard CHSH game.
    """

    alpha: int
    beta: int
    gamma: int

    def __post_init__(self) -> None:
        for field in (self.alpha, self.beta, self.gamma):
            if field not in (0, 1):
                raise ValueError(f"variant fields must be bits, got {self!r}")

    @property
    def label(self) -> str:
        return f"{self.alpha}{self.beta}{self.gamma}"

    @classmethod
    def from_label(cls, label: str) -> "VariantSpec":
        if len(label) != 3 or any(c not in "01" for c in label):
            raise ValueError(f"variant label must be three bits, got {label!r}")
        return cls(int(label[0]), int(label[1]), int(label[2]))


ALL_VARIANTS: tuple[VariantSpec, ...] = tuple(
    VariantSpec(a, b, g) for a in (0, 1) for b in (0, 1) for g in (0, 1)
)

STANDARD_VARIANT = VariantSpec(0, 0, 0)


class BetaScores(NamedTuple):
    p_match_a0: float
    p_match_a1: float
    beta_score: float


@dataclass(frozen=True)
class ScoreReport:
    """All Bell-functional scores of one joint distribution."""

    p_match_a0: float
    p_match_a1: float
    beta_score: float
    ic_alpha: float
    variant_scores: Mapping[VariantSpec, float]
    violations: tuple[VariantSpec, ...]
    ic_violated: bool


@dataclass(frozen=True)
class InfoReport:
    """Mutual-information view of the resources available at Alice's site."""

    i_B: float
    i_b: float
    i_Bxorb: float
    h_B: float
    h_Bxorb: float
    delta_b: float
    delta_B: float
    j_B: float
    j_b: float


def _setting_pairs(joint: DiscreteJoint) -> Iterator[tuple[int, int]]:
    for a in (0, 1):
        for b in (0, 1):
            yield a, b


def chsh_setting_conditionals(joint: DiscreteJoint, v: VariantSpec) -> dict[tuple[int, int], float]:
    """P(A xor B == target | a, b) for each of the four setting pairs."""
    ia, ib = joint.index("a"), joint.index("b")
    iA, iB = joint.index("A"), joint.index("B")
    num: dict[tuple[int, int], float | object] = {p: 0 for p in _setting_pairs(joint)}
    den: dict[tuple[int, int], float | object] = {p: 0 for p in _setting_pairs(joint)}
    for key, p in joint.pmf.items():
        pair = (key[ia], key[ib])
        den[pair] = den[pair] + p
        target = (pair[0] & pair[1]) ^ (v.alpha & pair[0]) ^ (v.beta & pair[1]) ^ v.gamma
        if key[iA] ^ key[iB] == target:
            num[pair] = num[pair] + p
    out = {}
    for pair in _setting_pairs(joint):
        if den[pair] == 0:
            raise EvaluationError(f"setting pair (a={pair[0]}, b={pair[1]}) has no support")
        out[pair] = float(num[pair] / den[pair])
    return out


def chsh_variant_score(joint: DiscreteJoint, v: VariantSpec) -> float:
    """Average over the four setting pairs of the variant's match probability.

    fsum keeps the four-term average independent of summation order, so
    relabelling symmetries between variants hold exactly.
    """
    conds = chsh_setting_conditionals(joint, v)
    return math.fsum(conds.values()) / 4


def _conditional_event(joint: DiscreteJoint, a_value: int, match) -> float | object:
    """P(match | a = a_value); ``match`` sees (b, A, B)."""
    ia, ib = joint.index("a"), joint.index("b")
    iA, iB = joint.index("A"), joint.index("B")
    num = 0
    den = 0
    for key, p in joint.pmf.items():
        if key[ia] != a_value:
            continue
        den = den + p
        if match(key[ib], key[iA], key[iB]):
            num = num + p
    if den == 0:
        raise EvaluationError(f"setting a={a_value} has no support")
    return num / den


def beta_score(joint: DiscreteJoint) -> BetaScores:
    """P(A=B | a=0), P(A = B xor b | a=1) and their mean."""
    p0 = _conditional_event(joint, 0, lambda b, A, B: A == B)
    p1 = _conditional_event(joint, 1, lambda b, A, B: A == B ^ b)
    return BetaScores(float(p0), float(p1), float((p0 + p1) / 2))


def ic_alpha(p_match_a0: float, p_match_a1: float) -> float:
    """Information-causality functional (2*p0 - 1)^2 + (2*p1 - 1)^2, in [0, 2]."""
    for p in (p_match_a0, p_match_a1):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"match probability {p!r} outside [0, 1]")
    return (2.0 * p_match_a0 - 1.0) ** 2 + (2.0 * p_match_a1 - 1.0) ** 2


def transmitted_deltas(joint: DiscreteJoint) -> tuple[float, float]:
    """Information about (b, B) carried by the message beyond the hidden variable.

    Returns ``(delta_b, delta_B)`` where ``delta_x = I(x; lam, chi) - I(x; lam)``.
    Under measurement freedom ``I(b; lam) = 0``, so ``delta_b`` equals the
    full setting information at Alice's site.
    """
    deltas = []
    for var in ("b", "B"):
        d = mutual_information(joint, {var}, {"lam", "chi"}) - mutual_information(
            joint, {var}, {"lam"}
        )
        if d < -VIOLATION_MARGIN:
            raise InvariantBreach(f"delta({var}; chi) = {d!r} negative beyond tolerance")
        deltas.append(d if d > 0.0 else 0.0)
    return deltas[0], deltas[1]


def classify_score(score: float) -> str:
    """'violation' above 3/4 + margin, 'boundary' within the margin, else 'local'."""
    if score > 0.75 + VIOLATION_MARGIN:
        return "violation"
    if score >= 0.75 - VIOLATION_MARGIN:
        return "boundary"
    return "local"


def _require_uniform_settings(joint: DiscreteJoint) -> None:
    ia, ib = joint.index("a"), joint.index("b")
    mass: dict[tuple[int, int], float] = {p: 0.0 for p in _setting_pairs(joint)}
    for key, p in joint.float_pmf.items():
        pair = (key[ia], key[ib])
        mass[pair] += p
    for pair, m in mass.items():
        if abs(m - 0.25) > 1e-12:
            raise EvaluationError(
                f"settings not uniform and independent: P(a={pair[0]}, b={pair[1]}) = {m!r}"
            )


def full_report(joint: DiscreteJoint) -> tuple[ScoreReport, InfoReport]:
    """Every score and information quantity for a joint over (a, b, A, B, lam, chi).

    Requires uniform independent referee settings.  The CHSH score of the
    standard variant is cross-validated against the conditional-event form
    of beta; disagreement beyond 1e-12 raises InvariantBreach.
    """
    for name in ("a", "b", "A", "B", "lam", "chi"):
        joint.index(name)
    _require_uniform_settings(joint)

    frag = beta_score(joint)
    variant_scores = {v: chsh_variant_score(joint, v) for v in ALL_VARIANTS}
    if abs(variant_scores[STANDARD_VARIANT] - frag.beta_score) > 1e-12:
        raise InvariantBreach(
            "standard CHSH score disagrees with the conditional-event beta: "
            f"{variant_scores[STANDARD_VARIANT]!r} vs {frag.beta_score!r}"
        )
    alpha = ic_alpha(frag.p_match_a0, frag.p_match_a1)
    score = ScoreReport(
        p_match_a0=frag.p_match_a0,
        p_match_a1=frag.p_match_a1,
        beta_score=frag.beta_score,
        ic_alpha=alpha,
        variant_scores=variant_scores,
        violations=tuple(v for v in ALL_VARIANTS if classify_score(variant_scores[v]) == "violation"),
        ic_violated=alpha > 1.0 + VIOLATION_MARGIN,
    )

    extended = derive_xor(joint, "B", "b", XOR_NAME)
    resources = {"lam", "chi"}
    delta_b, delta_B = transmitted_deltas(joint)
    info = InfoReport(
        i_B=mutual_information(extended, {"B"}, resources),
        i_b=mutual_information(extended, {"b"}, resources),
        i_Bxorb=mutual_information(extended, {XOR_NAME}, resources),
        h_B=entropy(extended, {"B"}),
        h_Bxorb=entropy(extended, {XOR_NAME}),
        delta_b=delta_b,
        delta_B=delta_B,
        j_B=guessed_information(joint, resources, {"B"}),
        j_b=guessed_information(joint, resources, {"b"}),
    )
    return score, info
