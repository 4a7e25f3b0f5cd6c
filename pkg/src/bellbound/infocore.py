"""Exact discrete probability and information-theory kernel.

Everything here operates on :class:`DiscreteJoint`, an exact joint
probability mass function over named finite-valued variables.  Atom
probabilities may be floats or :class:`fractions.Fraction`; rational
values survive marginalisation, conditioning and relabelling unchanged,
which is what lets equality-style checks elsewhere in the package
(non-signaling, relabelling identities) hold bit for bit.  Entropies and
mutual informations are always evaluated in float, base 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

Assignment = tuple[int, ...]

#: tolerance for "probabilities sum to one" at construction time
NORMALIZATION_ATOL = 1e-12

#: mutual informations in (-MI_CLAMP, 0) are floating-point dust and clamp to 0
MI_CLAMP = 1e-12


class DomainError(ValueError):
    """A scalar argument lies outside its mathematical domain."""


class InvariantBreach(RuntimeError):
    """An internal mathematical invariant failed; indicates a bug, not bad data."""


def binary_entropy(p: float) -> float:
    """Binary entropy h(p) = -p*log2(p) - (1-p)*log2(1-p), with 0*log(0) = 0.

    The argument is snapped onto the complement lattice, ``p -> 1-(1-p)``,
    before evaluation.  The snap moves ``p`` by at most 2**-54 (absolute
    effect on the result below 3e-16) and leaves every value at or above
    1/2 untouched; in exchange ``binary_entropy(p) == binary_entropy(1-p)``
    holds bitwise for every representable ``p``.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"binary_entropy: p={p!r} outside [0, 1]")
    q = 1.0 - p
    p = 1.0 - q
    if p == 0.0 or q == 0.0:
        return 0.0
    return -(p * math.log2(p)) - (q * math.log2(q))


def inv_binary_entropy_upper(h: float) -> float:
    """Unique p in [1/2, 1] with binary_entropy(p) = h.

    Bisection on the monotone-decreasing branch, absolute tolerance 1e-12,
    at most 200 iterations.
    """
    if not 0.0 <= h <= 1.0:
        raise DomainError(f"inv_binary_entropy_upper: h={h!r} outside [0, 1]")
    # Endpoints resolve exactly: the computed entropy is flat to machine
    # precision around p = 1/2, so bisection against h = 1 would stall a
    # few 1e-9 off centre.  Everywhere else the root is well conditioned.
    if h == 1.0:
        return 0.5
    if h == 0.0:
        return 1.0
    lo, hi = 0.5, 1.0
    for _ in range(200):
        if hi - lo <= 1e-12:
            break
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) >= h:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def fano_max_success(h_cond: float) -> float:
    """Largest success probability consistent with Fano's inequality for a bit.

    For a binary target with conditional entropy ``h_cond`` given the
    guesser's knowledge, the entropy of the error probability must be at
    least ``h_cond``; the best achievable success probability is therefore
    the upper-branch inverse of the binary entropy.
    """
    if not 0.0 <= h_cond <= 1.0:
        raise DomainError(f"fano_max_success: h_cond={h_cond!r} outside [0, 1]")
    return inv_binary_entropy_upper(h_cond)


def fano_check_general(p_e: float, alphabet_size: int, h_cond: float) -> bool:
    """Check Fano's inequality h(Pe) + Pe*log2(M-1) >= H(X|Y) with slack 1e-12."""
    if alphabet_size < 2:
        raise DomainError(f"fano_check_general: alphabet_size={alphabet_size} < 2")
    if not 0.0 <= p_e <= 1.0:
        raise DomainError(f"fano_check_general: p_e={p_e!r} outside [0, 1]")
    lhs = binary_entropy(p_e) + p_e * math.log2(alphabet_size - 1)
    return lhs >= h_cond - 1e-12


@dataclass(frozen=True)
class DiscreteJoint:
    """Exact joint pmf over an ordered list of named finite variables.

    ``variables`` pairs each name with its cardinality; ``pmf`` maps full
    assignment tuples (one coordinate per variable, ``0 <= coord < card``)
    to probabilities.  Only atoms with nonzero probability are stored,
    atoms are kept in sorted order, and the total mass must be 1 within
    1e-12.  Instances are immutable and safe to share between threads.
    """

    variables: tuple[tuple[str, int], ...]
    pmf: Mapping[Assignment, float | Fraction]

    def __post_init__(self) -> None:
        variables = tuple((str(n), int(c)) for n, c in self.variables)
        if not variables:
            raise ValueError("DiscreteJoint needs at least one variable")
        names = [n for n, _ in variables]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        if any(c < 1 for _, c in variables):
            raise ValueError("variable cardinalities must be positive")

        arity = len(variables)
        cleaned: dict[Assignment, float | Fraction] = {}
        for key in sorted(self.pmf):
            if len(key) != arity:
                raise ValueError(f"atom {key} has arity {len(key)}, expected {arity}")
            for coord, (name, card) in zip(key, variables):
                if not 0 <= coord < card:
                    raise ValueError(f"atom {key}: {name}={coord} outside range({card})")
            p = self.pmf[key]
            if not 0 <= p <= 1:
                raise ValueError(f"atom {key} has probability {p!r} outside [0, 1]")
            if p != 0:
                cleaned[key] = p
        total = _mass(cleaned.values())
        if abs(total - 1) > NORMALIZATION_ATOL:
            raise ValueError(f"probabilities sum to {float(total)!r}, not 1")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "pmf", cleaned)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.variables)

    def index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.variables):
            if n == name:
                return i
        raise KeyError(f"unknown variable {name!r}; have {self.names}")

    def cardinality(self, name: str) -> int:
        return self.variables[self.index(name)][1]

    @cached_property
    def float_pmf(self) -> dict[Assignment, float]:
        """Atom probabilities converted to float (cached)."""
        return {k: float(p) for k, p in self.pmf.items()}


def _mass(values: Iterable) -> float | Fraction:
    values = list(values)
    if all(isinstance(v, float) for v in values):
        return math.fsum(values)
    return sum(values, Fraction(0))


def _resolve(joint: DiscreteJoint, names: Iterable[str]) -> tuple[int, ...]:
    """Variable names -> coordinate indices, preserving the joint's order."""
    wanted = set(names)
    if not wanted:
        raise ValueError("empty variable set")
    for n in wanted:
        joint.index(n)
    return tuple(i for i, (n, _) in enumerate(joint.variables) if n in wanted)


def _check_disjoint(x: Iterable[str], y: Iterable[str]) -> None:
    overlap = set(x) & set(y)
    if overlap:
        raise ValueError(f"variable sets overlap on {sorted(overlap)}")


def _project_floats(joint: DiscreteJoint, idx: tuple[int, ...]) -> dict[Assignment, float]:
    out: dict[Assignment, float] = {}
    for key, p in joint.float_pmf.items():
        sub = tuple(key[i] for i in idx)
        out[sub] = out.get(sub, 0.0) + p
    return out


def marginalize(joint: DiscreteJoint, keep: Iterable[str]) -> DiscreteJoint:
    """Sum out every variable not in ``keep``; total mass is preserved.

    Rational atom probabilities stay rational, so marginals of exactly
    constructed joints compare exactly.
    """
    idx = _resolve(joint, keep)
    acc: dict[Assignment, float | Fraction] = {}
    for key, p in joint.pmf.items():
        sub = tuple(key[i] for i in idx)
        if sub in acc:
            acc[sub] = acc[sub] + p
        else:
            acc[sub] = p
    variables = tuple(joint.variables[i] for i in idx)
    return DiscreteJoint(variables, acc)


def condition(joint: DiscreteJoint, given: Mapping[str, int]) -> DiscreteJoint:
    """Joint over the remaining variables, conditioned on ``given``.

    Raises DomainError when the conditioning event has zero probability.
    """
    if not given:
        raise ValueError("empty conditioning assignment")
    fixed = {joint.index(n): v for n, v in given.items()}
    keep = [i for i in range(len(joint.variables)) if i not in fixed]
    if not keep:
        raise ValueError("conditioning on every variable leaves nothing")
    atoms = {
        tuple(key[i] for i in keep): p
        for key, p in joint.pmf.items()
        if all(key[i] == v for i, v in fixed.items())
    }
    mass = _mass(atoms.values())
    if mass == 0:
        raise DomainError(f"conditioning event {dict(given)} has zero probability")
    variables = tuple(joint.variables[i] for i in keep)
    return DiscreteJoint(variables, {k: p / mass for k, p in atoms.items()})


def derive_xor(joint: DiscreteJoint, u: str, v: str, new_name: str) -> DiscreteJoint:
    """Append the variable ``new_name = u XOR v``; original marginals unchanged."""
    iu, iv = joint.index(u), joint.index(v)
    if joint.variables[iu][1] != 2 or joint.variables[iv][1] != 2:
        raise ValueError(f"derive_xor needs binary variables, got {u!r}, {v!r}")
    if new_name in joint.names:
        raise ValueError(f"variable {new_name!r} already present")
    pmf = {key + (key[iu] ^ key[iv],): p for key, p in joint.pmf.items()}
    return DiscreteJoint(joint.variables + ((new_name, 2),), pmf)


def relabel(joint: DiscreteJoint, mapping: Mapping[str, Mapping[int, int]]) -> DiscreteJoint:
    """Permute the values of selected variables (e.g. flip a bit).

    Each per-variable map must be a bijection on ``range(cardinality)``;
    unlisted variables are left alone.
    """
    perms: dict[int, Mapping[int, int]] = {}
    for name, perm in mapping.items():
        i = joint.index(name)
        card = joint.variables[i][1]
        if sorted(perm) != list(range(card)) or sorted(perm.values()) != list(range(card)):
            raise ValueError(f"relabel map for {name!r} is not a bijection on range({card})")
        perms[i] = perm
    pmf = {
        tuple(perms[i][c] if i in perms else c for i, c in enumerate(key)): p
        for key, p in joint.pmf.items()
    }
    return DiscreteJoint(joint.variables, pmf)


def entropy(joint: DiscreteJoint, variables: Iterable[str]) -> float:
    """Shannon entropy (bits) of the marginal on ``variables``."""
    idx = _resolve(joint, variables)
    marginal = _project_floats(joint, idx)
    return _plogp_sum(marginal.values())


def _plogp_sum(probs: Iterable[float]) -> float:
    return -math.fsum(p * math.log2(p) for p in probs if p > 0.0) + 0.0


def conditional_entropy(joint: DiscreteJoint, target: Iterable[str], given: Iterable[str]) -> float:
    """H(target | given) in bits, as the average of per-condition entropies."""
    _check_disjoint(target, given)
    it = _resolve(joint, target)
    ig = _resolve(joint, given)
    pairs = _project_floats(joint, it + ig)
    nt = len(it)
    giv: dict[Assignment, float] = {}
    for key, p in pairs.items():
        y = key[nt:]
        giv[y] = giv.get(y, 0.0) + p
    total = -math.fsum(
        p * math.log2(p / giv[key[nt:]]) for key, p in pairs.items() if p > 0.0
    )
    return total + 0.0


def mutual_information(joint: DiscreteJoint, x: Iterable[str], y: Iterable[str]) -> float:
    """I(x; y) = H(x) - H(x|y) in bits; tiny negative dust clamps to zero."""
    _check_disjoint(x, y)
    mi = entropy(joint, x) - conditional_entropy(joint, x, y)
    if mi < -MI_CLAMP:
        raise InvariantBreach(f"mutual information {mi!r} below -{MI_CLAMP}")
    return mi if mi > 0.0 else 0.0


def guessed_information(joint: DiscreteJoint, known: Iterable[str], target: Iterable[str]) -> float:
    """Best-guess success probability for ``target`` given ``known``.

    Maximum-a-posteriori rule: sum over values of ``known`` of the largest
    joint atom, i.e. sum_x max_y P(x, y).
    """
    _check_disjoint(known, target)
    ik = _resolve(joint, known)
    it = _resolve(joint, target)
    pairs = _project_floats(joint, ik + it)
    nk = len(ik)
    best: dict[Assignment, float] = {}
    for key, p in pairs.items():
        x = key[:nk]
        if p > best.get(x, 0.0):
            best[x] = p
    return math.fsum(best.values())
