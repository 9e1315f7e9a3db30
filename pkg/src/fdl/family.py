"""Multiplying sequences and the subgroups H_s and S_k of F = <a, b>.

H_s is generated by ``h_n = b^n a^(s_n) b^-n`` for all n >= 0.  Its core is a
b-ray with an a-cycle of length ``s_n`` hanging at depth n; S_k replaces the
ray by a b-cycle of length k.  Both cores are traversed symbolically, with a
state ``(depth, offset)``, so nothing proportional to ``s_n`` is ever built.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

from .errors import (
    BoundedSequence,
    InvalidSequence,
    NonIntegralRatio,
    NotFoundWithinBound,
    NotPrime,
    ValidationError,
)
from .stallings import Crossing, LabeledGraph, _check_cap, _renumber
from .words import A, B, Word, product, reduce, require_free


def _positive_int(value, what: str, exc) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        else:
            raise exc(f"{what} must be a positive integer, got {value!r}")
    if value < 1:
        raise exc(f"{what} must be a positive integer, got {value!r}")
    return value


@dataclass(frozen=True)
class MultiplyingSequence:
    """``s_0`` plus an eventually periodic list of ratios ``s_(n+1) / s_n``."""

    s0: int
    prefix: tuple = ()
    period: tuple = (2,)

    def __post_init__(self):
        object.__setattr__(self, "s0", _positive_int(self.s0, "s0", InvalidSequence))
        prefix = tuple(_positive_int(r, "ratio", NonIntegralRatio) for r in self.prefix)
        period = tuple(_positive_int(r, "ratio", NonIntegralRatio) for r in self.period)
        if not period:
            raise InvalidSequence("period must be nonempty")
        if all(r == 1 for r in period):
            raise BoundedSequence("every ratio in the period is 1, so s_n is bounded")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    def ratio(self, n: int) -> int:
        if n < len(self.prefix):
            return self.prefix[n]
        return self.period[(n - len(self.prefix)) % len(self.period)]

    def value(self, n: int) -> int:
        if n < 0:
            raise ValidationError("index must be nonnegative")
        head = self.prefix[:n]
        rest = n - len(head)
        q, r = divmod(rest, len(self.period))
        return (self.s0 * math.prod(head) * math.prod(self.period) ** q
                * math.prod(self.period[:r]))

    __getitem__ = value

    def values(self, count: int) -> list[int]:
        out = [self.s0]
        for n in range(count - 1):
            out.append(out[-1] * self.ratio(n))
        return out

    def to_json(self) -> dict:
        return {"s0": self.s0, "prefix": list(self.prefix), "period": list(self.period)}

    def __str__(self):
        head = ", ".join(str(v) for v in self.values(5))
        return f"({head}, ...)"


SequenceLike = Union[MultiplyingSequence, dict, str]


def validate(spec: SequenceLike) -> MultiplyingSequence:
    """Build a sequence from a JSON object/string, raising on invalid input."""
    if isinstance(spec, MultiplyingSequence):
        return spec
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise InvalidSequence(f"not valid JSON: {exc}") from None
    if not isinstance(spec, dict) or "s0" not in spec:
        raise InvalidSequence('expected {"s0": int, "prefix": [...], "period": [...]}')
    try:
        prefix = tuple(spec.get("prefix", ()))
        period = tuple(spec.get("period", ()))
    except TypeError:
        raise InvalidSequence("prefix and period must be lists") from None
    return MultiplyingSequence(spec["s0"], prefix, period)


def first_difference(s: MultiplyingSequence, t: MultiplyingSequence) -> Optional[int]:
    """Least k with ``s_k != t_k``, or None if the sequences agree everywhere."""
    if s.s0 != t.s0:
        return 0
    horizon = max(len(s.prefix), len(t.prefix)) + math.lcm(len(s.period), len(t.period))
    for n in range(horizon):
        if s.ratio(n) != t.ratio(n):
            return n + 1
    return None


def h(seq: MultiplyingSequence, n: int) -> Word:
    """The generator ``b^n a^(s_n) b^-n`` of H_s."""
    return Word([(B, n), (A, seq.value(n)), (B, -n)])


def from_witness(seq: MultiplyingSequence, witness: Sequence[Crossing]) -> Word:
    return product(h(seq, n) if sign > 0 else ~h(seq, n) for n, sign in witness)


@dataclass(frozen=True)
class ImplicitCore:
    kind: str  # "Hs" or "Sk"
    seq: MultiplyingSequence
    k: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("Hs", "Sk"):
            raise ValidationError("kind must be 'Hs' or 'Sk'")
        if self.kind == "Sk" and (self.k is None or self.k < 1):
            raise ValidationError("S_k needs k >= 1")


@dataclass(frozen=True)
class RewriteTriple:
    k: int
    m: int
    q: int
    r: int
    f: int


PowerProduct = list[tuple[Word, int]]


def sk_rewrite(seq: MultiplyingSequence, k: int, m: int) -> tuple[RewriteTriple, PowerProduct]:
    """Exhibit ``h_m`` as ``(b^k)^q (h_r)^f (b^-k)^q`` inside S_k.

    The product is returned unevaluated as ``[(factor, exponent), ...]``
    because f can be astronomically large; see :func:`evaluate`.
    """
    if k < 1 or m < k:
        raise ValidationError("sk_rewrite needs k >= 1 and m >= k")
    q, r = divmod(m, k)
    f, rem = divmod(seq.value(m), seq.value(r))
    assert rem == 0
    bk = Word([(B, k)])
    factors = [(bk, q), (h(seq, r), f), (~bk, q)]
    return RewriteTriple(k, m, q, r, f), factors


def evaluate(factors: PowerProduct) -> Word:
    return product(w ** e for w, e in factors)


def expand(factors: PowerProduct) -> Word:
    """Raw concatenation of every factor copy, without any reduction."""
    return Word(run for w, e in factors for _ in range(e) for run in w.runs)


@dataclass(frozen=True)
class Membership:
    member: bool
    witness: tuple = ()
    depth: int = 0
    offset: int = 0
    blocked_at: Optional[int] = None

    def __iter__(self):
        return iter((self.member, list(self.witness)))


def hs_member(seq: MultiplyingSequence, w: Word) -> Membership:
    """Decide ``w in H_s`` by tracing the implicit core.

    The witness lists ``(n, ±1)`` each time the path crosses the a-edge from
    offset ``s_n - 1`` to offset 0 of the depth-n cycle, so multiplying the
    corresponding ``h_n^(±1)`` reproduces ``w``.
    """
    require_free(w)
    w = reduce(w)
    depth = offset = 0
    witness: list[Crossing] = []
    pos = 0
    for letter, exp in w.runs:
        if letter == A:
            size = seq.value(depth)
            turns, offset = divmod(offset + exp, size)
            if turns:
                sign = 1 if turns > 0 else -1
                witness.extend([(depth, sign)] * abs(turns))
        else:
            if offset != 0 or depth + exp < 0:
                # blocked: off the ray, or below the base of the ray
                at = pos if offset != 0 else pos + depth
                return Membership(False, (), depth, offset, at)
            depth += exp
        pos += abs(exp)
    closed = depth == 0 and offset == 0
    return Membership(closed, tuple(witness) if closed else (), depth, offset)


def sk_member(seq: MultiplyingSequence, k: int, w: Word) -> bool:
    """Decide ``w in S_k`` on the implicit core (b-cycle of length k)."""
    if k < 1:
        raise ValidationError("k must be >= 1")
    require_free(w)
    w = reduce(w)
    depth = offset = 0
    for letter, exp in w.runs:
        if letter == A:
            offset = (offset + exp) % seq.value(depth)
        elif offset == 0:
            depth = (depth + exp) % k
        else:
            return False
    return depth == 0 and offset == 0


def materialize(core: ImplicitCore, depth_cap: int = 0, size_cap: Optional[int] = None) -> LabeledGraph:
    """Explicit graph for an implicit core (H_s truncated at ``depth_cap``)."""
    seq = core.seq
    if core.kind == "Hs":
        depths = range(depth_cap + 1)
        total = sum(seq.value(n) for n in depths)
    else:
        depths = range(core.k)
        total = core.k + sum(seq.value(j) - 1 for j in depths)
    _check_cap(total, size_cap)

    adjacency: dict = {}

    def link(u, v, label):
        adjacency.setdefault(u, {})[(label, 1)] = v
        adjacency.setdefault(v, {})[(label, -1)] = u

    ray = list(range(len(depths)))
    nxt = len(ray)
    for n in depths:
        size = seq.value(n)
        cycle = [ray[n]] + list(range(nxt, nxt + size - 1))
        nxt += size - 1
        for i in range(size):
            link(cycle[i], cycle[(i + 1) % size], A)
    for n in depths[:-1]:
        link(ray[n], ray[n + 1], B)
    if core.kind == "Sk":
        link(ray[-1], ray[0], B)
    return _renumber(0, adjacency)


def recover_sequence(member_oracle: Callable[[Word], bool], n: int, limit: Optional[int] = None) -> int:
    """Smallest p > 0 with ``b^n a^p b^-n`` accepted by the oracle; this is s_n."""
    p = 1
    while True:
        if member_oracle(Word([(B, n), (A, p), (B, -n)])):
            return p
        if limit is not None and p >= limit:
            raise NotFoundWithinBound(f"no closing power of a at depth {n} up to {limit}")
        p += 1


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def _is_power_of(x: int, p: int) -> bool:
    while x % p == 0:
        x //= p
    return x == 1


def is_residually_p(seq: MultiplyingSequence, p: int) -> bool:
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return all(_is_power_of(x, p) for x in (seq.s0, *seq.prefix, *seq.period))
