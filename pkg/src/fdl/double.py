"""Word problem in the double ``G_s = F *_(H_s = H̄_s) F̄``.

A word is cut into maximal syllables alternating between F (letters a, b)
and F̄ (letters ā, b̄).  Any syllable lying in the edge subgroup is replaced
by its mirror image in the other factor and merged into its neighbours.
When no syllable can be pinched, the normal form theorem for amalgams says
the word is trivial exactly when nothing is left.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import NotFoundWithinBound, ValidationError
from .family import MultiplyingSequence, from_witness, hs_member
from .words import A, ABAR, B, BBAR, FREE_LETTERS, Word, involution, product, reduce, require_free

F, FBAR = "F", "Fbar"


@dataclass(frozen=True)
class Syllable:
    factor: str
    content: Word

    def to_json(self) -> dict:
        return {"factor": self.factor, "word": str(self.content)}


@dataclass(frozen=True)
class PinchStep:
    """One application of ``h_n = h̄_n`` relations to a whole syllable."""

    before: Word
    index: int  # syllable position in ``before``
    factor: str  # factor the syllable was in before the pinch
    witness: tuple
    after: Word


@dataclass(frozen=True)
class NormalFormResult:
    syllables: tuple
    trivial: bool
    log: tuple = field(default=(), compare=False)

    def to_json(self) -> dict:
        return {"trivial": self.trivial, "syllables": [s.to_json() for s in self.syllables]}

    def word(self) -> Word:
        return product(s.content for s in self.syllables)


def syllables(w: Word) -> list[Syllable]:
    out: list[Syllable] = []
    block: list = []
    current = None
    for letter, exp in w.runs:
        factor = F if letter in FREE_LETTERS else FBAR
        if factor != current and block:
            out.append(Syllable(current, Word(block)))
            block = []
        current = factor
        block.append((letter, exp))
    if block:
        out.append(Syllable(current, Word(block)))
    return out


def _edge_witness(seq: MultiplyingSequence, syl: Syllable) -> Optional[tuple]:
    content = syl.content if syl.factor == F else involution(syl.content)
    result = hs_member(seq, content)
    return result.witness if result.member else None


def pinch_reduce(seq: MultiplyingSequence, w: Word) -> NormalFormResult:
    """Reduce to amalgam normal form, pinching the leftmost pinchable syllable first."""
    current = reduce(w)
    log = []
    while True:
        syls = syllables(current)
        if len(syls) <= 1:
            break
        for i, syl in enumerate(syls):
            witness = _edge_witness(seq, syl)
            if witness is not None:
                break
        else:
            break
        mirror = from_witness(seq, witness)
        if syl.factor == F:
            mirror = involution(mirror)
        after = product([s.content for s in syls[:i]] + [mirror] + [s.content for s in syls[i + 1:]])
        log.append(PinchStep(current, i, syl.factor, witness, after))
        current = after
    syls = syllables(current)
    return NormalFormResult(tuple(syls), not syls, tuple(log))


def is_trivial(seq: MultiplyingSequence, w: Word) -> bool:
    return pinch_reduce(seq, w).trivial


def membership_via_word_problem(seq: MultiplyingSequence, w: Word) -> bool:
    """Decide ``w in H_s`` by asking whether ``w φ(w)^-1`` is trivial in G_s."""
    require_free(w)
    return is_trivial(seq, w * ~involution(w))


def cyclic_intersection_exponent(seq: MultiplyingSequence, p: int, bound: int) -> int:
    """Least j with ``b^p a^j b^-p == b̄^p ā^j b̄^-p`` in G_s."""
    if p < 0:
        raise ValidationError("p must be >= 0")
    for j in range(1, bound + 1):
        w = Word([(B, p), (A, j), (B, -p), (BBAR, p), (ABAR, -j), (BBAR, -p)])
        if is_trivial(seq, w):
            return j
    raise NotFoundWithinBound(f"no j <= {bound} identifies the two cyclic subgroups")


def power_membership(seq: MultiplyingSequence, w: Word, rmax: int) -> Optional[int]:
    """Least r in 1..rmax with ``w^r in H_s``, or None."""
    require_free(w)
    w = reduce(w)
    if not w:
        raise ValidationError("w must be a nonidentity word")
    power = Word()
    for r in range(1, rmax + 1):
        power = power * w
        if hs_member(seq, power).member:
            return r
    return None
