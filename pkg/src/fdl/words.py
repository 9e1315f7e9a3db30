"""Run-length encoded words over ``a, b, ā, b̄``.

Letters are stored as the single characters ``a``, ``b``, ``c``, ``d`` where
``c`` is ā and ``d`` is b̄.  Signs live in the run exponents, never in the
letter.  A word in canonical form has nonzero exponents and no two adjacent
runs on the same letter; canonical words are exactly the freely reduced ones.

Text syntax (used by the CLI and the JSON payloads)::

    a^5 B c^-3      # a^5 b^-1 ā^-3
    baaaaB          # b a^4 b^-1

Uppercase means inverse, so ``B^2`` and ``b^-2`` are the same run.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator

from .errors import NonFreeFactorWord, WordSyntaxError

A, B, ABAR, BBAR = "a", "b", "c", "d"
LETTERS = (A, B, ABAR, BBAR)
FREE_LETTERS = frozenset((A, B))
BAR_LETTERS = frozenset((ABAR, BBAR))
_SWAP = {A: ABAR, B: BBAR, ABAR: A, BBAR: B}

_TOKEN = re.compile(r"\s*([abcdABCD])(?:\^([+-]?\d+))?")
_SEPARATORS = re.compile(r"[\s*.]+")

Run = tuple[str, int]


class Word:
    """Immutable word stored as a tuple of ``(letter, exponent)`` runs.

    ``Word(runs)`` keeps the runs exactly as given (minus zero exponents), so
    it can hold unreduced input.  Every arithmetic operation returns the
    canonical reduced form.
    """

    __slots__ = ("runs",)

    def __init__(self, runs: Iterable[Run] = ()):
        cleaned = []
        for letter, exp in runs:
            if letter not in _SWAP:
                raise WordSyntaxError(f"unknown letter {letter!r}")
            exp = int(exp)
            if exp:
                cleaned.append((letter, exp))
        object.__setattr__(self, "runs", tuple(cleaned))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse the text syntax; the result is *not* reduced."""
        text = text.strip()
        if text in ("", "1", "e"):
            return cls()
        runs = []
        pos = 0
        compact = _SEPARATORS.sub(" ", text)
        while pos < len(compact):
            if compact[pos] == " ":
                pos += 1
                continue
            match = _TOKEN.match(compact, pos)
            if match is None:
                raise WordSyntaxError(f"cannot parse word {text!r} at offset {pos}")
            char, exp = match.groups()
            exp = int(exp) if exp is not None else 1
            if char.isupper():
                exp = -exp
            runs.append((char.lower(), exp))
            pos = match.end()
        return cls(runs)

    @classmethod
    def letter(cls, letter: str, exp: int = 1) -> "Word":
        return cls([(letter, exp)])

    def __repr__(self):
        return f"Word({str(self)!r})"

    def __str__(self):
        parts = []
        for letter, exp in self.runs:
            char = letter if exp > 0 else letter.upper()
            parts.append(char if abs(exp) == 1 else f"{char}^{abs(exp)}")
        return " ".join(parts)

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return self.runs == other.runs

    def __hash__(self):
        return hash(self.runs)

    def __len__(self):
        return sum(abs(exp) for _, exp in self.runs)

    def __bool__(self):
        return bool(self.runs)

    @property
    def is_reduced(self) -> bool:
        return all(x[0] != y[0] for x, y in zip(self.runs, self.runs[1:]))

    @property
    def letters(self) -> frozenset:
        return frozenset(letter for letter, _ in self.runs)

    @property
    def is_free(self) -> bool:
        """True when the word lies in the unbarred factor F = <a, b>."""
        return self.letters <= FREE_LETTERS

    def expand(self) -> Iterator[Run]:
        """Yield ``(letter, ±1)`` one letter at a time."""
        for letter, exp in self.runs:
            step = 1 if exp > 0 else -1
            for _ in range(abs(exp)):
                yield letter, step

    def __mul__(self, other: "Word") -> "Word":
        return _reduce_runs(self.runs + other.runs)

    def __invert__(self) -> "Word":
        return Word((letter, -exp) for letter, exp in reversed(self.runs))

    inverse = __invert__

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return (~self) ** -n
        result = Word()
        base = reduce(self)
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result


def _reduce_runs(runs: Iterable[Run]) -> Word:
    stack: list[list] = []
    for letter, exp in runs:
        if stack and stack[-1][0] == letter:
            stack[-1][1] += exp
            if stack[-1][1] == 0:
                stack.pop()
        elif exp:
            stack.append([letter, exp])
    return Word(map(tuple, stack))


def reduce(w: Word) -> Word:
    """Freely reduce ``w`` to canonical run-length form."""
    return _reduce_runs(w.runs)


def concat(*words: Word) -> Word:
    """Raw concatenation with no reduction."""
    return Word(run for w in words for run in w.runs)


def product(words: Iterable[Word]) -> Word:
    return _reduce_runs(run for w in words for run in w.runs)


def involution(w: Word) -> Word:
    """Swap a with ā and b with b̄ in every run."""
    return Word((_SWAP[letter], exp) for letter, exp in w.runs)


def erase_bars(w: Word) -> Word:
    """The retraction onto F: ā -> a, b̄ -> b (result reduced)."""
    return _reduce_runs((letter if letter in FREE_LETTERS else _SWAP[letter], exp)
                        for letter, exp in w.runs)


def require_free(w: Word) -> None:
    if not w.is_free:
        raise NonFreeFactorWord(f"word {str(w)!r} uses barred letters")


def b_exponent_sum(w: Word) -> int:
    require_free(w)
    return sum(exp for letter, exp in w.runs if letter == B)


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Return ``(core, conjugator)`` with ``w == conjugator * core * ~conjugator``.

    ``w`` must already be reduced.  The core's first and last letters are not
    mutually inverse.
    """
    runs = list(w.runs)
    peeled: list[Run] = []
    while len(runs) >= 2:
        (first, e0), (last, e1) = runs[0], runs[-1]
        if first != last or (e0 > 0) == (e1 > 0):
            break
        t = min(abs(e0), abs(e1))
        sign = 1 if e0 > 0 else -1
        peeled.append((first, sign * t))
        e0 -= sign * t
        e1 += sign * t
        runs = ([(first, e0)] if e0 else []) + runs[1:-1] + ([(last, e1)] if e1 else [])
    return Word(runs), _reduce_runs(peeled)


def free_reduce_letters(letters: Iterable[Run]) -> Word:
    """Letter-at-a-time stack reduction.

    Kept deliberately separate from the run-merging path so tests can use
    it as an independent oracle.
    """
    stack: list[Run] = []
    for letter, sign in letters:
        if stack and stack[-1][0] == letter and stack[-1][1] == -sign:
            stack.pop()
        else:
            stack.append((letter, sign))
    out: list[list] = []
    for letter, sign in stack:
        if out and out[-1][0] == letter:
            out[-1][1] += sign
        else:
            out.append([letter, sign])
    return Word(map(tuple, out))


def parse(text: str) -> Word:
    return Word.parse(text)
