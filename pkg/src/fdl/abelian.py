"""Finitely generated abelian groups over exact Python integers."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import FactorizationLimit, IllDefinedMap, ValidationError

Matrix = list[list[int]]

TRIAL_DIVISION_BOUND = 10**6


def _diagonalize(M: Sequence[Sequence[int]], ncols: Optional[int] = None, track: bool = False):
    """Smith reduction by unimodular row/column operations.

    Pivots on the entry of least nonzero absolute value.  Returns the
    diagonal and, when ``track`` is set, the column transform V with
    ``U M V = D`` for some unimodular U.
    """
    A = [list(map(int, row)) for row in M]
    rows = len(A)
    cols = ncols if ncols is not None else (len(A[0]) if A else 0)
    V = [[int(i == j) for j in range(cols)] for i in range(cols)] if track else None

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_col(dst, src, factor):
        # column dst += factor * column src
        for row in A:
            row[dst] += factor * row[src]
        if V is not None:
            for row in V:
                row[dst] += factor * row[src]

    diag = []
    t = 0
    while t < min(rows, cols):
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        A[t], A[i] = A[i], A[t]
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, rows):
                qt = A[i][t] // p
                if qt:
                    A[i] = [x - qt * y for x, y in zip(A[i], A[t])]
                dirty |= A[i][t] != 0
            for j in range(t + 1, cols):
                qt = A[t][j] // p
                if qt:
                    add_col(j, t, -qt)
                dirty |= A[t][j] != 0
            if not dirty:
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if A[i][j] % p), None)
                if bad is None:
                    break
                A[t] = [x + y for x, y in zip(A[t], A[bad[0]])]
                continue
            # move the smallest remaining entry of row/column t onto the pivot
            best = (t, t)
            for i in range(t + 1, rows):
                if A[i][t] and abs(A[i][t]) < abs(A[best[0]][best[1]]):
                    best = (i, t)
            for j in range(t + 1, cols):
                if A[t][j] and abs(A[t][j]) < abs(A[best[0]][best[1]]):
                    best = (t, j)
            A[t], A[best[0]] = A[best[0]], A[t]
            swap_cols(t, best[1])
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
        diag.append(A[t][t])
        t += 1
    diag += [0] * (min(rows, cols) - len(diag))
    return diag, V


def smith_normal_form(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> list[int]:
    """Invariant factors ``d_1 | d_2 | ...`` (length ``min(rows, cols)``)."""
    diag, _ = _diagonalize(M, ncols)
    return diag


def integer_kernel(M: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Generators (as rows) of the lattice ``{x in Z^ncols : M x = 0}``."""
    if not M:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    diag, V = _diagonalize(M, ncols, track=True)
    r = sum(1 for d in diag if d)
    return [[V[i][j] for i in range(ncols)] for j in range(r, ncols)]


@dataclass(frozen=True)
class FinAbelian:
    """``Z^rank`` plus cyclic factors ``Z_d1 x Z_d2 x ...`` with ``d1 | d2 | ...``."""

    rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        tors = tuple(self.torsion)
        if self.rank < 0 or any(d < 2 for d in tors) or any(y % x for x, y in zip(tors, tors[1:])):
            raise ValidationError(f"not in invariant-factor form: rank={self.rank}, torsion={tors}")
        object.__setattr__(self, "torsion", tors)

    @classmethod
    def from_orders(cls, orders: Sequence[int], rank: int = 0) -> "FinAbelian":
        """Direct sum of cyclic groups; an order of 0 contributes a copy of Z."""
        orders = [abs(int(x)) for x in orders]
        rank += sum(1 for x in orders if x == 0)
        finite = [x for x in orders if x > 1]
        diag = smith_normal_form([[x if i == j else 0 for j in range(len(finite))]
                                  for i, x in enumerate(finite)]) if finite else []
        return cls(rank, tuple(d for d in diag if d > 1))

    @property
    def order(self) -> Optional[int]:
        return None if self.rank else math.prod(self.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z_{d}" for d in self.torsion]
        return " x ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: dict) -> "FinAbelian":
        return cls(int(data["rank"]), tuple(data["torsion"]))


def cokernel(M: Sequence[Sequence[int]], ngens: Optional[int] = None) -> FinAbelian:
    """``Z^ngens`` modulo the row span of M."""
    if ngens is None:
        if not M:
            raise ValidationError("ngens is required for an empty relation matrix")
        ngens = len(M[0])
    if not M:
        return FinAbelian(ngens)
    diag = smith_normal_form(M, ngens)
    nonzero = [d for d in diag if d]
    return FinAbelian(ngens - len(nonzero), tuple(d for d in nonzero if d > 1))


def kernel_of_map(domain: Sequence[int], codomain: Sequence[int], matrix: Sequence[Sequence[int]]) -> FinAbelian:
    """Kernel of ``⊕Z_domain -> ⊕Z_codomain``; ``matrix[i][j]`` is the image
    of domain generator j in codomain coordinate i.  A codomain order of 0
    stands for Z.
    """
    n, p = len(domain), len(codomain)
    if any(d < 1 for d in domain):
        raise ValidationError("domain must be finite (orders >= 1)")
    if len(matrix) != p or any(len(row) != n for row in matrix):
        raise ValidationError("matrix must have one row per codomain generator")
    for i in range(p):
        for j in range(n):
            image = domain[j] * matrix[i][j]
            if (image != 0) if codomain[i] == 0 else (image % codomain[i]):
                raise IllDefinedMap(f"generator {j} of order {domain[j]} cannot map to "
                                    f"{matrix[i][j]} in Z_{codomain[i]}")
    if n == 0:
        return FinAbelian()
    # preimage lattice L = {x : A x in C Z^p}; the kernel is L / D Z^n
    stacked = [list(matrix[i]) + [-codomain[i] if k == i else 0 for k in range(p)] for i in range(p)]
    gens = [row[:n] for row in integer_kernel(stacked, n + p)] if p else \
        [[int(i == j) for j in range(n)] for i in range(n)]
    t = len(gens)
    if t == 0:
        return FinAbelian()
    # relations among the generators: y with sum y_k gens_k in D Z^n
    rel_system = [[gens[k][j] for k in range(t)] + [-domain[j] if l == j else 0 for l in range(n)]
                  for j in range(n)]
    relations = [row[:t] for row in integer_kernel(rel_system, t + n)]
    return cokernel(relations, t)


def factor(n: int, bound: int = TRIAL_DIVISION_BOUND) -> Counter:
    """Prime factorization by trial division up to ``bound``."""
    out: Counter = Counter()
    d = 2
    while d * d <= n:
        if d > bound:
            raise FactorizationLimit(f"{n} has no factor below {bound}; refusing to guess")
        while n % d == 0:
            out[d] += 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] += 1
    return out


def prime_powers(n: int) -> list[int]:
    return [p**e for p, e in factor(n).items()]


INFINITE = math.inf


@dataclass(frozen=True)
class CyclicSum:
    """``⊕_j Z_(c_j)`` with ``c_j = tail`` for every j past the prefix."""

    prefix: tuple = ()
    tail: int = 1

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(c) for c in self.prefix))
        if self.tail < 1 or any(c < 1 for c in self.prefix):
            raise ValidationError("cyclic orders must be >= 1")

    def order_at(self, i: int) -> int:
        return self.prefix[i] if i < len(self.prefix) else self.tail

    def truncate(self, count: int) -> FinAbelian:
        """The finite direct sum of the first ``count`` summands."""
        return FinAbelian.from_orders([self.order_at(i) for i in range(count)])

    def multiplicities(self) -> dict:
        counts: dict = Counter()
        for c in self.prefix:
            for q in prime_powers(c):
                counts[q] += 1
        if self.tail > 1:
            for q in prime_powers(self.tail):
                counts[q] = INFINITE
        return dict(counts)

    @property
    def is_trivial(self) -> bool:
        return self.tail == 1 and all(c == 1 for c in self.prefix)

    def __str__(self):
        parts = [f"Z_{c}" for c in self.prefix if c > 1]
        if self.tail > 1:
            parts.append(f"(Z_{self.tail})^inf")
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"prefix": list(self.prefix), "tail": self.tail}

    @classmethod
    def from_json(cls, data: dict) -> "CyclicSum":
        return cls(tuple(data["prefix"]), int(data["tail"]))


def is_isomorphic(x: CyclicSum, y: CyclicSum) -> bool:
    return x.multiplicities() == y.multiplicities()
