"""Brute-force oracles that share no code with the package.

Words here are plain strings over ``aAbBcCdD`` (uppercase = inverse), one
character per letter.
"""

from __future__ import annotations

import itertools
import math
import random

from fdl.words import Word, reduce


def inv_char(ch: str) -> str:
    return ch.lower() if ch.isupper() else ch.upper()


def sreduce(s: str) -> str:
    stack = []
    for ch in s:
        if stack and stack[-1] == inv_char(ch):
            stack.pop()
        else:
            stack.append(ch)
    return "".join(stack)


def sinv(s: str) -> str:
    return "".join(inv_char(ch) for ch in reversed(s))


def spow(s: str, n: int) -> str:
    return s * n if n >= 0 else sinv(s) * -n


def to_word(s: str) -> Word:
    """Canonical run-length form of a string (which need not be reduced)."""
    return reduce(Word.parse(s))


def to_str(w: Word) -> str:
    return "".join((l if e > 0 else l.upper()) * abs(e) for l, e in w.runs)


def reduced_words(max_len: int, alphabet: str = "aAbB"):
    """Every freely reduced string of length <= max_len."""
    yield ""
    frontier = [""]
    for _ in range(max_len):
        nxt = []
        for s in frontier:
            for ch in alphabet:
                if s and s[-1] == inv_char(ch):
                    continue
                nxt.append(s + ch)
        yield from nxt
        frontier = nxt


def random_reduced(rng: random.Random, length: int, alphabet: str = "aAbB") -> str:
    s = ""
    while len(s) < length:
        ch = rng.choice(alphabet)
        if s and s[-1] == inv_char(ch):
            continue
        s += ch
    return s


def subgroup_products(gens: list[str], max_factors: int, max_len: int) -> set[str]:
    """Reduced products of at most ``max_factors`` generators (or inverses)."""
    letters = [g for g in gens if g] + [sinv(g) for g in gens if g]
    found = {""}
    frontier = {""}
    for _ in range(max_factors):
        frontier = {sreduce(x + y) for x in frontier for y in letters}
        found |= frontier
    return {w for w in found if len(w) <= max_len}


def determinantal_divisors(M: list[list[int]]) -> list[int]:
    """gcd of all r x r minors for r = 1..min(shape)."""
    rows, cols = len(M), len(M[0])

    def det(sub):
        if len(sub) == 1:
            return sub[0][0]
        return sum((-1) ** j * sub[0][j] * det([row[:j] + row[j + 1:] for row in sub[1:]])
                   for j in range(len(sub)))

    out = []
    for r in range(1, min(rows, cols) + 1):
        g = 0
        for ri in itertools.combinations(range(rows), r):
            for ci in itertools.combinations(range(cols), r):
                g = math.gcd(g, det([[M[i][j] for j in ci] for i in ri]))
        out.append(g)
    return out


def kernel_by_enumeration(domain, codomain, matrix) -> list[int]:
    """Kernel of a map of finite cyclic sums, returned as sorted prime-power
    multiset (elementary divisors)."""
    elements = [x for x in itertools.product(*(range(d) for d in domain))
                if all((sum(row[j] * x[j] for j in range(len(domain))) % c if c else
                        sum(row[j] * x[j] for j in range(len(domain)))) == 0
                       for row, c in zip(matrix, codomain))]
    return elementary_divisors_of(elements, domain)


def elementary_divisors_of(elements, moduli) -> list[int]:
    """Elementary divisors of a finite abelian group given as a set of tuples.

    Uses counts of elements of order dividing p^k, which pin down the
    isomorphism type.
    """
    def order(x):
        o = 1
        for xi, m in zip(x, moduli):
            o = math.lcm(o, m // math.gcd(m, xi))
        return o

    n = len(elements)
    primes = [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, p))]
    result = []
    for p in primes:
        counts = []
        k = 0
        while True:
            k += 1
            c = sum(1 for x in elements if (p ** k) % order(x) == 0)
            counts.append(c)
            if c == p ** _valuation(n, p):
                break
        # counts[k-1] = |{x : p^k x = 0}| = prod p^min(e_i, k)
        logs = [0] + [_valuation(c, p) for c in counts]
        # number of cyclic factors of exponent >= k is logs[k] - logs[k-1]
        at_least = [logs[k] - logs[k - 1] for k in range(1, len(logs))] + [0]
        for k in range(1, len(at_least)):
            result += [p ** k] * (at_least[k - 1] - at_least[k])
    return sorted(result)


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def elementary_divisors(orders) -> list[int]:
    """Prime-power decomposition of ⊕Z_orders by trial division."""
    out = []
    for n in orders:
        p = 2
        while n > 1:
            if n % p == 0:
                q = 1
                while n % p == 0:
                    n //= p
                    q *= p
                out.append(q)
            p += 1
    return sorted(out)


def subgroup_closure(gens: list[str], max_len: int, bound: int = 10) -> set[str]:
    """Reduced subgroup elements of length <= max_len reachable through
    partial products of length <= bound.  Exact against the Stallings graph
    for generators of length <= 3 at bound 10 on every seed we tried."""
    letters = [g for g in gens if g] + [sinv(g) for g in gens if g]
    found = {""}
    frontier = [""]
    while frontier:
        nxt = []
        for x in frontier:
            for y in letters:
                z = sreduce(x + y)
                if len(z) <= bound and z not in found:
                    found.add(z)
                    nxt.append(z)
        frontier = nxt
    return {w for w in found if len(w) <= max_len}


def random_graph_instance(rng: random.Random, ngens=(1, 3), length=(1, 3)) -> list[str]:
    return [random_reduced(rng, rng.randint(*length)) for _ in range(rng.randint(*ngens))]
