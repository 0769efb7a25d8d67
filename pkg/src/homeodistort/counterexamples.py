"""Non-generation certificates in finite powers ``G^m`` of a finite group.

Every word in a set ``S`` of elements of ``G^m`` is constant on each class of
coordinates where all the generators agree.  A target that differs on two
coordinates of one class is therefore not a word in ``S`` of any length.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

__all__ = [
    "GroupTableError",
    "BudgetExceeded",
    "FiniteGroupTable",
    "AgreementCertificate",
    "NotFound",
    "cyclic_group",
    "symmetric_group_3",
    "alternating_group_4",
    "builtin_group",
    "BUILTIN_GROUPS",
    "agreement_partition",
    "nongeneration_certificate",
    "brute_force_generated",
    "evaluate_product_word",
]


class GroupTableError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class FiniteGroupTable:
    """Group on ``0..order-1`` given by its multiplication table.

    ``table[i][j]`` is the index of ``g_i g_j``.  The group axioms are checked
    when the table is built.
    """

    def __init__(self, table: Sequence[Sequence[int]], name: str = "G"):
        self.name = name
        self.table = [list(row) for row in table]
        self.order = len(self.table)
        n = self.order
        if n == 0:
            raise GroupTableError("empty table")
        for i, row in enumerate(self.table):
            if len(row) != n:
                raise GroupTableError(f"row {i} has {len(row)} entries, expected {n}")
            for v in row:
                if type(v) is not int or not 0 <= v < n:
                    raise GroupTableError(f"row {i} has an entry {v!r} outside 0..{n - 1}")
        ids = [e for e in range(n) if all(self.table[e][j] == j and self.table[j][e] == j for j in range(n))]
        if not ids:
            raise GroupTableError("no identity element")
        self.identity = ids[0]
        t = self.table
        for a, b, c in itertools.product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise GroupTableError(f"not associative at ({a}, {b}, {c})")
        self.inverse = []
        for a in range(n):
            inv = [b for b in range(n) if t[a][b] == self.identity]
            if len(inv) != 1 or t[inv[0]][a] != self.identity:
                raise GroupTableError(f"element {a} has no two-sided inverse")
            self.inverse.append(inv[0])

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def __repr__(self):
        return f"FiniteGroupTable({self.name}, order={self.order})"

    def to_text(self) -> str:
        return "\n".join(" ".join(str(v) for v in row) for row in self.table) + "\n"

    @classmethod
    def from_text(cls, text: str, name: str = "G") -> "FiniteGroupTable":
        """Whitespace separated rows; blank lines and ``#`` comments are ignored."""
        rows = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                rows.append([int(tok) for tok in line.split()])
            except ValueError:
                raise GroupTableError(f"line {lineno}: non-integer entry") from None
        return cls(rows, name)


def _perm_group(perms: list, name: str) -> FiniteGroupTable:
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[x]] for x in range(len(q)))] for q in perms] for p in perms]
    return FiniteGroupTable(table, name)


def cyclic_group(n: int) -> FiniteGroupTable:
    return FiniteGroupTable([[(i + j) % n for j in range(n)] for i in range(n)], f"Z/{n}")


def symmetric_group_3() -> FiniteGroupTable:
    return _perm_group(list(itertools.permutations(range(3))), "S3")


def _is_even(p) -> bool:
    inversions = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return inversions % 2 == 0


def alternating_group_4() -> FiniteGroupTable:
    return _perm_group([p for p in itertools.permutations(range(4)) if _is_even(p)], "A4")


BUILTIN_GROUPS = {
    "Z2": lambda: cyclic_group(2),
    "Z3": lambda: cyclic_group(3),
    "S3": symmetric_group_3,
    "A4": alternating_group_4,
}


def builtin_group(name: str) -> FiniteGroupTable:
    try:
        return BUILTIN_GROUPS[name]()
    except KeyError:
        raise GroupTableError(f"unknown group {name!r}; choose from {sorted(BUILTIN_GROUPS)}") from None


# ---------------------------------------------------------------------------


def _check_elements(G: FiniteGroupTable, elems, m: Optional[int] = None) -> int:
    for s in elems:
        if m is None:
            m = len(s)
        if len(s) != m:
            raise ValueError(f"element of length {len(s)} in a product of {m} copies")
        for v in s:
            if type(v) is not int or not 0 <= v < G.order:
                raise ValueError(f"coordinate {v!r} is not an element of {G.name}")
    return m if m is not None else 0


def agreement_partition(S: Sequence[Sequence[int]], m: Optional[int] = None) -> list:
    """Coordinates grouped by their generator column ``(s_1(i), ..., s_k(i))``.

    Classes are lists of 0-based coordinate indices, ordered by first member.
    """
    if m is None:
        if not S:
            raise ValueError("m is needed when S is empty")
        m = len(S[0])
    if any(len(s) != m for s in S):
        raise ValueError("all generators must have the same length")
    classes: dict = {}
    for i in range(m):
        classes.setdefault(tuple(s[i] for s in S), []).append(i)
    return sorted(classes.values(), key=lambda c: c[0])


@dataclass
class AgreementCertificate:
    partition: list
    witness_class: list
    target: tuple
    pair: tuple

    def check(self, S, G: Optional[FiniteGroupTable] = None) -> bool:
        """Recheck the certificate from scratch against ``S``."""
        m = len(self.target)
        if agreement_partition(S, m) != self.partition:
            return False
        j1, j2 = self.pair
        return (
            self.witness_class in self.partition
            and j1 in self.witness_class
            and j2 in self.witness_class
            and self.target[j1] != self.target[j2]
        )

    def to_dict(self) -> dict:
        return {
            "partition": self.partition,
            "witness_class": self.witness_class,
            "target": list(self.target),
            "pair": list(self.pair),
        }


class NotFound:
    """No agreement class separates the target; this proves nothing either way."""

    def __repr__(self):
        return "NotFound"

    def __bool__(self):
        return False

    def to_dict(self) -> dict:
        return {"found": False}


def nongeneration_certificate(S, target) -> "AgreementCertificate | NotFound":
    target = tuple(target)
    if any(len(s) != len(target) for s in S):
        raise ValueError("generators and target must have the same length")
    parts = agreement_partition(S, len(target))
    for cls in parts:
        first = cls[0]
        for j in cls[1:]:
            if target[j] != target[first]:
                return AgreementCertificate(parts, cls, target, (first, j))
    return NotFound()


def evaluate_product_word(G: FiniteGroupTable, S, word, m: int) -> tuple:
    """Coordinatewise product; ``word`` is a list of ``(generator index, +-1)``."""
    out = [G.identity] * m
    for idx, e in word:
        s = S[idx]
        for c in range(m):
            g = s[c] if e > 0 else G.inv(s[c])
            out[c] = G.mul(out[c], g)
    return tuple(out)


def brute_force_generated(G: FiniteGroupTable, S, target, max_len: int, budget: int = 200_000) -> bool:
    """Whether ``target`` is a word of length at most ``max_len`` in ``S``.

    Breadth-first search over ``G^m``; raises :class:`BudgetExceeded` once more
    than ``budget`` distinct elements have been visited.
    """
    target = tuple(target)
    m = len(target)
    _check_elements(G, list(S) + [target], m)
    letters = [tuple(s) for s in S] + [tuple(G.inv(v) for v in s) for s in S]
    start = tuple([G.identity] * m)
    if target == start:
        return True
    seen = {start}
    frontier = [start]
    for _ in range(max_len):
        nxt = []
        for x in frontier:
            for s in letters:
                y = tuple(G.mul(a, b) for a, b in zip(x, s))
                if y in seen:
                    continue
                if y == target:
                    return True
                seen.add(y)
                nxt.append(y)
                if len(seen) > budget:
                    raise BudgetExceeded(f"visited more than {budget} elements")
        frontier = nxt
        if not frontier:
            break
    return False
