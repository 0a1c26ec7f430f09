"""Root data for the simple types and their products, plus Weyl-group combinatorics.

Conventions (fixed once, used everywhere):

* Bourbaki node numbering for every simple type.  In particular the G2 node 1
  is the short simple root, B_n has its short root last, C_n its long root
  last, and the E-series carries the branch node at position 2.
* Weights are integer tuples in fundamental-weight coordinates, one entry per
  coordinate of the (possibly product) group; torus coordinates are
  unconstrained integers.
* The Cartan matrix is stored with ``cartan[i][j] = <alpha_j, alpha_i^vee>``,
  so column ``j`` is the simple root ``alpha_j`` written in fundamental-weight
  coordinates.  Torus coordinates contribute zero rows and columns.
"""
from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import BadIndex, DimensionMismatch, NotDominant, UnknownType

Weight = tuple[int, ...]

_TYPE_RE = re.compile(r"([A-GT])(\d+)$")

# Alias rules applied by normalize_type before any comparison.  The tables
# freely rename low-rank classical types (SO3 = B1, Sp2 = C1, SO2 = T1, ...).
_ALIASES: dict[tuple[str, int], tuple[tuple[str, int], ...]] = {
    ("B", 1): (("A", 1),),
    ("C", 1): (("A", 1),),
    ("C", 2): (("B", 2),),
    ("D", 1): (("T", 1),),
    ("D", 2): (("A", 1), ("A", 1)),
    ("D", 3): (("A", 3),),
}

_POSITIVE_ROOT_COUNTS = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
    "F": lambda n: 24,
    "G": lambda n: 6,
    "T": lambda n: 0,
}


def _is_canonical(letter: str, rank: int) -> bool:
    if rank < 1:
        return False
    return {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 3,
        "D": rank >= 4,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
        "T": True,
    }.get(letter, False)


@dataclass(frozen=True, order=True)
class SimpleType:
    """One factor of a group type: a simple-type letter plus rank.

    ``T`` denotes a central torus factor whose rank is its dimension.
    Non-canonical spellings (B1, C1, C2, D1, D2, D3) are accepted and resolved
    by :func:`normalize_type`.
    """

    letter: str
    rank: int

    def __post_init__(self):
        if self.letter not in "ABCDEFGT" or self.rank < 1:
            raise UnknownType(f"bad simple type {self.letter}{self.rank}")
        if self.letter not in "ABCDT" and not _is_canonical(self.letter, self.rank):
            raise UnknownType(f"bad simple type {self.letter}{self.rank}")
        if self.letter in "BCD" and not _is_canonical(self.letter, self.rank) \
                and (self.letter, self.rank) not in _ALIASES:
            raise UnknownType(f"bad simple type {self.letter}{self.rank}")

    @property
    def is_torus(self) -> bool:
        return self.letter == "T"

    def __str__(self) -> str:
        return f"{self.letter}{self.rank}"

    @classmethod
    def parse(cls, text: str) -> "SimpleType":
        m = _TYPE_RE.match(text.strip())
        if not m:
            raise UnknownType(f"cannot parse simple type {text!r}")
        return cls(m.group(1), int(m.group(2)))


@dataclass(frozen=True)
class GroupType:
    """An ordered product of simple and torus factors, e.g. ``A1.B6``."""

    factors: tuple[SimpleType, ...]

    @classmethod
    def parse(cls, text: str) -> "GroupType":
        text = text.strip()
        if text in ("1", ""):
            return cls(())
        return cls(tuple(SimpleType.parse(p) for p in text.split(".")))

    @classmethod
    def of(cls, *specs) -> "GroupType":
        facs = []
        for s in specs:
            if isinstance(s, SimpleType):
                facs.append(s)
            elif isinstance(s, GroupType):
                facs.extend(s.factors)
            else:
                facs.extend(cls.parse(s).factors)
        return cls(tuple(facs))

    @property
    def rank(self) -> int:
        return sum(f.rank for f in self.factors)

    def __str__(self) -> str:
        return ".".join(str(f) for f in self.factors) if self.factors else "1"

    def semisimple_factors(self) -> tuple[SimpleType, ...]:
        return tuple(f for f in self.factors if not f.is_torus)

    def torus_rank(self) -> int:
        return sum(f.rank for f in self.factors if f.is_torus)


def normalize_type(gtype: GroupType) -> GroupType:
    """Canonical form: aliases resolved, factors sorted, tori merged.

    Sorting is by letter then descending rank (so ``D3.B1`` becomes
    ``A3.A1``); all torus rank is collected into one trailing ``T`` factor.
    Idempotent, and preserves total rank.
    """
    if isinstance(gtype, str):
        gtype = GroupType.parse(gtype)
    flat: list[SimpleType] = []
    for f in gtype.factors:
        for letter, rank in _ALIASES.get((f.letter, f.rank), ((f.letter, f.rank),)):
            flat.append(SimpleType(letter, rank))
    for f in flat:
        if not _is_canonical(f.letter, f.rank):
            raise UnknownType(f"no canonical form for {f}")
    semis = sorted((f for f in flat if not f.is_torus),
                   key=lambda f: (f.letter, -f.rank))
    torus = sum(f.rank for f in flat if f.is_torus)
    if torus:
        semis.append(SimpleType("T", torus))
    return GroupType(tuple(semis))


def same_type(a: GroupType, b: GroupType) -> bool:
    return normalize_type(a) == normalize_type(b)


# ---------------------------------------------------------------------------
# Cartan data per simple type

def _simple_cartan(letter: str, rank: int) -> tuple[list[list[int]], list[int]]:
    """Cartan matrix and integer symmetrizer d (d_i * a_ij symmetric)."""
    n = rank
    a = [[2 * int(i == j) for j in range(n)] for i in range(n)]

    def bond(i, j, down=-1, up=-1):
        a[i][j] = down
        a[j][i] = up

    if letter == "A":
        for i in range(n - 1):
            bond(i, i + 1)
        d = [1] * n
    elif letter == "B":
        for i in range(n - 2):
            bond(i, i + 1)
        # short root last: a[n-1][n-2] = -2
        bond(n - 2, n - 1, down=-1, up=-2)
        d = [2] * (n - 1) + [1]
    elif letter == "C":
        for i in range(n - 2):
            bond(i, i + 1)
        bond(n - 2, n - 1, down=-2, up=-1)
        d = [1] * (n - 1) + [2]
    elif letter == "D":
        for i in range(n - 2):
            bond(i, i + 1)
        bond(n - 3, n - 1)
        d = [1] * n
    elif letter == "E":
        # path 1-3-4-5-...-n with 2 attached to 4 (Bourbaki)
        chain = [0] + list(range(2, n))
        for u, v in zip(chain, chain[1:]):
            bond(u, v)
        bond(1, 3)
        d = [1] * n
    elif letter == "F":
        bond(0, 1)
        bond(1, 2, down=-1, up=-2)
        bond(2, 3)
        d = [2, 2, 1, 1]
    elif letter == "G":
        bond(0, 1, down=-3, up=-1)
        d = [1, 3]
    else:  # torus
        a = [[0] * n for _ in range(n)]
        d = [0] * n
    return a, d


def _simple_positive_roots(letter: str, rank: int) -> list[tuple[int, ...]]:
    """Positive roots in root coordinates, by root-string closure."""
    if letter == "T":
        return []
    cartan, _ = _simple_cartan(letter, rank)
    n = rank
    simple = [tuple(int(j == i) for j in range(n)) for i in range(n)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(n):
                # <beta, alpha_i^vee> is the i-th fw coordinate of beta
                m = sum(cartan[i][j] * beta[j] for j in range(n))
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        p += 1
                    else:
                        break
                if p - m > 0:
                    up = list(beta)
                    up[i] += 1
                    cand = tuple(up)
                    if cand not in roots:
                        roots.add(cand)
                        nxt.append(cand)
        layer = nxt
    expected = _POSITIVE_ROOT_COUNTS[letter](rank)
    if len(roots) != expected:
        raise AssertionError(f"{letter}{rank}: got {len(roots)} roots, expected {expected}")
    return sorted(roots, key=lambda r: (sum(r), r))


class RootDatum:
    """Immutable root/coroot data for a normalized group type.

    Positive roots and coroots are stored as full-length vectors: roots in
    fundamental-weight coordinates, coroots as integer functionals on those
    coordinates (coefficients on the simple coroots).  Torus coordinates carry
    no roots and zero Cartan rows.
    """

    def __init__(self, gtype: GroupType):
        gtype = normalize_type(gtype)
        self.gtype = gtype
        self.rank = gtype.rank
        n = self.rank
        cartan = [[0] * n for _ in range(n)]
        torus = [False] * n
        sym = [0] * n
        pos_roots: list[Weight] = []
        pos_coroots: list[Weight] = []
        offset = 0
        for fac in gtype.factors:
            r = fac.rank
            if fac.is_torus:
                for i in range(r):
                    torus[offset + i] = True
                offset += r
                continue
            block, d = _simple_cartan(fac.letter, fac.rank)
            for i in range(r):
                sym[offset + i] = d[i]
                for j in range(r):
                    cartan[offset + i][offset + j] = block[i][j]
            for rc in _simple_positive_roots(fac.letter, fac.rank):
                fw = [0] * n
                for i in range(r):
                    fw[offset + i] = sum(block[i][j] * rc[j] for j in range(r))
                norm2 = sum(rc[i] * rc[j] * d[i] * block[i][j]
                            for i in range(r) for j in range(r))
                cv = [0] * n
                for j in range(r):
                    num = 2 * rc[j] * d[j]
                    if num % norm2:
                        raise AssertionError("non-integral coroot coefficient")
                    cv[offset + j] = num // norm2
                pos_roots.append(tuple(fw))
                pos_coroots.append(tuple(cv))
            offset += r
        self.cartan = tuple(tuple(row) for row in cartan)
        self.torus = tuple(torus)
        self.symmetrizer = tuple(sym)
        self.positive_roots = tuple(pos_roots)
        self.positive_coroots = tuple(pos_coroots)
        self.fundamental_weights = "bourbaki-fundamental"
        self.rho: Weight = tuple(0 if torus[i] else 1 for i in range(n))
        # column i of the Cartan matrix = alpha_i in fw coordinates
        self._columns = tuple(tuple(cartan[r][i] for r in range(n)) for i in range(n))
        self._inner_cache = None
        # sum of positive coroots; any dominance-compatible height functional
        self.height_functional: Weight = tuple(
            sum(cv[i] for cv in pos_coroots) for i in range(n))

    # -- basics ------------------------------------------------------------

    def check_weight(self, w: Weight) -> None:
        if len(w) != self.rank:
            raise DimensionMismatch(
                f"weight of length {len(w)} against rank {self.rank}")

    def simple_indices(self) -> list[int]:
        return [i for i in range(self.rank) if not self.torus[i]]

    def reflect(self, w: Weight, i: int) -> Weight:
        """Simple reflection s_i (0-based coordinate index)."""
        c = w[i]
        if c == 0:
            return w
        col = self._columns[i]
        return tuple(w[j] - c * col[j] for j in range(self.rank))

    def height(self, w: Weight) -> int:
        return sum(h * x for h, x in zip(self.height_functional, w))

    def pairing(self, w: Weight, coroot: Weight) -> int:
        return sum(c * x for c, x in zip(coroot, w))

    @property
    def inner_matrix(self):
        """W-invariant inner product on fw coordinates (Fractions).

        G = (A^{-1})^T D per semisimple block, zero on torus coordinates.
        """
        if self._inner_cache is None:
            n = self.rank
            g = [[Fraction(0)] * n for _ in range(n)]
            offset = 0
            for fac in self.gtype.factors:
                r = fac.rank
                if not fac.is_torus:
                    block, d = _simple_cartan(fac.letter, fac.rank)
                    inv = linalg.rational_inverse(block)
                    for i in range(r):
                        for j in range(r):
                            g[offset + i][offset + j] = inv[j][i] * d[j]
                offset += r
            self._inner_cache = tuple(tuple(row) for row in g)
        return self._inner_cache

    def inner(self, v: Weight, w: Weight) -> Fraction:
        g = self.inner_matrix
        return sum(v[i] * sum(g[i][j] * w[j] for j in range(self.rank))
                   for i in range(self.rank) if v[i])

    def group_dimension(self) -> int:
        """Dimension of the group: rank + number of roots."""
        return self.rank + 2 * len(self.positive_roots)

    def __repr__(self):
        return f"RootDatum({self.gtype})"


@functools.lru_cache(maxsize=None)
def _datum_cache(key: str) -> RootDatum:
    return RootDatum(GroupType.parse(key))


def build_root_datum(gtype) -> RootDatum:
    """Root datum for a (normalizable) group type; cached and immutable."""
    if isinstance(gtype, str):
        gtype = GroupType.parse(gtype)
    return _datum_cache(str(normalize_type(gtype)))


# ---------------------------------------------------------------------------
# Weyl combinatorics

def is_dominant(rd: RootDatum, w: Weight) -> bool:
    rd.check_weight(w)
    return all(w[i] >= 0 for i in rd.simple_indices())


def dominant_representative(rd: RootDatum, w: Weight) -> Weight:
    """The dominant weight in the Weyl orbit of ``w``."""
    rd.check_weight(w)
    w = tuple(w)
    simple = rd.simple_indices()
    while True:
        i = next((i for i in simple if w[i] < 0), None)
        if i is None:
            return w
        w = rd.reflect(w, i)


def weyl_orbit(rd: RootDatum, w: Weight) -> tuple[Weight, ...]:
    """Full Weyl orbit of a dominant weight, canonically sorted."""
    rd.check_weight(w)
    if not is_dominant(rd, w):
        raise NotDominant(f"{w} is not dominant")
    simple = rd.simple_indices()
    seen = {tuple(w)}
    frontier = [tuple(w)]
    while frontier:
        nxt = []
        for v in frontier:
            for i in simple:
                u = rd.reflect(v, i)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return tuple(sorted(seen))


def weyl_dim(rd: RootDatum, lam: Weight) -> int:
    """Dimension of the dual Weyl module, by the product formula."""
    rd.check_weight(lam)
    if not is_dominant(rd, lam):
        raise NotDominant(f"{lam} is not dominant")
    num = den = 1
    for cv in rd.positive_coroots:
        num *= rd.pairing(lam, cv) + rd.pairing(rd.rho, cv)
        den *= rd.pairing(rd.rho, cv)
    if num % den:
        raise AssertionError("Weyl dimension formula did not divide")
    return num // den


def highest_root(rd: RootDatum) -> Weight:
    return max(rd.positive_roots, key=rd.height)


# ---------------------------------------------------------------------------
# Dynkin subdiagrams

def _component_order(comp: list[int], cartan, adj) -> tuple[SimpleType, list[int]]:
    """Classify one connected induced subdiagram and order its nodes Bourbaki-style."""
    m = len(comp)
    if m == 1:
        return SimpleType("A", 1), list(comp)
    deg = {u: len(adj[u]) for u in comp}

    def walk(start, first):
        # path from start through first to the far leaf
        order = [start, first]
        while True:
            nxt = [v for v in adj[order[-1]] if v != order[-2]]
            if not nxt:
                return order
            if len(nxt) > 1:
                raise UnknownType("not a Dynkin subdiagram")
            order.append(nxt[0])

    triple = [(u, v) for u in comp for v in adj[u] if cartan[u][v] * cartan[v][u] == 3]
    double = [(u, v) for u in comp for v in adj[u] if cartan[u][v] == -2]
    if triple:
        if m != 2:
            raise UnknownType("not a Dynkin subdiagram")
        u, v = next((u, v) for u, v in double or triple if cartan[u][v] == -3)
        return SimpleType("G", 2), [u, v]  # short node first
    if double:
        u, v = double[0]  # cartan[u][v] == -2: u is the short node
        if m == 2:
            return SimpleType("B", 2), [v, u]  # long, short
        if deg[u] == 2 and deg[v] == 2:
            if m != 4:
                raise UnknownType("not a Dynkin subdiagram")
            long_leaf = next(x for x in adj[v] if x != u)
            short_leaf = next(x for x in adj[u] if x != v)
            return SimpleType("F", 4), [long_leaf, v, u, short_leaf]
        if deg[u] == 1:
            # short leaf: type B, path ends at u
            order = walk(u, v)[::-1]
            return SimpleType("B", m), order
        if deg[v] == 1:
            order = walk(v, u)[::-1]
            return SimpleType("C", m), order
        raise UnknownType("not a Dynkin subdiagram")
    # simply laced
    branch = [u for u in comp if deg[u] >= 3]
    if not branch:
        ends = sorted(u for u in comp if deg[u] == 1)
        return SimpleType("A", m), walk(ends[0], adj[ends[0]][0]) if m > 1 else list(comp)
    if len(branch) > 1 or deg[branch[0]] > 3:
        raise UnknownType("not a Dynkin subdiagram")
    c = branch[0]
    arms = sorted((walk(c, v)[1:] for v in adj[c]),
                  key=lambda arm: (len(arm), arm[0]))
    l1, l2, l3 = (len(a) for a in arms)
    if l1 == 1 and l2 == 1:
        tail = arms[2]
        leaves = sorted([arms[0][0], arms[1][0]])
        return SimpleType("D", m), tail[::-1] + [c] + leaves
    if l1 == 1 and l2 == 2 and m in (6, 7, 8):
        near, far = arms[1]
        return SimpleType("E", m), [far, arms[0][0], near, c] + arms[2]
    raise UnknownType("not a Dynkin subdiagram")


def _classify_nodes(rd: RootDatum, nodes) -> list[tuple[SimpleType, list[int]]]:
    """Split a node subset into classified components with Bourbaki node order.

    ``nodes`` are 1-based coordinate indices; torus coordinates are invalid.
    The returned node lists are 0-based coordinate indices.
    """
    idx = sorted(set(nodes))
    for i in idx:
        if not 1 <= i <= rd.rank or rd.torus[i - 1]:
            raise BadIndex(f"node {i} outside the diagram of {rd.gtype}")
    sel = [i - 1 for i in idx]
    adj = {u: [v for v in sel if v != u and rd.cartan[u][v] != 0] for u in sel}
    comps = []
    seen: set[int] = set()
    for u in sel:
        if u in seen:
            continue
        comp = [u]
        seen.add(u)
        queue = [u]
        while queue:
            x = queue.pop()
            for v in adj[x]:
                if v not in seen:
                    seen.add(v)
                    comp.append(v)
                    queue.append(v)
        comps.append(sorted(comp))
    out = []
    for comp in comps:
        stype, order = _component_order(comp, rd.cartan, adj)
        block, _ = _simple_cartan(stype.letter, stype.rank)
        got = [[rd.cartan[u][v] for v in order] for u in order]
        if got != block:
            raise AssertionError(f"subdiagram classification failed near nodes {comp}")
        out.append((stype, order))
    out.sort(key=lambda t: (t[0].letter, -t[0].rank, t[1][0]))
    return out


def subdiagram_type(rd: RootDatum, nodes) -> GroupType:
    """Group type of the induced Dynkin subdiagram plus a torus of the corank."""
    comps = _classify_nodes(rd, nodes)
    facs = [st for st, _ in comps]
    corank = rd.rank - sum(st.rank for st in facs)
    if corank:
        facs.append(SimpleType("T", corank))
    return normalize_type(GroupType(tuple(facs)))
