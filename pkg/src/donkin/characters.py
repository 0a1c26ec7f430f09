"""Formal character ring: dual Weyl characters, tensor/exterior operations,
decomposition into the dual-Weyl basis, and restrictedness tests.

A formal character is a finite map from weights (fundamental-weight
coordinates) to arbitrary-precision integer multiplicities.  Dominant
multiplicities of dual Weyl modules are computed with Freudenthal's recursion
and expanded along Weyl orbits; they are memoized in memory and can be
persisted to a small versioned binary cache file.
"""
from __future__ import annotations

import math
import os
import struct
import threading
from dataclasses import dataclass, field

from .errors import (
    AmbientMismatch,
    NegativeInput,
    NotDominant,
    NotSymmetric,
)
from .rootsystem import (
    GroupType,
    RootDatum,
    Weight,
    build_root_datum,
    dominant_representative,
    is_dominant,
    normalize_type,
    weyl_orbit,
)

# direct k-subset expansion of exterior powers up to this dimension,
# Newton/Adams identities above it
DIRECT_EXTERIOR_LIMIT = 24


@dataclass(frozen=True)
class FormalCharacter:
    """Finite weight -> multiplicity map over a fixed ambient group type."""

    ambient: GroupType
    support: dict[Weight, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "ambient", normalize_type(self.ambient))
        object.__setattr__(
            self, "support", {w: m for w, m in self.support.items() if m})

    def dim(self) -> int:
        return sum(self.support.values())

    def multiplicity(self, w: Weight) -> int:
        return self.support.get(tuple(w), 0)

    def items_sorted(self):
        rd = build_root_datum(self.ambient)
        return sorted(self.support.items(), key=lambda kv: (-rd.height(kv[0]), kv[0]))

    def __eq__(self, other):
        return (isinstance(other, FormalCharacter)
                and self.ambient == other.ambient
                and self.support == other.support)

    def __repr__(self):
        return f"FormalCharacter({self.ambient}, {len(self.support)} weights, dim {self.dim()})"


def trivial_character(ambient) -> FormalCharacter:
    gt = normalize_type(ambient if isinstance(ambient, GroupType) else GroupType.parse(ambient))
    return FormalCharacter(gt, {(0,) * gt.rank: 1})


def dim(chi: FormalCharacter) -> int:
    return chi.dim()


# ---------------------------------------------------------------------------
# Freudenthal's recursion

_DOMINANT_MULTS: dict[tuple[str, Weight], dict[Weight, int]] = {}
_LOCK = threading.Lock()


def _dominant_weights_below(rd: RootDatum, lam: Weight) -> list[Weight]:
    """All dominant weights of the dual Weyl module with highest weight lam.

    These are exactly the dominant mu <= lam; they are generated by repeatedly
    subtracting positive roots while staying dominant (covers in the dominance
    order on dominant weights differ by a positive root).
    """
    simple = rd.simple_indices()
    found = {tuple(lam)}
    frontier = [tuple(lam)]
    while frontier:
        nxt = []
        for mu in frontier:
            for alpha in rd.positive_roots:
                nu = tuple(m - a for m, a in zip(mu, alpha))
                if nu not in found and all(nu[i] >= 0 for i in simple):
                    found.add(nu)
                    nxt.append(nu)
        frontier = nxt
    return sorted(found, key=lambda w: (-rd.height(w), w))


def _freudenthal(rd: RootDatum, lam: Weight) -> dict[Weight, int]:
    key = (str(rd.gtype), tuple(lam))
    with _LOCK:
        cached = _DOMINANT_MULTS.get(key)
    if cached is not None:
        return cached
    if not rd.positive_roots:
        mults = {tuple(lam): 1}
    else:
        order = _dominant_weights_below(rd, lam)
        lam_rho = tuple(l + r for l, r in zip(lam, rd.rho))
        clam = rd.inner(lam_rho, lam_rho)
        mults = {order[0]: 1}
        for mu in order[1:]:
            mu_rho = tuple(m + r for m, r in zip(mu, rd.rho))
            denom = clam - rd.inner(mu_rho, mu_rho)
            total = 0
            for alpha in rd.positive_roots:
                k = 1
                while True:
                    nu = tuple(m + k * a for m, a in zip(mu, alpha))
                    m_nu = mults.get(dominant_representative(rd, nu), 0)
                    if m_nu == 0:
                        break
                    total += m_nu * rd.inner(nu, alpha)
                    k += 1
            val = 2 * total / denom
            if val.denominator != 1:
                raise AssertionError("Freudenthal multiplicity not integral")
            if val:
                mults[mu] = int(val)
        mults = {w: m for w, m in mults.items() if m}
    with _LOCK:
        _DOMINANT_MULTS.setdefault(key, mults)
    return mults


def dual_weyl_character(rd: RootDatum, lam: Weight) -> FormalCharacter:
    """Character of the dual Weyl module with highest weight ``lam``."""
    rd.check_weight(lam)
    lam = tuple(lam)
    if not is_dominant(rd, lam):
        raise NotDominant(f"{lam} is not dominant")
    support: dict[Weight, int] = {}
    for mu, m in _freudenthal(rd, lam).items():
        for w in weyl_orbit(rd, mu):
            support[w] = m
    return FormalCharacter(rd.gtype, support)


# ---------------------------------------------------------------------------
# Ring operations

def _check_same_ambient(c1: FormalCharacter, c2: FormalCharacter):
    if c1.ambient != c2.ambient:
        raise AmbientMismatch(f"{c1.ambient} vs {c2.ambient}")


def add(c1: FormalCharacter, c2: FormalCharacter) -> FormalCharacter:
    _check_same_ambient(c1, c2)
    out = dict(c1.support)
    for w, m in c2.support.items():
        out[w] = out.get(w, 0) + m
    return FormalCharacter(c1.ambient, out)


def scale(chi: FormalCharacter, c: int) -> FormalCharacter:
    return FormalCharacter(chi.ambient, {w: c * m for w, m in chi.support.items()})


def tensor(c1: FormalCharacter, c2: FormalCharacter) -> FormalCharacter:
    """Convolution of supports; the character of a tensor product."""
    _check_same_ambient(c1, c2)
    out: dict[Weight, int] = {}
    for w1, m1 in c1.support.items():
        for w2, m2 in c2.support.items():
            w = tuple(a + b for a, b in zip(w1, w2))
            out[w] = out.get(w, 0) + m1 * m2
    return FormalCharacter(c1.ambient, out)


def external_product(c1: FormalCharacter, c2: FormalCharacter) -> FormalCharacter:
    """Character of an external tensor product over the product group."""
    gt = normalize_type(GroupType(c1.ambient.factors + c2.ambient.factors))
    out: dict[Weight, int] = {}
    for w1, m1 in c1.support.items():
        for w2, m2 in c2.support.items():
            out[w1 + w2] = out.get(w1 + w2, 0) + m1 * m2
    return FormalCharacter(gt, out)


def adams(chi: FormalCharacter, k: int) -> FormalCharacter:
    """k-th Adams operation: stretch every weight by k."""
    return FormalCharacter(
        chi.ambient,
        {tuple(k * x for x in w): m for w, m in chi.support.items()})


def _exterior_direct(chi: FormalCharacter, kmax: int) -> list[FormalCharacter]:
    """Exterior powers 0..kmax by expanding one weight copy at a time."""
    zero = (0,) * chi.ambient.rank
    rows: list[dict[Weight, int]] = [{zero: 1}] + [dict() for _ in range(kmax)]
    for w, mult in sorted(chi.support.items()):
        for _ in range(mult):
            for k in range(min(kmax, 0) or kmax, 0, -1):
                src = rows[k - 1]
                if not src:
                    continue
                dst = rows[k]
                for v, m in src.items():
                    u = tuple(a + b for a, b in zip(v, w))
                    dst[u] = dst.get(u, 0) + m
    return [FormalCharacter(chi.ambient, r) for r in rows]


def _exterior_newton(chi: FormalCharacter, kmax: int) -> list[FormalCharacter]:
    """Exterior powers 0..kmax from Adams operations via Newton's identity."""
    psi = [None] + [adams(chi, i) for i in range(1, kmax + 1)]
    es: list[FormalCharacter] = [trivial_character(chi.ambient)]
    for k in range(1, kmax + 1):
        acc: dict[Weight, int] = {}
        for i in range(1, k + 1):
            sign = 1 if i % 2 == 1 else -1
            term = tensor(es[k - i], psi[i])
            for w, m in term.support.items():
                acc[w] = acc.get(w, 0) + sign * m
        out = {}
        for w, m in acc.items():
            if m % k:
                raise AssertionError("Newton identity produced a non-integer")
            if m // k:
                out[w] = m // k
        es.append(FormalCharacter(chi.ambient, out))
    return es


def _exterior_powers(chi: FormalCharacter, kmax: int) -> list[FormalCharacter]:
    if any(m < 0 for m in chi.support.values()):
        raise NegativeInput("exterior powers need a genuine character")
    d = chi.dim()
    kmax = min(kmax, d)
    if d <= DIRECT_EXTERIOR_LIMIT:
        return _exterior_direct(chi, kmax)
    return _exterior_newton(chi, kmax)


def exterior_power(chi: FormalCharacter, k: int) -> FormalCharacter:
    if k < 0:
        raise NegativeInput("negative exterior power")
    if any(m < 0 for m in chi.support.values()):
        raise NegativeInput("exterior powers need a genuine character")
    if k > chi.dim():
        return FormalCharacter(chi.ambient, {})
    return _exterior_powers(chi, k)[k]


def exterior_algebra(chi: FormalCharacter) -> FormalCharacter:
    """Sum of all exterior powers; total dimension 2**dim."""
    powers = _exterior_powers(chi, chi.dim())
    out: dict[Weight, int] = {}
    for p in powers:
        for w, m in p.support.items():
            out[w] = out.get(w, 0) + m
    result = FormalCharacter(chi.ambient, out)
    if result.dim() != 2 ** chi.dim():
        raise AssertionError("exterior algebra dimension check failed")
    return result


# ---------------------------------------------------------------------------
# Decomposition into the dual-Weyl basis

@dataclass(frozen=True)
class DualWeylDecomposition:
    """Multiplicities of dual Weyl characters; exact iff all nonnegative."""

    ambient: GroupType
    terms: dict[Weight, int]
    exact: bool

    def character(self, rd: RootDatum | None = None) -> FormalCharacter:
        rd = rd or build_root_datum(self.ambient)
        out: dict[Weight, int] = {}
        for lam, m in self.terms.items():
            for w, mw in dual_weyl_character(rd, lam).support.items():
                out[w] = out.get(w, 0) + m * mw
        return FormalCharacter(self.ambient, out)

    def items_sorted(self):
        rd = build_root_datum(self.ambient)
        return sorted(self.terms.items(), key=lambda kv: (-rd.height(kv[0]), kv[0]))


def decompose_dual_weyl(rd: RootDatum, chi: FormalCharacter) -> DualWeylDecomposition:
    """Peel-off decomposition of a Weyl-symmetric character.

    Repeatedly strips mult * character(dual Weyl) at the surviving weight of
    maximal height (ties broken lexicographically).  A maximal surviving
    weight that is not dominant means the input was not Weyl-invariant.
    """
    if normalize_type(chi.ambient) != rd.gtype:
        raise AmbientMismatch(f"{chi.ambient} vs {rd.gtype}")
    residual = dict(chi.support)
    terms: dict[Weight, int] = {}
    while residual:
        w = max(residual, key=lambda v: (rd.height(v), v))
        if not is_dominant(rd, w):
            raise NotSymmetric(f"maximal surviving weight {w} is not dominant")
        m = residual[w]
        terms[w] = terms.get(w, 0) + m
        for v, mv in _freudenthal(rd, w).items():
            for u in weyl_orbit(rd, v):
                new = residual.get(u, 0) - m * mv
                if new:
                    residual[u] = new
                else:
                    residual.pop(u, None)
    exact = all(m >= 0 for m in terms.values())
    return DualWeylDecomposition(rd.gtype, terms, exact)


def is_restricted(rd: RootDatum, lam: Weight, p: int) -> bool:
    """True iff every non-torus coordinate of the dominant weight is <= p-1."""
    rd.check_weight(lam)
    if not is_dominant(rd, lam):
        raise NotDominant(f"{lam} is not dominant")
    return all(lam[i] <= p - 1 for i in rd.simple_indices())


# ---------------------------------------------------------------------------
# Persistent character cache
#
# Layout (all integers big-endian):
#   8-byte magic "DWCACHE1"
#   u32 entry count, then per entry:
#     u16 type-string length + utf-8 type string
#     u16 rank, rank * i32 highest-weight coordinates
#     u32 dominant-weight count, then per weight:
#       rank * i32 coordinates, u16 length + signed big-endian multiplicity
# Unreadable or wrong-magic files are ignored; correctness never depends on
# the cache (misses silently recompute).

CACHE_MAGIC = b"DWCACHE1"
CACHE_ENV_VAR = "DONKIN_CACHE_DIR"
CACHE_FILENAME = "characters.bin"


def default_cache_dir() -> str:
    return os.environ.get(
        CACHE_ENV_VAR, os.path.join(os.path.expanduser("~"), ".cache", "donkin"))


def _pack_int(n: int) -> bytes:
    data = n.to_bytes((n.bit_length() + 8) // 8 or 1, "big", signed=True)
    return struct.pack(">H", len(data)) + data


def save_cache_file(path: str | None = None) -> str:
    """Persist memoized dominant multiplicities; returns the path written."""
    if path is None:
        path = os.path.join(default_cache_dir(), CACHE_FILENAME)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with _LOCK:
        entries = sorted(_DOMINANT_MULTS.items())
    blob = [CACHE_MAGIC, struct.pack(">I", len(entries))]
    for (tname, lam), mults in entries:
        enc = tname.encode()
        blob.append(struct.pack(">H", len(enc)))
        blob.append(enc)
        blob.append(struct.pack(">H", len(lam)))
        blob.append(struct.pack(f">{len(lam)}i", *lam))
        blob.append(struct.pack(">I", len(mults)))
        for w, m in sorted(mults.items()):
            blob.append(struct.pack(f">{len(lam)}i", *w))
            blob.append(_pack_int(m))
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(b"".join(blob))
    os.replace(tmp, path)
    return path


def load_cache_file(path: str | None = None) -> int:
    """Merge a cache file into the in-memory table; returns entries loaded.

    Silently returns 0 on a missing, truncated, or wrong-version file.
    """
    if path is None:
        path = os.path.join(default_cache_dir(), CACHE_FILENAME)
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError:
        return 0
    if not data.startswith(CACHE_MAGIC):
        return 0
    pos = len(CACHE_MAGIC)
    loaded = 0
    try:
        (count,) = struct.unpack_from(">I", data, pos)
        pos += 4
        for _ in range(count):
            (tlen,) = struct.unpack_from(">H", data, pos)
            pos += 2
            tname = data[pos:pos + tlen].decode()
            pos += tlen
            (rank,) = struct.unpack_from(">H", data, pos)
            pos += 2
            lam = struct.unpack_from(f">{rank}i", data, pos)
            pos += 4 * rank
            (nw,) = struct.unpack_from(">I", data, pos)
            pos += 4
            mults = {}
            for _ in range(nw):
                w = struct.unpack_from(f">{rank}i", data, pos)
                pos += 4 * rank
                (mlen,) = struct.unpack_from(">H", data, pos)
                pos += 2
                mults[w] = int.from_bytes(data[pos:pos + mlen], "big", signed=True)
                pos += mlen
            with _LOCK:
                _DOMINANT_MULTS.setdefault((tname, lam), mults)
            loaded += 1
    except (struct.error, UnicodeDecodeError):
        return loaded
    return loaded


def clear_memo() -> None:
    with _LOCK:
        _DOMINANT_MULTS.clear()


def binomial(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0
