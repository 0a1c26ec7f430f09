"""Shared test helpers: exact matrix oracles for classical nilpotents.

Everything here is deliberately independent of the package's formulas: Jordan
types are read off from rank sequences, Lie algebras are parametrized from
explicit Gram matrices, and centralizer dimensions come from kernels of
ad-x computed by exact rational elimination.
"""
from __future__ import annotations

import importlib.resources as ir
from fractions import Fraction

import pytest

from donkin.linalg import exact_rational_rank
from donkin.nilpotent import JordanType, parse_orbit_tables


def load_table(name):
    text = (ir.files("donkin") / "data" / f"{name}.tbl").read_text()
    return parse_orbit_tables(text)


@pytest.fixture(scope="session")
def shipped_tables():
    return {name: load_table(name) for name in ("e8", "e7", "e6", "f4", "g2")}


# ---------------------------------------------------------------------------
# matrix constructions

def _zero(n):
    return [[0] * n for _ in range(n)]


def mat_mul(a, b):
    n, m, k = len(a), len(b[0]), len(b)
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        for t in range(k):
            if a[i][t]:
                for j in range(m):
                    out[i][j] += a[i][t] * b[t][j]
    return out


def mat_rank(a) -> int:
    if not a or not a[0]:
        return 0
    return exact_rational_rank(a)


def jordan_type_of(x) -> list[int]:
    """Partition of a nilpotent matrix from its rank sequence."""
    n = len(x)
    ranks = [n]
    power = [[int(i == j) for j in range(n)] for i in range(n)]
    while True:
        power = mat_mul(power, x)
        r = mat_rank(power)
        ranks.append(r)
        if r == 0:
            break
    # number of blocks of size >= k is rank(x^{k-1}) - rank(x^k)
    blocks = []
    for k in range(1, len(ranks)):
        blocks.append(ranks[k - 1] - ranks[k])
    partition = []
    for size in range(len(blocks), 0, -1):
        count = blocks[size - 1] - (blocks[size] if size < len(blocks) else 0)
        partition.extend([size] * count)
    return sorted(partition, reverse=True)


def nilpotent_with_form(jt: JordanType):
    """Explicit nilpotent of the given Jordan type plus an invariant form.

    Returns (x, gram) with x strictly lower-shift per string and
    x^T G + G x == 0; gram is symmetric for SO, alternating for Sp,
    None for GL.  Strings whose size parity clashes with the ambient
    form are laid out in hyperbolic pairs (their multiplicity is even
    for valid types).
    """
    n = jt.n
    x = _zero(n)
    gram = _zero(n) if jt.kind != "GL" else None
    pos = 0

    def put_string(start, s):
        for i in range(s - 1):
            x[start + i + 1][start + i] = 1

    for s, r in jt.parts:
        symmetric_ok = (s % 2 == 1)
        want_symmetric = (jt.kind == "SO")
        if jt.kind == "GL":
            for _ in range(r):
                put_string(pos, s)
                pos += s
            continue
        if symmetric_ok == want_symmetric:
            for _ in range(r):
                put_string(pos, s)
                for i in range(s):
                    gram[pos + i][pos + s - 1 - i] = (-1) ** i
                pos += s
        else:
            assert r % 2 == 0, "parity-clashing sizes need even multiplicity"
            for _ in range(r // 2):
                put_string(pos, s)
                put_string(pos + s, s)
                sign = 1 if want_symmetric else -1
                for i in range(s):
                    j = s - 1 - i
                    gram[pos + i][pos + s + j] = (-1) ** i
                    gram[pos + s + j][pos + i] = sign * (-1) ** i
                pos += 2 * s
    return x, gram


def check_form_invariance(x, gram) -> bool:
    n = len(x)
    xt = [[x[j][i] for j in range(n)] for i in range(n)]
    lhs = mat_mul(xt, gram)
    rhs = mat_mul(gram, x)
    return all(lhs[i][j] + rhs[i][j] == 0 for i in range(n) for j in range(n))


def algebra_basis(kind, n, gram):
    """Integer basis of gl_n / sp_n / so_n for the given Gram matrix.

    For a (skew-)symmetric invertible G, y preserves the form iff G y is
    alternating (SO) resp. symmetric (Sp); our Gram matrices are signed
    permutations so G^{-1} is integral.
    """
    if kind == "GL":
        basis = []
        for i in range(n):
            for j in range(n):
                e = _zero(n)
                e[i][j] = 1
                basis.append(e)
        return basis
    ginv = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if gram[i][j]:
                assert abs(gram[i][j]) == 1
                ginv[j][i] = gram[i][j]
    gram_f = [[Fraction(v) for v in row] for row in gram]
    ident = mat_mul(ginv, gram_f)
    assert all(ident[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))
    basis = []
    for i in range(n):
        for j in range(i, n):
            s = _zero(n)
            if kind == "SO":
                if i == j:
                    continue
                s[i][j], s[j][i] = 1, -1
            else:
                s[i][j] += 1
                s[j][i] += 1
            basis.append(mat_mul(ginv, s))
    return basis


def commutant_dimension(x, basis, extra=None) -> int:
    """dim of {y in span(basis) : [y, x] = 0 (and [y, e] = 0 for e in extra)}."""
    n = len(x)
    constraints = [x] + list(extra or [])
    rows = []
    for y in basis:
        row = []
        for c in constraints:
            yc = mat_mul(y, c)
            cy = mat_mul(c, y)
            row.extend(yc[i][j] - cy[i][j] for i in range(n) for j in range(n))
        rows.append(row)
    return len(basis) - mat_rank(rows)


def grading_element(jt: JordanType):
    """Blockwise diag(s-1, s-3, ..., 1-s), matching nilpotent_with_form.

    Lies in the relevant algebra: the Gram entries pair positions whose
    h-eigenvalues are opposite.
    """
    n = jt.n
    h = _zero(n)
    pos = 0
    for s, r in jt.parts:
        for _ in range(r):
            for i in range(s):
                h[pos + i][pos + i] = s - 1 - 2 * i
            pos += s
    return h


def split_form(kind, n):
    """Maximally split Gram matrix: anti-diagonal, signed for Sp.

    Rational nilpotents only exist in abundance for split forms; the
    enumeration oracle must search this model, not a definite one.
    """
    g = _zero(n)
    for i in range(n):
        if kind == "SO":
            g[i][n - 1 - i] = 1
        else:
            g[i][n - 1 - i] = 1 if i < n // 2 else -1
    return g


def valid_partitions(kind, n):
    """All partitions of n that are valid Jordan types for the kind."""
    from donkin.nilpotent import validate_jordan

    def partitions(total, maxpart):
        if total == 0:
            yield []
            return
        for first in range(min(total, maxpart), 0, -1):
            for rest in partitions(total - first, first):
                yield [first] + rest

    out = []
    for p in partitions(n, n):
        jt = JordanType.from_partition(kind, p)
        if validate_jordan(jt, n):
            out.append(jt)
    return out
