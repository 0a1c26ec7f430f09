import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from donkin.errors import BadIndex, DimensionMismatch, NotDominant, UnknownType
from donkin.rootsystem import (
    GroupType,
    SimpleType,
    build_root_datum,
    dominant_representative,
    highest_root,
    is_dominant,
    normalize_type,
    subdiagram_type,
    weyl_dim,
    weyl_orbit,
)

ALL_SIMPLE = (
    "A1 A2 A3 A4 A5 A6 A7 A8 B2 B3 B4 B5 B6 B7 B8 C3 C4 C5 C6 C7 C8 "
    "D4 D5 D6 D7 D8 E6 E7 E8 F4 G2".split())

COUNTS = {"A": lambda n: n * (n + 1) // 2, "B": lambda n: n * n,
          "C": lambda n: n * n, "D": lambda n: n * (n - 1),
          "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
          "F": lambda n: 24, "G": lambda n: 6}


def reflection_closure_count(rd):
    """Independent oracle: |roots| by closing the simple roots under all
    simple reflections (every root is Weyl-conjugate to a simple root)."""
    simple = [tuple(rd.cartan[r][i] for r in range(rd.rank))
              for i in rd.simple_indices()]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for v in frontier:
            for i in rd.simple_indices():
                u = rd.reflect(v, i)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return len(seen)


@pytest.mark.parametrize("name", ALL_SIMPLE)
def test_positive_root_counts(name):
    rd = build_root_datum(name)
    st_ = rd.gtype.factors[0]
    assert len(rd.positive_roots) == COUNTS[st_.letter](st_.rank)
    assert reflection_closure_count(rd) == 2 * len(rd.positive_roots)


@pytest.mark.parametrize("name", ALL_SIMPLE)
def test_cartan_entries(name):
    rd = build_root_datum(name)
    for i in range(rd.rank):
        assert rd.cartan[i][i] == 2
        for j in range(rd.rank):
            if i != j:
                assert rd.cartan[i][j] in (0, -1, -2, -3)


def test_build_examples():
    assert build_root_datum("A1").cartan == ((2,),)
    assert len(build_root_datum("G2").positive_roots) == 6
    e8 = build_root_datum("E8")
    assert len(e8.positive_roots) == 120
    assert e8.group_dimension() == 248


def test_product_and_torus_datum():
    rd = build_root_datum("A1.B6")
    assert rd.rank == 7
    assert len(rd.positive_roots) == 1 + 36
    rdt = build_root_datum("B2.T1")
    assert rdt.rank == 3
    assert rdt.torus == (False, False, True)
    assert rdt.rho == (1, 1, 0)
    assert all(row[2] == 0 for row in rdt.cartan)


def test_unknown_types():
    for bad in ("E9", "F3", "G3", "H2", "A0"):
        with pytest.raises(UnknownType):
            normalize_type(GroupType.parse(bad))


def test_normalize_examples():
    assert str(normalize_type(GroupType.parse("B1.B6"))) == "A1.B6"
    assert str(normalize_type(GroupType.parse("D2"))) == "A1.A1"
    assert str(normalize_type(GroupType.parse("D3.B1"))) == "A3.A1"
    assert str(normalize_type(GroupType.parse("C2"))) == "B2"
    assert str(normalize_type(GroupType.parse("D1.T1"))) == "T2"
    assert str(normalize_type(GroupType.parse("E7.T1"))) == "E7.T1"


@given(st.lists(st.sampled_from(
    ["A1", "A3", "B1", "B2", "C1", "C2", "C3", "D1", "D2", "D3", "D4",
     "E6", "F4", "G2", "T1", "T2"]), min_size=1, max_size=5))
def test_normalize_idempotent_and_rank_preserving(letters):
    gt = GroupType.parse(".".join(letters))
    once = normalize_type(gt)
    assert normalize_type(once) == once
    assert once.rank == gt.rank


def test_dominance():
    a2 = build_root_datum("A2")
    assert is_dominant(a2, (0, 0))
    assert not is_dominant(a2, (1, -1))
    g2 = build_root_datum("G2")
    assert is_dominant(g2, g2.rho)
    with pytest.raises(DimensionMismatch):
        is_dominant(a2, (1, 2, 3))


def test_dominant_representative():
    a1 = build_root_datum("A1")
    assert dominant_representative(a1, (-3,)) == (3,)
    a2 = build_root_datum("A2")
    rep = dominant_representative(a2, (-1, 2))
    assert is_dominant(a2, rep)
    assert rep in weyl_orbit(a2, rep)
    # idempotence on already-dominant weights
    assert dominant_representative(a2, (2, 1)) == (2, 1)


@pytest.mark.parametrize("name,w", [
    ("A2", (2, -1)), ("B2", (-1, 3)), ("G2", (1, -2)), ("A1.A1", (-1, 2)),
])
def test_dominant_representative_orbit_invariant(name, w):
    rd = build_root_datum(name)
    rep = dominant_representative(rd, w)
    for v in weyl_orbit(rd, rep):
        assert dominant_representative(rd, v) == rep
    assert dominant_representative(rd, rep) == rep


def test_weyl_orbits():
    a1 = build_root_datum("A1")
    assert weyl_orbit(a1, (2,)) == ((-2,), (2,))
    a2 = build_root_datum("A2")
    assert len(weyl_orbit(a2, (1, 1))) == 6
    g2 = build_root_datum("G2")
    assert len(weyl_orbit(g2, (1, 0))) == 6
    with pytest.raises(NotDominant):
        weyl_orbit(a2, (-1, 0))


def test_orbit_size_divides_weyl_order():
    orders = {"A2": 6, "B2": 8, "G2": 12, "A3": 24}
    for name, order in orders.items():
        rd = build_root_datum(name)
        for w in [(1,) + (0,) * (rd.rank - 1), (1,) * rd.rank, (2, 1) + (0,) * (rd.rank - 2)]:
            assert order % len(weyl_orbit(rd, w)) == 0


def test_weyl_dim():
    g2 = build_root_datum("G2")
    assert weyl_dim(g2, (1, 0)) == 7
    assert weyl_dim(g2, (0, 0)) == 1
    a2 = build_root_datum("A2")
    assert weyl_dim(a2, (1, 1)) == 8
    a1 = build_root_datum("A1")
    for n in range(21):
        assert weyl_dim(a1, (n,)) == n + 1
    with pytest.raises(NotDominant):
        weyl_dim(a2, (-1, 0))


def test_highest_roots():
    assert highest_root(build_root_datum("E8")) == (0,) * 7 + (1,)
    assert highest_root(build_root_datum("G2")) == (0, 1)
    assert highest_root(build_root_datum("A2")) == (1, 1)
    assert highest_root(build_root_datum("F4")) == (1, 0, 0, 0)


def test_subdiagram_types():
    e8 = build_root_datum("E8")
    assert str(subdiagram_type(e8, range(1, 8))) == "E7.T1"
    assert str(subdiagram_type(e8, range(1, 7))) == "E6.T2"
    assert str(subdiagram_type(e8, [2, 3, 4, 5])) == "D4.T4"
    assert str(subdiagram_type(e8, [1, 3, 4, 5, 6, 7, 8])) == "A7.T1"
    a3 = build_root_datum("A3")
    assert str(subdiagram_type(a3, [])) == "T3"
    f4 = build_root_datum("F4")
    assert str(subdiagram_type(f4, [2, 3, 4])) == "C3.T1"
    assert str(subdiagram_type(f4, [1, 2, 3])) == "B3.T1"
    assert str(subdiagram_type(f4, [3, 4])) == "A2.T2"
    b4 = build_root_datum("B4")
    assert str(subdiagram_type(b4, [1, 3, 4])) == "A1.B2.T1"
    d5 = build_root_datum("D5")
    assert str(subdiagram_type(d5, [2, 3, 4, 5])) == "D4.T1"
    assert str(subdiagram_type(d5, [3, 4, 5])) == "A3.T2"
    with pytest.raises(BadIndex):
        subdiagram_type(e8, [0])
    with pytest.raises(BadIndex):
        subdiagram_type(e8, [9])
    with pytest.raises(BadIndex):
        subdiagram_type(build_root_datum("B2.T1"), [3])


def test_parse_roundtrip():
    for text in ("E8", "A1.B6", "B2.T1", "1"):
        assert str(GroupType.parse(text)) == text
    assert SimpleType.parse("B12") == SimpleType("B", 12)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["A2", "B2", "G2", "A1.A1"]),
       st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_dominant_representative_properties(name, w):
    rd = build_root_datum(name)
    rep = dominant_representative(rd, w)
    assert is_dominant(rd, rep)
    assert dominant_representative(rd, rep) == rep
    assert w in weyl_orbit(rd, rep)
