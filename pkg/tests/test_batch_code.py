import math
import random
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geobatch import batch_code as bc
from geobatch.errors import (
    AssignmentFailure,
    BudgetExceeded,
    IndexOutOfRange,
    InvalidParams,
    LengthMismatch,
    UncertifiedCollection,
)
from geobatch.finite_field import field_new
from geobatch.geometry import NiceCollection, affine_plane, certify, construction1
from geobatch.linalg_fq import index_vector, vector_index
from oracles import conflict_by_pairs, is_batch_by_definition

F3 = field_new(3)


def label(i):
    return "".join(map(str, index_vector(F3, 3, i)))


# small codes and their verdicts from oracles.is_batch_by_definition
GRID3 = bc.imported(9, [(0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6), (1, 4, 7), (2, 5, 8)])
HAM = bc.imported(4, [(0, 1, 2), (0, 1, 3), (0, 2, 3)])
PARITY = bc.imported(3, [(0, 1, 2)])
EMPTY = bc.imported(3, [])


def test_paper_code_shape(paper_code):
    assert (paper_code.n, paper_code.r, paper_code.N) == (27, 27, 54)
    assert paper_code.meta["k"] == "3"
    # direction (1,2,1) is the second member; its coset through (0,1,2)
    assert (5, 9, 25) in paper_code.parities[9:18]
    assert [vector_index(F3, v) for v in [(0, 1, 2), (1, 0, 0), (2, 2, 1)]] == [5, 9, 25]


def test_explicit_structure():
    for q, ell in [(3, 1), (4, 1), (5, 2)]:
        c = certify(construction1(field_new(q), ell))
        code = bc.build_explicit(c)
        assert code.n == q ** (2 * ell + 1)
        assert code.r == c.m * q ** (ell + 1)
        assert all(len(s) == q**ell for s in code.parities)
        assert all(len(p) == c.m for p in code.parities_of)
        for i in range(0, code.n, max(1, code.n // 20)):
            masks = [rs.mask for rs in bc.simple_recovering_sets(code, i)]
            assert len(masks) == c.m
            assert all(a & b == 0 for j, a in enumerate(masks) for b in masks[j + 1:])


def test_single_member_collection():
    c = certify(construction1(field_new(3), 1, m=1))
    code = bc.build_explicit(c)
    assert code.r == 9
    assert all(len(p) == 1 for p in code.parities_of)
    assert code.meta["k"] == "1"


def test_uncertified_collection_rejected():
    c = construction1(field_new(3), 1)
    bare = NiceCollection(c.field, 1, c.subspaces)
    with pytest.raises(UncertifiedCollection):
        bc.build_explicit(bare)
    assert "k" not in bc.build_explicit(bare, strict=False).meta


def test_encode_examples(paper_code):
    assert bc.encode(paper_code, [0] * 27) == [0] * 54
    info = [0] * 27
    info[5] = 1
    word = bc.encode(paper_code, info)
    set_parities = [t for t in range(27) if word[27 + t]]
    assert set_parities == list(paper_code.parities_of[5])
    assert len(set_parities) == 3
    with pytest.raises(LengthMismatch):
        bc.encode(paper_code, [0] * 26)


@given(a=st.lists(st.integers(0, 1), min_size=27, max_size=27), b=st.lists(st.integers(0, 1), min_size=27, max_size=27))
def test_encode_linear(paper_code, a, b):
    ab = [x ^ y for x, y in zip(a, b)]
    assert bc.encode(paper_code, ab) == [x ^ y for x, y in zip(bc.encode(paper_code, a), bc.encode(paper_code, b))]


def test_paper_recovering_sets(paper_code):
    sets = bc.simple_recovering_sets(paper_code, 5)
    partners = [{label(p) for p in rs.positions if p < 27} for rs in sets]
    assert sorted(map(sorted, partners)) == [["100", "221"], ["112", "212"], ["120", "201"]]
    assert all(sum(p >= 27 for p in rs.positions) == 1 and 5 not in rs.positions for rs in sets)


def test_recovering_sets_uncovered_and_range():
    code = bc.imported(3, [(0, 1)])
    assert bc.simple_recovering_sets(code, 2) == []
    with pytest.raises(IndexOutOfRange):
        bc.simple_recovering_sets(code, 3)


def test_recovering_set_identity_random_words(paper_code):
    rng = random.Random(0)
    codes = [paper_code, bc.build_random(25, 1, seed=3, p1=0.5), GRID3]
    for code in codes:
        words = [bc.encode(code, [rng.randrange(2) for _ in range(code.n)]) for _ in range(200)]
        sets = [rs for i in range(code.n) for rs in bc.simple_recovering_sets(code, i)]
        req = bc.MultisetRequest.from_indices([0, 0, 1])
        sets += list(bc.greedy_assign(code, req, allow_singleton=True).sets)
        for w in words:
            for rs in sets:
                assert bc.xor_positions(w, rs.positions) == w[rs.target]


def test_greedy_paper_triple(paper_code):
    a = bc.greedy_assign(paper_code, bc.parse_request("5,5,5"))
    assert [rs.positions for rs in a.sets] == [rs.positions for rs in bc.simple_recovering_sets(paper_code, 5)]


def test_greedy_singleton(paper_code):
    a = bc.greedy_assign(paper_code, bc.parse_request("7"), allow_singleton=True)
    assert a.sets == (bc.RecoveringSet(7, (7,), bc.SINGLETON),)


def test_greedy_all_triples_agree_with_verify(paper_code):
    total = 0
    for ms in bc.multisets(27, 3):
        a = bc.greedy_assign(paper_code, bc.MultisetRequest.from_indices(ms))
        masks = [rs.mask for rs in a.sets]
        assert all(x & y == 0 for j, x in enumerate(masks) for y in masks[j + 1:])
        total += 1
    assert total == 3654 == math.comb(29, 3)
    assert bc.verify_batch(paper_code, 3, allow_singleton=False).holds is True


def test_greedy_failure_reports_group():
    with pytest.raises(AssignmentFailure) as exc:
        bc.greedy_assign(PARITY, bc.parse_request("0,0,0"), allow_singleton=True)
    assert (exc.value.group, exc.value.found, exc.value.needed) == (0, 2, 3)


def test_greedy_strict_paper_is_stricter():
    code = bc.imported(3, [(0, 1), (0, 2), (1, 2)])
    req = bc.parse_request("0,1")
    a = bc.greedy_assign(code, req)
    assert [rs.positions for rs in a.sets] == [(1, 3), (2, 5)]
    # strict mode skips parities touching the other requested symbol
    with pytest.raises(AssignmentFailure) as exc:
        bc.greedy_assign(code, req, strict_paper=True)
    assert exc.value.target == 1


def test_parse_request():
    assert bc.parse_request("5,5,9").items == ((5, 2), (9, 1))
    assert bc.parse_request(" 3 ").k == 1
    for bad in ["", "1,,2", "a", "-1"]:
        with pytest.raises(InvalidParams):
            bc.parse_request(bad)


def test_verify_k1_trivial():
    assert bc.verify_batch(EMPTY, 1).holds is True


def test_verify_no_parities_fails():
    v = bc.verify_batch(EMPTY, 2, mode="exhaustive-small")
    assert v.holds is False and v.witness == (0, 0)
    assert bc.verify_batch(EMPTY, 2).status == "inconclusive"


@pytest.mark.parametrize(
    "code,k,expected,witness",
    [(GRID3, 3, True, None), (HAM, 3, False, (0, 0, 0)), (PARITY, 3, False, (0, 0, 0)), (HAM, 2, True, None)],
)
def test_exhaustive_mode_matches_definition(code, k, expected, witness):
    v = bc.verify_batch(code, k, mode="exhaustive-small")
    assert v.holds is expected and v.witness == witness
    assert is_batch_by_definition(code.n, code.parities, k) == (expected, witness)


def test_verify_budgets(paper_code):
    with pytest.raises(BudgetExceeded):
        bc.verify_batch(paper_code, 3, budget=100)
    with pytest.raises(BudgetExceeded):
        bc.verify_batch(paper_code, 1, mode="exhaustive-small")


def test_multiset_order():
    assert list(bc.multisets(3, 2)) == [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]


def test_conflict_degree(paper_code):
    assert bc.conflict_degree(paper_code) == 1 == conflict_by_pairs(27, paper_code.parities)
    assert bc.conflict_degree(bc.imported(4, [(0, 1, 2)])) <= 1
    for code in [GRID3, HAM]:
        assert bc.conflict_degree(code) == conflict_by_pairs(code.n, code.parities)


def test_conflict_degree_bounded_by_niceness():
    for q, ell in [(4, 1), (5, 1)]:
        c = certify(construction1(field_new(q), ell))
        code = bc.build_explicit(c)
        d = bc.conflict_degree(code)
        assert d <= c.certified_L
        if q == 4:
            assert d == conflict_by_pairs(code.n, code.parities)


def test_default_parameters():
    assert bc.default_p2(3) == pytest.approx(0.20412, abs=1e-5)
    p1 = bc.default_p1(49 * 49, 3)
    assert p1 == pytest.approx(36 * 3**1.5 * math.log(2401) / 49)
    assert p1 > 1


def test_build_random_full_lines():
    with pytest.warns(UserWarning):
        code = bc.build_random(7, 1, seed=1, p1=1, p2=1, relax_k=True)
    assert code.parities == affine_plane(7).lines


def test_build_random_clamps_and_checks():
    with pytest.warns(UserWarning, match="clamped"):
        code = bc.build_random(25, 2, seed=4)
    assert float(code.meta["p1"]) == 1.0
    with pytest.raises(InvalidParams):
        bc.build_random(8, 1, seed=7)
    with pytest.raises(InvalidParams):
        bc.build_random(6, 1, seed=7, relax_k=True)
    with pytest.raises(InvalidParams):
        bc.build_random(25, 1, seed=7, p1=1.5)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**64 - 1), p1=st.floats(0.05, 1), p2=st.floats(0.05, 1))
def test_build_random_deterministic(seed, p1, p2):
    a = bc.build_random(13, 1, seed, p1, p2)
    b = bc.build_random(13, 1, seed, p1, p2)
    assert a == b
    lines = [set(line) for line in affine_plane(13).lines]
    # every support is a nonempty subset of its own line, lines in plane order
    pos = 0
    for s in a.parities:
        while not set(s) <= lines[pos]:
            pos += 1
        pos += 1


def test_text_round_trip(paper_code, tmp_path):
    path = tmp_path / "paper.code"
    bc.write_code(paper_code, path)
    text = path.read_text().splitlines()
    assert text[0] == "BATCHCODE v1 n=27 r=27"
    assert text[1].startswith("meta provenance=explicit")
    assert bc.read_code(path) == paper_code
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rnd = bc.build_random(11, 2, seed=9, p2=0.1, relax_k=True)
    assert bc.from_text(bc.to_text(rnd)) == rnd


def test_imported_codes_are_deduplicated():
    text = "BATCHCODE v1 n=3 r=3\nmeta provenance=imported\n0 1\n0 1\n2\n"
    code = bc.from_text(text)
    assert code.parities == ((0, 1), (2,))
    with pytest.raises(InvalidParams):
        bc.from_text("BATCHCODE v1 n=3 r=2\nmeta\n0 1\n")
    with pytest.raises(InvalidParams):
        bc.from_text("BATCHCODE v1 n=3 r=1\nmeta\n0 5\n")


def test_conflict_degree_single_member_collection():
    # one member: L* = 0, yet two symbols on one coset share its parity
    for q, ell in [(3, 1), (5, 1), (4, 2)]:
        c = certify(construction1(field_new(q), ell, m=1))
        code = bc.build_explicit(c)
        assert c.certified_L == 0
        assert bc.conflict_degree(code) == 1
        if code.n <= 125:
            assert conflict_by_pairs(code.n, code.parities) == 1


@pytest.mark.parametrize(
    "q,ell,zero",
    [(3, 1, True), (4, 1, False), (4, 2, False), pytest.param(5, 2, False, marks=pytest.mark.slow)],
)
def test_availability_floor(q, ell, zero):
    # (5,1) and larger l=1 fields need C(n+k-1, k) beyond the default budget at k = m/L
    c = certify(construction1(field_new(q), ell, include_zero_block=zero))
    code = bc.build_explicit(c)
    k = int(code.meta["k"])
    assert k == (c.m // c.certified_L if c.certified_L else c.m)
    assert bc.verify_batch(code, k, allow_singleton=False).holds is True
