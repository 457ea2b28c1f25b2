from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ttpk.errors import DomainError, MetricError, ParseError
from ttpk.instance import DistanceMatrix, generate, load, save, stats


def test_unit_four_delta():
    m = load("4\n0 1 1 1\n1 0 1 1\n1 1 0 1\n1 1 1 0\n")
    assert m.n == 4
    assert stats(m).delta == 12


def test_symmetry_error_names_pair():
    rows = [[0, 5, 1, 1], [4, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]]
    with pytest.raises(MetricError) as exc:
        DistanceMatrix.from_values(rows)
    assert exc.value.witness == (1, 2)


def test_triangle_error_names_triple():
    rows = [[0, 1, 10, 10], [1, 0, 1, 10], [10, 1, 0, 10], [10, 10, 10, 0]]
    with pytest.raises(MetricError) as exc:
        DistanceMatrix.from_values(rows)
    assert exc.value.witness == (1, 2, 3)


@pytest.mark.parametrize("rows, witness", [
    ([[0, -1, 1, 1], [-1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]], (1, 2)),
    ([[0, 1, 1, 1], [1, 2, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]], (2, 2)),
])
def test_other_metric_errors(rows, witness):
    with pytest.raises(MetricError) as exc:
        DistanceMatrix.from_values(rows)
    assert exc.value.witness == witness


@pytest.mark.parametrize("n", [3, 5, 2])
def test_bad_team_count(n):
    with pytest.raises(DomainError):
        generate("unit", n)
    with pytest.raises(DomainError):
        DistanceMatrix(np.zeros((n, n), dtype=np.int64))


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        load("# comment\n4\n0 1 1 1\n1 0 x 1\n1 1 0 1\n1 1 1 0\n")
    assert (exc.value.line, exc.value.column) == (4, 5)


def test_parse_truncated_and_trailing():
    with pytest.raises(ParseError):
        load("4\n0 1 1 1\n1 0 1 1\n")
    with pytest.raises(ParseError):
        load("4\n" + "0 0 0 0\n" * 4 + "7\n")
    with pytest.raises(ParseError):
        load("")


def test_tsplib_full_matrix():
    text = ("NAME: four\nTYPE: TSP\nDIMENSION: 4\nEDGE_WEIGHT_TYPE: EXPLICIT\n"
            "EDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n"
            "0 1 2 3\n1 0 1 2\n2 1 0 1\n3 2 1 0\nEOF\n")
    m = load(text, format="tsplib-full-matrix")
    assert stats(m).s == (6, 4, 4, 6)


@pytest.mark.parametrize("header", [
    "EDGE_WEIGHT_TYPE: EUC_2D\nEDGE_WEIGHT_FORMAT: FULL_MATRIX",
    "EDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: UPPER_ROW",
])
def test_tsplib_rejects_other_types(header):
    text = f"DIMENSION: 4\n{header}\nEDGE_WEIGHT_SECTION\n" + "0 0 0 0\n" * 4 + "EOF\n"
    with pytest.raises(DomainError):
        load(text, format="tsplib-full-matrix")


def test_unknown_format():
    with pytest.raises(DomainError):
        load("4\n" + "0 0 0 0\n" * 4, format="csv")


def test_load_from_path_and_bytes(tmp_path: Path, four):
    p = tmp_path / "four.txt"
    p.write_text(save(four))
    assert load(p) == four
    assert load(save(four).encode()) == four


def test_rational_entries_stay_exact():
    half = Fraction(1, 2)
    rows = [[0, half, 1, half], [half, 0, half, 1], [1, half, 0, half], [half, 1, half, 0]]
    m = DistanceMatrix.from_values(rows)
    assert m.scale == 2
    assert m.d(0, 1) == half
    assert stats(m).delta == 8
    assert load(save(m)) == m
    assert load("4\n0 0.5 1 0.5\n0.5 0 0.5 1\n1 0.5 0 0.5\n0.5 1 0.5 0\n") == m


def test_unit_twenty_sums():
    st_ = stats(generate("unit", 20))
    assert st_.s == (19,) * 20
    assert st_.delta == 380


def test_four_team_sums(four):
    st_ = stats(four)
    assert st_.s == (6, 4, 4, 6)
    assert st_.delta == 20


def test_all_zero_metric_allowed():
    assert stats(DistanceMatrix(np.zeros((6, 6), dtype=np.int64))).delta == 0


def test_circle_is_arc_steps():
    m = generate("circle", 8)
    assert m.d(0, 4) == 4 and m.d(0, 7) == 1 and m.d(2, 7) == 3


def test_generate_deterministic():
    assert generate("euclidean-random", 8, seed=7) == generate("euclidean-random", 8, seed=7)
    assert generate("euclidean-random", 8, seed=7) != generate("euclidean-random", 8, seed=8)
    assert generate("euclidean", 8, seed=7) == generate("euclidean-random", 8, seed=7)


def test_unknown_kind():
    with pytest.raises(DomainError):
        generate("grid", 6)


@settings(max_examples=40, deadline=None)
@given(kind=st.sampled_from(["unit", "circle", "euclidean-random"]),
       n=st.integers(2, 12).map(lambda x: 2 * x), seed=st.integers(0, 10_000))
def test_generated_sums_and_roundtrip(kind, n, seed):
    m = generate(kind, n, seed)
    st_ = stats(m)
    assert st_.delta == sum(st_.s)
    assert st_.delta == 2 * sum(m.d(i, j) for i in range(n) for j in range(i + 1, n))
    assert load(save(m)) == m


@settings(max_examples=25, deadline=None)
@given(n=st.integers(2, 6).map(lambda x: 2 * x), seed=st.integers(0, 1000),
       data=st.data())
def test_permuted_matrix_is_same_metric(n, seed, data):
    m = generate("euclidean-random", n, seed)
    perm = data.draw(st.permutations(range(n)))
    p = m.permuted(perm)
    assert stats(p).delta == stats(m).delta
    assert sorted(stats(p).s) == sorted(stats(m).s)
