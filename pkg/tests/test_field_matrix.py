import random

import pytest

from src.errors import FieldError
from src.fields.field_matrix import (
    FieldMatrix,
    grs_generator,
    parse_matrix,
    power_matrix,
    prime_field,
    serialize_matrix,
    smallest_prime_at_least,
    vandermonde,
)


def test_non_prime_modulus_rejected():
    with pytest.raises(FieldError):
        prime_field(9)
    with pytest.raises(FieldError):
        FieldMatrix(4, [[1]])


def test_entries_reduced_mod_p():
    m = FieldMatrix(5, [[7, -1], [10, 3]])
    assert m.to_lists() == [[2, 4], [0, 3]]


def test_arithmetic():
    a = FieldMatrix(7, [[1, 2], [3, 4]])
    b = FieldMatrix(7, [[6, 5], [4, 3]])
    assert (a + b).to_lists() == [[0, 0], [0, 0]]
    assert (a - b) == a + a
    assert (a @ FieldMatrix.identity(7, 2)) == a
    assert (-a).to_lists() == [[6, 5], [4, 3]]


def test_different_fields_do_not_mix():
    with pytest.raises(FieldError):
        FieldMatrix(5, [[1]]) + FieldMatrix(7, [[1]])


def test_rank_and_rref():
    m = FieldMatrix(3, [[1, 2, 0], [2, 1, 0], [0, 0, 1]])
    # row 2 = 2 * row 1 over GF(3)
    assert m.rank() == 2
    assert m.rref().to_lists() == [[1, 2, 0], [0, 0, 1], [0, 0, 0]]
    assert FieldMatrix.zeros(3, 0, 4).rank() == 0


def test_solve():
    a = FieldMatrix(11, [[1, 1], [1, 2]])
    b = FieldMatrix(11, [[3, 1], [5, 0]])
    x = a.solve(b)
    assert a @ x == b
    singular = FieldMatrix(11, [[1, 1], [1, 1]])
    assert singular.solve(FieldMatrix.column(11, [1, 2])) is None


def test_in_span():
    m = FieldMatrix(5, [[1, 0], [0, 1], [1, 1]])
    assert m.in_span(FieldMatrix.column(5, [2, 3, 0]))
    assert not m.in_span(FieldMatrix.column(5, [1, 1, 0]))


def test_vandermonde_is_mds():
    g = vandermonde(5, 3, [1, 2, 3, 4, 5], 7)
    assert g.shape == (3, 5)
    assert g.to_lists()[0] == [1, 1, 1, 1, 1]
    assert g.is_mds()


@pytest.mark.parametrize(
    "n, k, alphas, p",
    [
        (3, 2, [1, 1, 2], 7),  # repeated point
        (3, 4, [1, 2, 3], 7),  # k > n
        (4, 2, [0, 1, 2, 3], 3),  # n > p
    ],
)
def test_vandermonde_errors(n, k, alphas, p):
    with pytest.raises(FieldError):
        vandermonde(n, k, alphas, p)


@pytest.mark.parametrize("n, k, p", [(4, 2, 5), (6, 3, 5), (8, 4, 7), (5, 1, 11)])
def test_grs_generator_is_mds(n, k, p):
    g = grs_generator(n, k, p, random.Random(n * k))
    assert g.shape == (k, n)
    assert g.is_mds()


def test_grs_generator_too_long():
    with pytest.raises(FieldError):
        grs_generator(7, 2, 5, random.Random(0))


def test_power_matrix_columns_independent():
    phi = power_matrix(4, [1, 2, 3], 13)
    assert phi.rank() == 3


def test_smallest_prime_at_least():
    assert smallest_prime_at_least(17) == 17
    assert smallest_prime_at_least(18) == 19
    assert smallest_prime_at_least(0) == 2


def test_text_form():
    m = FieldMatrix(13, [[1, 12], [0, 5]])
    text = serialize_matrix(m)
    assert text.startswith("p 13\nshape 2 2\n")
    assert parse_matrix(text) == m
    with pytest.raises(FieldError):
        parse_matrix("p 13\nshape 2 2\n1 2\n")
