import random
from fractions import Fraction

import pytest

from hopfkit.core import (
    Alphabet,
    NCPoly,
    ParseError,
    TensorPoly,
    combine,
    format_element,
    format_tensor,
    multiply,
    parse_element,
    parse_tensor,
    tensor,
)

XYZ = Alphabet((("X", 1), ("Y", 1), ("Z", 2)))
X, Y, Z = (NCPoly.generator(i) for i in range(3))


def test_alphabet_validation():
    with pytest.raises(ValueError):
        Alphabet((("X", 1), ("X", 2)))
    with pytest.raises(ValueError):
        Alphabet((("X", 0),))
    with pytest.raises(ValueError):
        Alphabet((("not a name", 1),))


def test_alphabet_weights_and_keys():
    assert XYZ.weight(XYZ.word("X", "Y", "Z")) == 4
    assert XYZ.weight(()) == 0
    # weight-graded lex: XX < Z despite Z being a single letter
    assert XYZ.sort_key(XYZ.word("X", "X")) < XYZ.sort_key(XYZ.word("Z"))
    assert XYZ.sort_key(XYZ.word("X")) < XYZ.sort_key(XYZ.word("Y"))


def test_combine_cancellation():
    assert combine([(1, X), (-1, X)]) == NCPoly.zero()
    assert combine([(2, X + Y), (3, Y)]) == combine([(2, X), (5, Y)])
    assert combine([(Fraction(1, 2), (X * Y).scale(2))]) == X * Y


def test_multiply_examples():
    assert multiply(X + Y, Z) == X * Z + Y * Z
    p = combine([(3, X * Y), (-2, Z)])
    assert multiply(NCPoly.unit(), p) == p
    assert multiply(p, NCPoly.unit()) == p
    assert X * Y != Y * X


def test_word_degrees_additive_under_concatenation():
    rng = random.Random(7)
    for _ in range(50):
        u = tuple(rng.randrange(3) for _ in range(rng.randrange(5)))
        v = tuple(rng.randrange(3) for _ in range(rng.randrange(5)))
        assert XYZ.weight(u + v) == XYZ.weight(u) + XYZ.weight(v)
        assert len(u + v) == len(u) + len(v)


def _random_poly(rng: random.Random, max_terms: int = 4, max_len: int = 3) -> NCPoly:
    terms = {}
    for _ in range(rng.randrange(max_terms + 1)):
        word = tuple(rng.randrange(3) for _ in range(rng.randrange(max_len + 1)))
        terms[word] = Fraction(rng.randrange(-4, 5), rng.randrange(1, 4))
    return NCPoly(terms)


def test_free_algebra_ring_axioms():
    rng = random.Random(2024)
    for _ in range(100):
        p, q, r = (_random_poly(rng) for _ in range(3))
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert (p + q) * r == p * r + q * r


def test_parse_element_examples():
    p = parse_element("Z*X - X*Z + Z - 3/2*Y", XYZ)
    assert p == Z * X - X * Z + Z - Y.scale(Fraction(3, 2))
    assert parse_element("1", XYZ) == NCPoly.unit()
    assert parse_element("X*(Y - Z)", XYZ) == X * Y - X * Z
    assert parse_element("0", XYZ) == NCPoly.zero()
    assert parse_element("2X", XYZ) == X.scale(2)
    assert parse_element("1*X", XYZ) == X
    assert parse_element("X^3", XYZ) == X * X * X
    assert parse_element("(X + Y)^2", XYZ) == (X + Y) * (X + Y)
    assert parse_element("-X + 2", XYZ) == NCPoly.unit(2) - X
    assert parse_element("7/2", XYZ) == NCPoly.unit(Fraction(7, 2))


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse_element("X + W", XYZ)
    assert err.value.position == 4
    with pytest.raises(ParseError):
        parse_element("X *", XYZ)
    with pytest.raises(ParseError):
        parse_element("X + + Y", XYZ)
    with pytest.raises(ParseError):
        parse_element("1/0", XYZ)


def test_parse_tensor_examples():
    t = parse_tensor("1@Z + X@Y + Z@1", XYZ)
    expected = tensor(NCPoly.unit(), Z) + tensor(X, Y) + tensor(Z, NCPoly.unit())
    assert t == expected
    assert parse_tensor("X@1 + 1@X", XYZ) == tensor(X, NCPoly.unit()) + tensor(NCPoly.unit(), X)
    assert parse_tensor("0", XYZ) == TensorPoly.zero()
    assert parse_tensor("(X + Y)@Z", XYZ) == tensor(X + Y, Z)
    assert parse_tensor("-X@Y + 2*Y@X", XYZ) == tensor(Y, X).scale(2) - tensor(X, Y)
    with pytest.raises(ParseError):
        parse_tensor("X + Y", XYZ)


def test_tensor_componentwise_product():
    dx = tensor(NCPoly.unit(), X) + tensor(X, NCPoly.unit())
    dy = tensor(NCPoly.unit(), Y) + tensor(Y, NCPoly.unit())
    prod = dx * dy
    assert prod == (
        tensor(NCPoly.unit(), X * Y)
        + tensor(Y, X)
        + tensor(X, Y)
        + tensor(X * Y, NCPoly.unit())
    )


def test_format_parse_roundtrip():
    samples = [
        Z * X - X * Z + Z - Y.scale(Fraction(3, 2)),
        NCPoly.zero(),
        NCPoly.unit(),
        NCPoly.unit(Fraction(-5, 3)),
        X * X * Y - X,
    ]
    for p in samples:
        assert parse_element(format_element(p, XYZ), XYZ) == p
    rng = random.Random(11)
    for _ in range(200):
        p = _random_poly(rng)
        assert parse_element(format_element(p, XYZ), XYZ) == p


def test_format_element_leading_term_first():
    p = Z * X - X * Z + Z - Y.scale(Fraction(3, 2))
    assert format_element(p, XYZ) == "Z*X - X*Z + Z - 3/2*Y"
    assert format_element(X * X * Y, XYZ) == "X^2*Y"
    assert format_element(NCPoly.zero(), XYZ) == "0"


def test_format_tensor_roundtrip():
    rng = random.Random(13)
    for _ in range(100):
        t = tensor(_random_poly(rng), _random_poly(rng))
        assert parse_tensor(format_tensor(t, XYZ), XYZ) == t
