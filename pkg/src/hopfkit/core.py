"""Words, exact sparse noncommutative polynomials, and the shared expression grammar.

Scalars are ``fractions.Fraction`` throughout: every coefficient is an exact
rational in lowest terms and no operation ever rounds.  Words are tuples of
generator indices into an :class:`Alphabet`; the empty tuple is the unit word.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Word = tuple[int, ...]
Pair = tuple[Word, Word]
Scalar = Union[int, Fraction]

EMPTY_WORD: Word = ()

ONE = Fraction(1)
ZERO = Fraction(0)


class ParseError(ValueError):
    """Syntax error in the expression grammar, with a character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Alphabet:
    """Ordered generator list; list order is the precedence used everywhere.

    Each generator carries a positive integer weight.  Words are compared by
    total weight first, then left-to-right by precedence index, which is a
    multiplicative total order because weights are >= 1 (no word of a given
    weight is a proper prefix of another word of the same weight).
    """

    generators: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        for name, weight in self.generators:
            if not name.isidentifier():
                raise ValueError(f"generator name {name!r} is not an identifier")
            if weight < 1:
                raise ValueError(f"generator {name} has weight {weight}; weights must be >= 1")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.generators)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(weight for _, weight in self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        for i, (gen_name, _) in enumerate(self.generators):
            if gen_name == name:
                return i
        raise KeyError(f"unknown generator {name!r}; alphabet is {self.names}")

    def weight(self, word: Word) -> int:
        weights = self.weights
        return sum(weights[i] for i in word)

    def sort_key(self, word: Word) -> tuple[int, Word]:
        """Weight-graded lexicographic key; smaller key = smaller word."""
        return (self.weight(word), word)

    def word(self, *names: str) -> Word:
        return tuple(self.index(name) for name in names)

    def format_word(self, word: Word) -> str:
        if not word:
            return "1"
        parts: list[str] = []
        i = 0
        while i < len(word):
            j = i
            while j < len(word) and word[j] == word[i]:
                j += 1
            name = self.generators[word[i]][0]
            parts.append(name if j - i == 1 else f"{name}^{j - i}")
            i = j
        return "*".join(parts)


def _normalized(terms: Iterable[tuple]) -> dict:
    out: dict = {}
    for key, coeff in terms:
        coeff = Fraction(coeff)
        if coeff:
            acc = out.get(key, ZERO) + coeff
            if acc:
                out[key] = acc
            else:
                del out[key]
    return out


class NCPoly:
    """Sparse rational linear combination of words in the free algebra.

    Immutable; zero coefficients are never stored, so ``==`` is term-map
    equality.  Multiplication is the bilinear extension of word concatenation
    (free multiplication, no reduction).
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, Scalar] | Iterable[tuple[Word, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        object.__setattr__(self, "_terms", _normalized(items))

    @classmethod
    def zero(cls) -> NCPoly:
        return cls()

    @classmethod
    def unit(cls, coeff: Scalar = 1) -> NCPoly:
        return cls({EMPTY_WORD: Fraction(coeff)})

    @classmethod
    def from_word(cls, word: Word, coeff: Scalar = 1) -> NCPoly:
        return cls({word: Fraction(coeff)})

    @classmethod
    def generator(cls, index: int) -> NCPoly:
        return cls({(index,): ONE})

    def items(self) -> Iterator[tuple[Word, Fraction]]:
        return iter(self._terms.items())

    def words(self) -> Iterator[Word]:
        return iter(self._terms)

    def coefficient(self, word: Word) -> Fraction:
        return self._terms.get(word, ZERO)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: NCPoly) -> NCPoly:
        out = dict(self._terms)
        for word, coeff in other._terms.items():
            acc = out.get(word, ZERO) + coeff
            if acc:
                out[word] = acc
            else:
                out.pop(word, None)
        result = NCPoly.__new__(NCPoly)
        object.__setattr__(result, "_terms", out)
        return result

    def __neg__(self) -> NCPoly:
        result = NCPoly.__new__(NCPoly)
        object.__setattr__(result, "_terms", {w: -c for w, c in self._terms.items()})
        return result

    def __sub__(self, other: NCPoly) -> NCPoly:
        return self + (-other)

    def scale(self, coeff: Scalar) -> NCPoly:
        coeff = Fraction(coeff)
        if not coeff:
            return NCPoly.zero()
        result = NCPoly.__new__(NCPoly)
        object.__setattr__(result, "_terms", {w: c * coeff for w, c in self._terms.items()})
        return result

    def __mul__(self, other: NCPoly | Scalar) -> NCPoly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out: dict[Word, Fraction] = {}
        for u, a in self._terms.items():
            for v, b in other._terms.items():
                word = u + v
                acc = out.get(word, ZERO) + a * b
                if acc:
                    out[word] = acc
                else:
                    del out[word]
        result = NCPoly.__new__(NCPoly)
        object.__setattr__(result, "_terms", out)
        return result

    def __rmul__(self, other: Scalar) -> NCPoly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> NCPoly:
        if n < 0:
            raise ValueError("negative powers are not defined in the free algebra")
        result = NCPoly.unit()
        for _ in range(n):
            result = result * self
        return result

    def __repr__(self) -> str:
        return f"NCPoly({self._terms!r})"


class TensorPoly:
    """Sparse rational linear combination of word pairs (an element of H (x) H)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Pair, Scalar] | Iterable[tuple[Pair, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        object.__setattr__(self, "_terms", _normalized(items))

    @classmethod
    def zero(cls) -> TensorPoly:
        return cls()

    @classmethod
    def unit(cls, coeff: Scalar = 1) -> TensorPoly:
        return cls({(EMPTY_WORD, EMPTY_WORD): Fraction(coeff)})

    def items(self) -> Iterator[tuple[Pair, Fraction]]:
        return iter(self._terms.items())

    def pairs(self) -> Iterator[Pair]:
        return iter(self._terms)

    def coefficient(self, pair: Pair) -> Fraction:
        return self._terms.get(pair, ZERO)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: TensorPoly) -> TensorPoly:
        out = dict(self._terms)
        for pair, coeff in other._terms.items():
            acc = out.get(pair, ZERO) + coeff
            if acc:
                out[pair] = acc
            else:
                out.pop(pair, None)
        result = TensorPoly.__new__(TensorPoly)
        object.__setattr__(result, "_terms", out)
        return result

    def __neg__(self) -> TensorPoly:
        result = TensorPoly.__new__(TensorPoly)
        object.__setattr__(result, "_terms", {p: -c for p, c in self._terms.items()})
        return result

    def __sub__(self, other: TensorPoly) -> TensorPoly:
        return self + (-other)

    def scale(self, coeff: Scalar) -> TensorPoly:
        coeff = Fraction(coeff)
        if not coeff:
            return TensorPoly.zero()
        result = TensorPoly.__new__(TensorPoly)
        object.__setattr__(result, "_terms", {p: c * coeff for p, c in self._terms.items()})
        return result

    def __mul__(self, other: TensorPoly | Scalar) -> TensorPoly:
        """Componentwise product: (a (x) b)(c (x) d) = ac (x) bd."""
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out: dict[Pair, Fraction] = {}
        for (u1, v1), a in self._terms.items():
            for (u2, v2), b in other._terms.items():
                pair = (u1 + u2, v1 + v2)
                acc = out.get(pair, ZERO) + a * b
                if acc:
                    out[pair] = acc
                else:
                    del out[pair]
        result = TensorPoly.__new__(TensorPoly)
        object.__setattr__(result, "_terms", out)
        return result

    def __rmul__(self, other: Scalar) -> TensorPoly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"TensorPoly({self._terms!r})"


def tensor(left: NCPoly, right: NCPoly) -> TensorPoly:
    """Outer product p (x) q as a TensorPoly."""
    out: dict[Pair, Fraction] = {}
    for u, a in left.items():
        for v, b in right.items():
            out[(u, v)] = a * b
    return TensorPoly(out)


def combine(pairs: Iterable[tuple[Scalar, NCPoly]]) -> NCPoly:
    """Exact linear combination sum(c_i * p_i) with zero terms dropped."""
    acc = NCPoly.zero()
    for coeff, poly in pairs:
        acc = acc + poly.scale(coeff)
    return acc


def multiply(left: NCPoly, right: NCPoly) -> NCPoly:
    """Free multiplication (bilinear extension of concatenation); no reduction."""
    return left * right


# ---------------------------------------------------------------------------
# Expression grammar
#
#   element := ['+'|'-'] term (('+'|'-') term)*
#   term    := rational | [rational ['*']] factor ('*' factor)*
#   factor  := generator-name | '1' | '(' element ')' | factor '^' positive-int
#   rational:= int ['/' positive-int]
#
# Tensor expressions are sums of term '@' term products, e.g. "1@Z + X@Y + Z@1".
# Whitespace is insignificant.
# ---------------------------------------------------------------------------


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str | None:
        self._skip_ws()
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def take_char(self, char: str) -> bool:
        if self.peek() == char:
            self.pos += 1
            return True
        return False

    def expect_char(self, char: str) -> None:
        if not self.take_char(char):
            raise ParseError(f"expected {char!r}", self.pos)

    def take_int(self) -> int:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected an integer", start)
        return int(self.text[start : self.pos])

    def take_name(self) -> str:
        self._skip_ws()
        start = self.pos
        if self.pos < len(self.text) and (self.text[self.pos].isalpha() or self.text[self.pos] == "_"):
            self.pos += 1
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
        if self.pos == start:
            raise ParseError("expected a generator name", start)
        return self.text[start : self.pos]

    def at_end(self) -> bool:
        return self.peek() is None


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.tok = _Tokenizer(text)
        self.alphabet = alphabet

    # -- element grammar --

    def parse_element(self) -> NCPoly:
        result = self._parse_sum()
        if not self.tok.at_end():
            raise ParseError("unexpected trailing input", self.tok.pos)
        return result

    def _parse_sum(self) -> NCPoly:
        sign = -1 if self.tok.take_char("-") else 1
        if sign == 1:
            self.tok.take_char("+")
        acc = self._parse_term().scale(sign)
        while True:
            if self.tok.take_char("+"):
                acc = acc + self._parse_term()
            elif self.tok.take_char("-"):
                acc = acc - self._parse_term()
            else:
                return acc

    def _parse_term(self) -> NCPoly:
        coeff = ONE
        have_coeff = False
        char = self.tok.peek()
        if char is not None and char.isdigit():
            # Could be a rational coefficient or the bare factor "1".
            start = self.tok.pos
            value = self.tok.take_int()
            if self.tok.take_char("/"):
                den_pos = self.tok.pos
                den = self.tok.take_int()
                if den == 0:
                    raise ParseError("zero denominator", den_pos)
                coeff = Fraction(value, den)
                have_coeff = True
            elif value == 1 and self.tok.peek() != "*":
                # a bare "1" (possibly powered) is the unit factor, handled below
                self.tok.pos = start
            else:
                coeff = Fraction(value)
                have_coeff = True
            if have_coeff:
                self.tok.take_char("*")
                if not self._at_factor_start():
                    return NCPoly.unit(coeff)
        acc = self._parse_factor()
        while self.tok.take_char("*"):
            acc = acc * self._parse_factor()
        return acc.scale(coeff)

    def _at_factor_start(self) -> bool:
        char = self.tok.peek()
        return char is not None and (char.isalpha() or char == "_" or char == "(" or char == "1")

    def _parse_factor(self) -> NCPoly:
        char = self.tok.peek()
        if char is None:
            raise ParseError("expected a factor", self.tok.pos)
        if char == "(":
            self.tok.expect_char("(")
            inner = self._parse_sum()
            self.tok.expect_char(")")
            base = inner
        elif char == "1":
            self.tok.pos += 1
            base = NCPoly.unit()
        elif char.isalpha() or char == "_":
            pos = self.tok.pos
            name = self.tok.take_name()
            try:
                index = self.alphabet.index(name)
            except KeyError as exc:
                raise ParseError(str(exc.args[0]), pos) from None
            base = NCPoly.generator(index)
        else:
            raise ParseError(f"unexpected character {char!r}", self.tok.pos)
        while self.tok.take_char("^"):
            exp_pos = self.tok.pos
            exponent = self.tok.take_int()
            if exponent < 1:
                raise ParseError("exponent must be positive", exp_pos)
            base = base**exponent
        return base

    # -- tensor grammar --

    def parse_tensor(self) -> TensorPoly:
        acc = TensorPoly.zero()
        sign = -1 if self.tok.take_char("-") else 1
        if sign == 1:
            self.tok.take_char("+")
        acc = acc + self._parse_tensor_term().scale(sign)
        while True:
            if self.tok.take_char("+"):
                acc = acc + self._parse_tensor_term()
            elif self.tok.take_char("-"):
                acc = acc - self._parse_tensor_term()
            else:
                break
        if not self.tok.at_end():
            raise ParseError("unexpected trailing input", self.tok.pos)
        return acc

    def _parse_tensor_term(self) -> TensorPoly:
        at_pos = self.tok.pos
        left = self._parse_term()
        if not self.tok.take_char("@"):
            if left.is_zero:
                return TensorPoly.zero()
            raise ParseError("tensor term must contain '@'", at_pos)
        right = self._parse_term()
        return tensor(left, right)


def parse_element(text: str, alphabet: Alphabet) -> NCPoly:
    """Parse an element expression such as "Z*X - X*Z + Z - 3/2*Y"."""
    return _Parser(text, alphabet).parse_element()


def parse_tensor(text: str, alphabet: Alphabet) -> TensorPoly:
    """Parse a tensor expression such as "1@Z + X@Y + Z@1" ('@' separates legs)."""
    return _Parser(text, alphabet).parse_tensor()


def format_scalar(coeff: Fraction) -> str:
    return str(coeff)


def _format_terms(entries: list[tuple[str, Fraction]]) -> str:
    # entries are (monomial text, coefficient) already in display order
    chunks: list[str] = []
    for text, coeff in entries:
        negative = coeff < 0
        mag = -coeff if negative else coeff
        if text == "1":
            body = format_scalar(mag)
        elif mag == 1:
            body = text
        else:
            body = f"{format_scalar(mag)}*{text}"
        if not chunks:
            chunks.append(f"-{body}" if negative else body)
        else:
            chunks.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(chunks) if chunks else "0"


def format_element(poly: NCPoly, alphabet: Alphabet) -> str:
    """Canonical text form; leading (largest) word first.  parse o format = id."""
    words = sorted(poly.words(), key=alphabet.sort_key, reverse=True)
    return _format_terms([(alphabet.format_word(w), poly.coefficient(w)) for w in words])


def format_tensor(poly: TensorPoly, alphabet: Alphabet) -> str:
    def pair_key(pair: Pair):
        return (alphabet.sort_key(pair[0]), alphabet.sort_key(pair[1]))

    pairs = sorted(poly.pairs(), key=pair_key, reverse=True)
    entries = []
    for u, v in pairs:
        text = f"{alphabet.format_word(u)}@{alphabet.format_word(v)}"
        entries.append((text, poly.coefficient((u, v))))
    return _format_terms(entries)
