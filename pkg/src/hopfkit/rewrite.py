"""Oriented rewriting for finitely presented algebras.

A :class:`Presentation` is an alphabet plus rewrite rules ``lhs -> rhs`` where
``lhs`` is a word strictly larger (weight-graded lex) than every word of
``rhs``.  That ordering makes reduction terminate; the Diamond Lemma then
reduces confluence to resolving overlap and inclusion ambiguities, which
:func:`check_confluence` does mechanically.  Normal-word enumeration and
growth analysis run on the factor-avoidance automaton of the rule lhs set.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Literal, Sequence

from .core import EMPTY_WORD, Alphabet, NCPoly, ParseError, Word, parse_element


class Growth(Enum):
    EXPONENTIAL = "EXPONENTIAL"
    INCONCLUSIVE = "INCONCLUSIVE"

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return self.value

    def __str__(self) -> str:
        return self.value


EXPONENTIAL = Growth.EXPONENTIAL
INCONCLUSIVE = Growth.INCONCLUSIVE

Grading = Literal["length", "weight"]


class NotConfluentError(RuntimeError):
    """Raised when an operation that needs unique normal forms gets a
    presentation with unresolved overlaps."""

    def __init__(self, overlaps: Sequence["Overlap"], message: str | None = None):
        self.overlaps = tuple(overlaps)
        if message is None:
            words = ", ".join(repr(o.word) for o in self.overlaps[:4])
            message = (
                f"presentation is not confluent: {len(self.overlaps)} unresolved "
                f"overlap(s), e.g. at {words}"
            )
        super().__init__(message)


@dataclass(frozen=True)
class RewriteRule:
    """One oriented rule lhs -> rhs; lhs strictly dominates rhs in the order."""

    lhs: Word
    rhs: NCPoly


@dataclass(frozen=True)
class Overlap:
    """An ambiguity whose two one-step resolutions were reduced and compared.

    ``word`` factors as a*b*c with ``left_rule`` matching a*b and
    ``right_rule`` matching b*c (for inclusions, right_rule matches inside
    left_rule's lhs).  ``left_result`` reduces the word after applying
    ``left_rule`` first, ``right_result`` after applying ``right_rule`` first;
    ``defect = right_result - left_result``.
    """

    left_rule: RewriteRule
    right_rule: RewriteRule
    word: Word
    left_result: NCPoly
    right_result: NCPoly

    @property
    def defect(self) -> NCPoly:
        return self.right_result - self.left_result

    @property
    def resolved(self) -> bool:
        return self.left_result == self.right_result


class Presentation:
    """An alphabet with oriented rewrite rules; immutable once constructed.

    Reduction results, confluence verdicts and the normal-word automaton are
    cached internally; the caches never change observable behaviour.
    """

    def __init__(self, alphabet: Alphabet, rules: Iterable[RewriteRule]):
        self.alphabet = alphabet
        self.rules = tuple(rules)
        seen: set[Word] = set()
        for rule in self.rules:
            if not rule.lhs:
                raise ValueError("rule lhs must be a nonempty word")
            if any(i < 0 or i >= len(alphabet) for i in rule.lhs):
                raise ValueError(f"rule lhs {rule.lhs} uses letters outside the alphabet")
            if rule.lhs in seen:
                raise ValueError(f"two rules share the lhs {alphabet.format_word(rule.lhs)}")
            seen.add(rule.lhs)
            if len(rule.lhs) < 2 and not rule.rhs.is_zero:
                raise ValueError(
                    f"rule lhs {alphabet.format_word(rule.lhs)} has length < 2 with nonzero rhs"
                )
            lhs_key = alphabet.sort_key(rule.lhs)
            for word in rule.rhs.words():
                if alphabet.sort_key(word) >= lhs_key:
                    raise ValueError(
                        f"rhs word {alphabet.format_word(word)} does not drop below "
                        f"lhs {alphabet.format_word(rule.lhs)} in the monomial order"
                    )
        self._nf_cache: dict[Word, NCPoly] = {}
        self._overlap_cache: dict[int, tuple[Overlap, ...]] = {}
        self._dfa: NormalWordDFA | None = None

    @classmethod
    def from_relations(
        cls, alphabet: Alphabet, relations: Iterable[str | tuple[str, str]]
    ) -> Presentation:
        """Build from strings "monomial = element" (or (lhs, rhs) text pairs)."""
        rules = []
        for relation in relations:
            if isinstance(relation, str):
                if "=" not in relation:
                    raise ValueError(f"relation {relation!r} has no '='")
                lhs_text, rhs_text = relation.split("=", 1)
            else:
                lhs_text, rhs_text = relation
            lhs_poly = parse_element(lhs_text, alphabet)
            terms = list(lhs_poly.items())
            if len(terms) != 1 or terms[0][1] != 1 or not terms[0][0]:
                raise ValueError(f"rule lhs {lhs_text.strip()!r} must be a single plain monomial")
            rules.append(RewriteRule(terms[0][0], parse_element(rhs_text, alphabet)))
        return cls(alphabet, rules)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Presentation):
            return NotImplemented
        return self.alphabet == other.alphabet and self.rules == other.rules

    def __repr__(self) -> str:
        return f"Presentation(alphabet={self.alphabet.names}, rules={len(self.rules)})"

    # -- reduction ---------------------------------------------------------

    def _find_match(self, word: Word) -> tuple[int, RewriteRule] | None:
        for start in range(len(word)):
            for rule in self.rules:
                end = start + len(rule.lhs)
                if end <= len(word) and word[start:end] == rule.lhs:
                    return start, rule
        return None

    def reduce_word(self, word: Word) -> NCPoly:
        cached = self._nf_cache.get(word)
        if cached is not None:
            return cached
        match = self._find_match(word)
        if match is None:
            result = NCPoly.from_word(word)
        else:
            start, rule = match
            prefix, suffix = word[:start], word[start + len(rule.lhs) :]
            acc = NCPoly.zero()
            for w, coeff in rule.rhs.items():
                acc = acc + self.reduce_word(prefix + w + suffix).scale(coeff)
            result = acc
        self._nf_cache[word] = result
        return result

    def reduce(self, poly: NCPoly) -> NCPoly:
        acc = NCPoly.zero()
        for word, coeff in poly.items():
            acc = acc + self.reduce_word(word).scale(coeff)
        return acc

    def is_normal(self, word: Word) -> bool:
        return self._find_match(word) is None

    # -- confluence --------------------------------------------------------

    @property
    def max_rule_weight(self) -> int:
        return max((self.alphabet.weight(r.lhs) for r in self.rules), default=0)

    @property
    def default_confluence_bound(self) -> int:
        return 2 * self.max_rule_weight + 2

    def unresolved_overlaps(self, max_weight: int | None = None) -> tuple[Overlap, ...]:
        bound = self.default_confluence_bound if max_weight is None else max_weight
        if bound < self.max_rule_weight:
            raise ValueError(
                f"max_weight {bound} is below the largest rule lhs weight {self.max_rule_weight}"
            )
        cached = self._overlap_cache.get(bound)
        if cached is not None:
            return cached
        bad: list[Overlap] = []
        weight = self.alphabet.weight
        for left in self.rules:
            for right in self.rules:
                # proper overlaps: a suffix of left.lhs equals a prefix of right.lhs
                for k in range(1, min(len(left.lhs), len(right.lhs))):
                    if left.lhs[len(left.lhs) - k :] != right.lhs[:k]:
                        continue
                    word = left.lhs + right.lhs[k:]
                    if weight(word) > bound:
                        continue
                    prefix = left.lhs[: len(left.lhs) - k]
                    suffix = right.lhs[k:]
                    first_left = self.reduce(left.rhs * NCPoly.from_word(suffix))
                    first_right = self.reduce(NCPoly.from_word(prefix) * right.rhs)
                    if first_left != first_right:
                        bad.append(Overlap(left, right, word, first_left, first_right))
                if left.lhs == right.lhs:
                    continue
                # inclusions: right.lhs occurs strictly inside left.lhs
                for start in range(len(left.lhs) - len(right.lhs) + 1):
                    if left.lhs[start : start + len(right.lhs)] != right.lhs:
                        continue
                    if weight(left.lhs) > bound:
                        continue
                    prefix = left.lhs[:start]
                    suffix = left.lhs[start + len(right.lhs) :]
                    first_left = self.reduce(left.rhs)
                    inner = NCPoly.from_word(prefix) * right.rhs * NCPoly.from_word(suffix)
                    first_right = self.reduce(inner)
                    if first_left != first_right:
                        bad.append(Overlap(left, right, left.lhs, first_left, first_right))
        result = tuple(bad)
        self._overlap_cache[bound] = result
        return result

    def is_confluent(self, max_weight: int | None = None) -> bool:
        return not self.unresolved_overlaps(max_weight)

    def require_confluent(self, max_weight: int | None = None) -> None:
        overlaps = self.unresolved_overlaps(max_weight)
        if overlaps:
            raise NotConfluentError(overlaps)

    # -- normal-word language ----------------------------------------------

    def dfa(self) -> "NormalWordDFA":
        if self._dfa is None:
            self._dfa = factor_avoidance_dfa(len(self.alphabet), [r.lhs for r in self.rules])
        return self._dfa


def reduce(poly: NCPoly, pres: Presentation) -> NCPoly:
    """Normal form of ``poly``; unique when ``pres`` is confluent, otherwise
    the deterministic leftmost-innermost normal form."""
    return pres.reduce(poly)


def check_confluence(pres: Presentation, max_weight: int | None = None) -> tuple[Overlap, ...]:
    """Resolve all overlap/inclusion ambiguities up to ``max_weight`` and
    return the ones whose two reductions disagree (empty = confluent)."""
    return pres.unresolved_overlaps(max_weight)


@dataclass(frozen=True)
class NormalWordDFA:
    """Deterministic automaton accepting exactly the words avoiding every
    forbidden factor.  All states accept; -1 is the dead transition."""

    num_letters: int
    transitions: tuple[tuple[int, ...], ...]  # transitions[state][letter] -> state | -1
    start: int = 0

    @property
    def num_states(self) -> int:
        return len(self.transitions)

    def accepts(self, word: Word) -> bool:
        state = self.start
        for letter in word:
            state = self.transitions[state][letter]
            if state < 0:
                return False
        return True

    def dims(self, max_degree: int, letter_degrees: Sequence[int] | None = None) -> list[int]:
        """Number of accepted words per degree 0..max_degree.

        ``letter_degrees`` gives each letter's degree contribution (default 1,
        i.e. counting by length); exact integer arithmetic throughout.
        """
        degrees = tuple(letter_degrees) if letter_degrees is not None else (1,) * self.num_letters
        # table[d][state] = number of degree-d words ending in state
        table = [[0] * self.num_states for _ in range(max_degree + 1)]
        table[0][self.start] = 1
        for d in range(max_degree + 1):
            for state, count in enumerate(table[d]):
                if not count:
                    continue
                row = self.transitions[state]
                for letter in range(self.num_letters):
                    target = row[letter]
                    if target < 0:
                        continue
                    nd = d + degrees[letter]
                    if nd <= max_degree:
                        table[nd][target] += count
        return [sum(row) for row in table]

    def growth_degree(self) -> int | Growth:
        """Exact polynomial growth degree of the cumulative word counts, or
        EXPONENTIAL.

        Every strongly connected component must be a single cycle; the degree
        is then the maximum number of cycle components met along any path in
        the condensation reachable from the start state.
        """
        live = self._live_edges()
        comp = _tarjan_scc(self.num_states, live)
        num_comps = max(comp) + 1 if comp else 0
        # classify components: does it carry a cycle, and is it a single cycle?
        internal_out = [0] * self.num_states
        has_cycle = [False] * num_comps
        for state, targets in enumerate(live):
            for target in targets:
                if comp[target] == comp[state]:
                    internal_out[state] += 1
                    has_cycle[comp[state]] = True
        for state, count in enumerate(internal_out):
            if count > 1:
                return EXPONENTIAL
        # longest path in the condensation DAG, counting cycle components
        comp_edges: dict[int, set[int]] = {i: set() for i in range(num_comps)}
        for state, targets in enumerate(live):
            for target in targets:
                if comp[state] != comp[target]:
                    comp_edges[comp[state]].add(comp[target])
        best: dict[int, int] = {}

        def longest(c: int) -> int:
            if c in best:
                return best[c]
            score = 1 if has_cycle[c] else 0
            score += max((longest(t) for t in comp_edges[c]), default=0)
            best[c] = score
            return score

        return longest(comp[self.start])

    def _live_edges(self) -> list[list[int]]:
        return [
            [target for target in row if target >= 0] for row in self.transitions
        ]


def _tarjan_scc(n: int, edges: list[list[int]]) -> list[int]:
    """Iterative Tarjan; returns component index per vertex (reverse topological:
    a component's index is larger than those of components it can reach)."""
    index = [0] * n
    low = [0] * n
    on_stack = [False] * n
    visited = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = [0]
    comp_count = [0]

    for root in range(n):
        if visited[root]:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                visited[v] = True
                counter[0] += 1
                index[v] = low[v] = counter[0]
                stack.append(v)
                on_stack[v] = True
            advanced = False
            while pi < len(edges[v]):
                w = edges[v][pi]
                pi += 1
                if not visited[w]:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = comp_count[0]
                    if w == v:
                        break
                comp_count[0] += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp


def factor_avoidance_dfa(num_letters: int, forbidden: Iterable[Word]) -> NormalWordDFA:
    """Aho-Corasick style automaton over the forbidden factor set.

    States are the proper prefixes of forbidden words reachable from the empty
    word (state 0); a transition is dead (-1) exactly when appending the
    letter completes a forbidden factor.
    """
    forbidden_set = {tuple(f) for f in forbidden if f}
    prefix_pool = {EMPTY_WORD}
    for f in forbidden_set:
        for i in range(1, len(f)):
            prefix_pool.add(f[:i])
    state_of: dict[Word, int] = {EMPTY_WORD: 0}
    order: list[Word] = [EMPTY_WORD]
    rows: list[list[int]] = []
    cursor = 0
    while cursor < len(order):
        p = order[cursor]
        cursor += 1
        row: list[int] = []
        for letter in range(num_letters):
            extended = p + (letter,)
            if any(extended[i:] in forbidden_set for i in range(len(extended))):
                row.append(-1)
                continue
            for i in range(len(extended) + 1):
                suffix = extended[i:]
                if suffix in prefix_pool:
                    if suffix not in state_of:
                        state_of[suffix] = len(order)
                        order.append(suffix)
                    row.append(state_of[suffix])
                    break
        rows.append(row)
    return NormalWordDFA(num_letters, tuple(tuple(r) for r in rows))


def build_dfa(pres: Presentation) -> NormalWordDFA:
    """Factor-avoidance automaton over the rule lhs set of ``pres``."""
    return pres.dfa()


def normal_words(pres: Presentation, grading: Grading, degree: int) -> list[Word]:
    """All normal words (no rule lhs as a factor) of the given degree, in
    monomial order."""
    if grading not in ("length", "weight"):
        raise ValueError(f"grading must be 'length' or 'weight', not {grading!r}")
    dfa = pres.dfa()
    weights = pres.alphabet.weights if grading == "weight" else (1,) * len(pres.alphabet)
    out: list[Word] = []

    def walk(state: int, word: Word, remaining: int) -> None:
        if remaining == 0:
            out.append(word)
            return
        row = dfa.transitions[state]
        for letter in range(len(weights)):
            if weights[letter] > remaining:
                continue
            target = row[letter]
            if target < 0:
                continue
            walk(target, word + (letter,), remaining - weights[letter])

    if degree < 0:
        raise ValueError("degree must be >= 0")
    walk(dfa.start, EMPTY_WORD, degree)
    out.sort(key=pres.alphabet.sort_key)
    return out


def normal_words_up_to_weight(pres: Presentation, max_weight: int) -> list[Word]:
    """Normal words of weight 0..max_weight, in monomial order (unit first)."""
    out: list[Word] = []
    for degree in range(max_weight + 1):
        out.extend(normal_words(pres, "weight", degree))
    return out


def finite_difference_degree(cumulative: Sequence[int]) -> int | None:
    """Least d whose (d+1)-th finite difference vanishes identically on the
    window, requiring at least two surviving entries; None if none stabilizes."""
    seq = list(cumulative)
    for d in range(len(seq)):
        diff = seq
        for _ in range(d + 1):
            diff = [b - a for a, b in zip(diff, diff[1:])]
        if len(diff) < 2:
            return None
        if all(v == 0 for v in diff):
            return d
    return None


@dataclass(frozen=True)
class GrowthReport:
    """Dimension sequence of the normal-word language and the detected growth.

    ``growth_degree`` is the exact automaton degree cross-checked (under
    length grading) against finite differences of the cumulative sums; the two
    must agree or the verdict is INCONCLUSIVE.
    """

    grading: Grading
    dims: tuple[int, ...]
    cumulative: tuple[int, ...]
    growth_degree: int | Growth
    method: str
    automaton_degree: int | Growth
    difference_degree: int | None


def growth(pres: Presentation, grading: Grading, depth: int) -> GrowthReport:
    """Growth analysis of the normal-word language up to ``depth``."""
    pres.require_confluent()
    if grading not in ("length", "weight"):
        raise ValueError(f"grading must be 'length' or 'weight', not {grading!r}")
    dfa = pres.dfa()
    degrees = pres.alphabet.weights if grading == "weight" else None
    dims = tuple(dfa.dims(depth, degrees))
    cumulative = []
    total = 0
    for value in dims:
        total += value
        cumulative.append(total)
    auto = dfa.growth_degree()
    if grading == "weight":
        # weighted Hilbert functions are quasi-polynomial; the automaton
        # analysis stays exact, finite differences are not attempted
        return GrowthReport(grading, dims, tuple(cumulative), auto, "automaton", auto, None)
    fd = finite_difference_degree(cumulative)
    if auto is EXPONENTIAL:
        verdict: int | Growth = EXPONENTIAL if fd is None else INCONCLUSIVE
    elif fd is None or fd != auto:
        verdict = INCONCLUSIVE
    else:
        verdict = auto
    return GrowthReport(grading, dims, tuple(cumulative), verdict, "automaton", auto, fd)
