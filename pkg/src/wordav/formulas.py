"""Formulas over variables, occurrence search, and divisibility.

A pattern is a word over variables A, B, C, ...; a formula is a set of
such fragments. A formula occurs in a word w when some non-erasing
assignment of variable images makes every fragment's image a factor of w.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .words import CompletenessError, FactorFamily, Word

MAX_VARIABLES = 26


class FormulaError(ValueError):
    """Malformed formula text or fragment structure."""


class UnboundedSearchError(ValueError):
    """An occurrence search over an infinite source lacks variable bounds."""


class SearchBudgetExceeded(RuntimeError):
    """An occurrence search exceeded its step budget."""

    def __init__(self, message: str, steps: int):
        super().__init__(message)
        self.steps = steps


def variable_name(v: int) -> str:
    if not 0 <= v < MAX_VARIABLES:
        raise FormulaError(f"variable index {v} out of range")
    return chr(ord("A") + v)


def _fragment_text(frag: tuple[int, ...]) -> str:
    return "".join(variable_name(v) for v in frag)


def _drop_redundant(fragments: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Remove fragments that are factors of other fragments (duplicates included)."""
    kept: list[tuple[int, ...]] = []
    ordered = sorted(set(fragments), key=lambda f: (-len(f), f))
    for frag in ordered:
        if any(_is_factor(frag, other) for other in kept):
            continue
        kept.append(frag)
    return kept


def _is_factor(small: tuple[int, ...], big: tuple[int, ...]) -> bool:
    if len(small) > len(big):
        return False
    return any(big[i : i + len(small)] == small for i in range(len(big) - len(small) + 1))


def _split_isolated(fragments: list[tuple[int, ...]]) -> list[tuple[int, ...]] | None:
    """Split fragments at variables occurring exactly once overall, or None if none."""
    counts: dict[int, int] = {}
    for frag in fragments:
        for v in frag:
            counts[v] = counts.get(v, 0) + 1
    isolated = {v for v, n in counts.items() if n == 1}
    if not isolated:
        return None
    out: list[tuple[int, ...]] = []
    for frag in fragments:
        piece: list[int] = []
        for v in frag:
            if v in isolated:
                if piece:
                    out.append(tuple(piece))
                piece = []
            else:
                piece.append(v)
        if piece:
            out.append(tuple(piece))
    return out


def _rename_first_occurrence(fragments: Sequence[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    mapping: dict[int, int] = {}
    out = []
    for frag in fragments:
        renamed = []
        for v in frag:
            if v not in mapping:
                mapping[v] = len(mapping)
            renamed.append(mapping[v])
        out.append(tuple(renamed))
    return tuple(out)


def _canonical_fragments(fragments: Iterable[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    """Reduce to canonical form: no fragment a factor of another, variables
    renamed to the least sorted fragment tuple (first-occurrence order)."""
    frags = _drop_redundant([tuple(f) for f in fragments if f])
    if not frags:
        raise FormulaError("formula reduced to zero fragments")
    variables = sorted({v for frag in frags for v in frag})
    remap = {v: i for i, v in enumerate(variables)}
    frags = [tuple(remap[v] for v in frag) for frag in frags]
    n = len(variables)
    if n <= 8:
        best = None
        for perm in itertools.permutations(range(n)):
            candidate = tuple(sorted(tuple(perm[v] for v in frag) for frag in frags))
            if best is None or candidate < best:
                best = candidate
        return best
    # too many variables for the exact search: iterate first-occurrence
    # renaming over sorted fragments until it reaches a cycle minimum
    current = tuple(sorted(frags))
    seen = {current}
    while True:
        renamed = tuple(sorted(_rename_first_occurrence(current)))
        if renamed in seen:
            cycle = [current]
            probe = renamed
            while probe != current:
                cycle.append(probe)
                probe = tuple(sorted(_rename_first_occurrence(probe)))
            return min(cycle)
        seen.add(renamed)
        current = renamed


@dataclass(frozen=True)
class Formula:
    """Canonical formula: sorted fragments over variables 0..variable_count-1."""

    fragments: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.fragments:
            raise FormulaError("a formula needs at least one fragment")

    @classmethod
    def from_fragments(cls, fragments: Iterable[Sequence[int]]) -> "Formula":
        return cls(_canonical_fragments(tuple(f) for f in fragments))

    @property
    def variable_count(self) -> int:
        return max(v for frag in self.fragments for v in frag) + 1

    @property
    def variables(self) -> range:
        return range(self.variable_count)

    def to_text(self) -> str:
        return ".".join(_fragment_text(f) for f in self.fragments)

    def __str__(self) -> str:
        return self.to_text()

    def reversed(self) -> "Formula":
        return Formula.from_fragments(tuple(reversed(f)) for f in self.fragments)


def parse_formula(text: str) -> Formula:
    """Parse formula text like "ABA.BAB"; a pattern is a one-fragment formula.

    A dotless pattern is first converted to a formula: every variable that
    occurs exactly once becomes a fragment break. Explicitly empty
    fragments such as "AB..BA" are rejected.
    """
    cleaned = text.strip()
    if not cleaned:
        raise FormulaError("empty formula text")
    if not re.fullmatch(r"[A-Z.]+", cleaned):
        raise FormulaError(f"formula text must use A-Z and '.', got {text!r}")
    parts = cleaned.split(".")
    if any(part == "" for part in parts):
        raise FormulaError(f"empty fragment in {text!r}")
    fragments = [tuple(ord(ch) - ord("A") for ch in part) for part in parts]
    if "." not in cleaned:
        split = _split_isolated(fragments)
        if split is not None:
            fragments = split
    return Formula.from_fragments(fragments)


def reverse_formula(f: Formula) -> Formula:
    return f.reversed()


def circular_formula(t: int) -> Formula:
    """The circular formula on t variables: fragments A_i .. A_{i+t} mod t."""
    if t < 1:
        raise FormulaError("circular formulas need t >= 1")
    if t > MAX_VARIABLES:
        raise FormulaError(f"circular formulas support t <= {MAX_VARIABLES}")
    fragments = [tuple((i + j) % t for j in range(t + 1)) for i in range(t)]
    return Formula.from_fragments(fragments)


def parse_formula_or_circular(text: str) -> Formula:
    """parse_formula, plus the shorthand C1, C2, ... for circular formulas."""
    match = re.fullmatch(r"C(\d+)", text.strip())
    if match:
        return circular_formula(int(match.group(1)))
    return parse_formula(text)


@dataclass(frozen=True)
class VarBounds:
    """Length caps for variable images: per-variable and sums over groups."""

    var_caps: tuple[tuple[int, int], ...] = ()
    sum_caps: tuple[tuple[tuple[int, ...], int], ...] = ()
    star_cap: int | None = None

    @classmethod
    def parse(cls, text: str) -> "VarBounds":
        """Parse caps like "A<=4", "A+B<=60,B+C<=60", or "*<=1"."""
        var_caps: list[tuple[int, int]] = []
        sum_caps: list[tuple[tuple[int, ...], int]] = []
        star: int | None = None
        for chunk in text.split(","):
            part = chunk.strip().replace(" ", "")
            if not part:
                continue
            match = re.fullmatch(r"([A-Z*+]+)<=(\d+)", part)
            if not match:
                raise FormulaError(f"cannot parse bound {chunk!r}")
            left, cap = match.group(1), int(match.group(2))
            if cap < 1:
                raise FormulaError(f"caps must be at least 1 in {chunk!r}")
            if left == "*":
                star = cap if star is None else min(star, cap)
                continue
            names = left.split("+")
            if any(len(n) != 1 or not "A" <= n <= "Z" for n in names):
                raise FormulaError(f"cannot parse bound {chunk!r}")
            variables = tuple(sorted(ord(n) - ord("A") for n in names))
            if len(names) == 1:
                var_caps.append((variables[0], cap))
            else:
                sum_caps.append((variables, cap))
        return cls(tuple(var_caps), tuple(sum_caps), star)

    def to_text(self) -> str:
        parts = []
        if self.star_cap is not None:
            parts.append(f"*<={self.star_cap}")
        for v, cap in self.var_caps:
            parts.append(f"{variable_name(v)}<={cap}")
        for group, cap in self.sum_caps:
            parts.append("+".join(variable_name(v) for v in group) + f"<={cap}")
        return ",".join(parts)

    def cap_for(self, v: int) -> int | None:
        caps = [self.star_cap] if self.star_cap is not None else []
        caps.extend(cap for var, cap in self.var_caps if var == v)
        # a sum cap over a group leaves cap - (group size - 1) for one member
        caps.extend(cap - len(group) + 1 for group, cap in self.sum_caps if v in group)
        return min(caps) if caps else None

    def admits(self, lengths: dict[int, int]) -> bool:
        """Check caps against known lengths, reserving 1 per unset variable."""
        for v, length in lengths.items():
            cap = self.cap_for(v)
            if cap is not None and length > cap:
                return False
        for group, cap in self.sum_caps:
            total = sum(lengths.get(v, 1) for v in group)
            if total > cap:
                return False
        return True


EMPTY_BOUNDS = VarBounds()


@dataclass(frozen=True)
class FragmentWitness:
    fragment: tuple[int, ...]
    image: Word
    location: dict = field(compare=False)

    def as_dict(self) -> dict:
        return {
            "fragment": _fragment_text(self.fragment),
            "image": str(self.image),
            "location": dict(self.location),
        }


@dataclass(frozen=True)
class Assignment:
    """A non-erasing assignment witnessing an occurrence."""

    images: tuple[Word, ...]
    witnesses: tuple[FragmentWitness, ...]

    def image_of(self, v: int) -> Word:
        return self.images[v]

    def fragment_image(self, frag: tuple[int, ...]) -> Word:
        data = b"".join(self.images[v].data for v in frag)
        size = max(img.alphabet_size for img in self.images)
        return Word(data, size)

    def as_dict(self, variables_as_letters: bool = False) -> dict:
        def render(w: Word) -> str:
            if variables_as_letters:
                return "".join(variable_name(b) for b in w.data)
            return str(w)

        return {
            "images": {variable_name(v): render(img) for v, img in enumerate(self.images)},
            "fragments": [
                {**w.as_dict(), "image": render(w.image)} for w in self.witnesses
            ],
        }

    def to_text(self, variables_as_letters: bool = False) -> str:
        def render(w: Word) -> str:
            if variables_as_letters:
                return "".join(variable_name(b) for b in w.data)
            return str(w)

        return " ".join(
            f"{variable_name(v)}={render(img)}" for v, img in enumerate(self.images)
        )


class WordSource:
    """Occurrence source backed by a single finite word."""

    def __init__(self, word: Word):
        self.word = word
        self.max_length: int | None = len(word)
        self._cache: dict[int, list[Word]] = {}

    def candidates(self, length: int) -> list[Word]:
        if length not in self._cache:
            self._cache[length] = sorted(set(self.word.factors(length)))
        return self._cache[length]

    def contains(self, w: Word) -> bool:
        return w in self.word

    def locate(self, w: Word) -> dict:
        return {"offset": self.word.data.find(w.data)}


class CorpusSource:
    """Occurrence source over the union of factors of finitely many words."""

    def __init__(self, words: Sequence[Word], label: str = "corpus"):
        if not words:
            raise ValueError("corpus must be non-empty")
        self.words = list(words)
        self.label = label
        self.max_length: int | None = max(len(w) for w in self.words)
        size = max(w.alphabet_size for w in self.words)
        self._alphabet_size = size
        # 0xFF never matches a letter, so one joined buffer answers membership
        self._joined = b"\xff".join(w.data for w in self.words)
        self._cache: dict[int, list[Word]] = {}

    def candidates(self, length: int) -> list[Word]:
        if length not in self._cache:
            members: set[bytes] = set()
            for w in self.words:
                data = w.data
                for i in range(len(data) - length + 1):
                    members.add(data[i : i + length])
            self._cache[length] = [Word(m, self._alphabet_size) for m in sorted(members)]
        return self._cache[length]

    def contains(self, w: Word) -> bool:
        return w.data in self._joined

    def locate(self, w: Word) -> dict:
        for i, word in enumerate(self.words):
            offset = word.data.find(w.data)
            if offset >= 0:
                return {"source": self.label, "word_index": i, "offset": offset}
        return {"source": self.label, "found": False}


class FamilySource:
    """Occurrence source backed by a factor family (e.g. a morphic word)."""

    def __init__(self, family: FactorFamily, label: str = "family"):
        self.family = family
        self.label = label
        self.max_length: int | None = None

    def candidates(self, length: int) -> list[Word]:
        fs = self.family.factor_set(length)
        if not fs.complete:
            raise CompletenessError(
                f"occurrence search needs complete factor sets (length {length})"
            )
        return fs.sorted_members()

    def contains(self, w: Word) -> bool:
        return w in self.family.factor_set(len(w))

    def locate(self, w: Word) -> dict:
        return {"source": self.label, "factor_length": len(w)}


def as_occurrence_source(source) -> WordSource | CorpusSource | FamilySource:
    if isinstance(source, (WordSource, CorpusSource, FamilySource)):
        return source
    if isinstance(source, Word):
        return WordSource(source)
    if hasattr(source, "factor_set"):
        return FamilySource(source)
    raise TypeError(f"cannot search occurrences in {type(source).__name__}")


class _Search:
    """Deterministic DFS for one occurrence of a formula in a source."""

    def __init__(self, formula: Formula, source, bounds: VarBounds, budget: int | None):
        self.formula = formula
        self.source = source
        self.bounds = bounds
        self.budget = budget
        self.steps = 0
        self.caps: dict[int, int] = {}
        for v in formula.variables:
            cap = bounds.cap_for(v)
            if cap is None:
                if source.max_length is None:
                    raise UnboundedSearchError(
                        f"variable {variable_name(v)} has no length cap over an "
                        "unbounded source"
                    )
                cap = source.max_length
            elif source.max_length is not None:
                cap = min(cap, source.max_length)
            self.caps[v] = cap
        self.order = self._fragment_order()

    def _fragment_order(self) -> list[tuple[int, ...]]:
        """Process fragments binding as many variables as possible as early
        as possible; ties prefer longer, then lexicographic."""
        remaining = list(self.formula.fragments)
        bound: set[int] = set()
        order: list[tuple[int, ...]] = []
        while remaining:
            best = max(
                remaining,
                key=lambda f: (len(set(f) - bound), len(f), tuple(-v for v in f)),
            )
            order.append(best)
            bound.update(best)
            remaining.remove(best)
        return order

    def _tick(self) -> None:
        self.steps += 1
        if self.budget is not None and self.steps > self.budget:
            raise SearchBudgetExceeded("occurrence search budget exceeded", self.steps)

    def run(self) -> Assignment | None:
        return self._solve(0, {})

    def _solve(self, idx: int, binding: dict[int, Word]) -> Assignment | None:
        if idx == len(self.order):
            return self._assignment(binding)
        frag = self.order[idx]
        unbound = [v for v in set(frag) if v not in binding]
        if not unbound:
            image = _concat(binding, frag)
            self._tick()
            if self.source.contains(image):
                return self._solve(idx + 1, binding)
            return None
        min_len = sum(len(binding[v]) if v in binding else 1 for v in frag)
        max_len = sum(len(binding[v]) if v in binding else self.caps[v] for v in frag)
        if self.source.max_length is not None:
            max_len = min(max_len, self.source.max_length)
        for length in range(min_len, max_len + 1):
            for candidate in self.source.candidates(length):
                self._tick()
                for extended in self._match(frag, candidate, binding):
                    result = self._solve(idx + 1, extended)
                    if result is not None:
                        return result
        return None

    def _match(self, frag: tuple[int, ...], image: Word, binding: dict[int, Word]):
        """Yield extensions of `binding` making the fragment image equal `image`.

        Works inward from both ends: occurrences of already-bound variables
        are checked as soon as they touch either end, so contradictions
        (e.g. mismatched borders) prune before interior variables are tried.
        """
        data = image.data
        alphabet = image.alphabet_size

        def walk(li: int, ri: int, lo: int, hi: int, local: dict[int, Word]):
            while True:
                if li > ri:
                    if lo == hi:
                        yield local
                    return
                v = frag[li]
                img = local.get(v)
                if img is not None:
                    step = len(img)
                    if hi - lo < step or data[lo : lo + step] != img.data:
                        return
                    lo += step
                    li += 1
                    continue
                v_right = frag[ri]
                img = local.get(v_right)
                if img is not None:
                    step = len(img)
                    if hi - lo < step or data[hi - step : hi] != img.data:
                        return
                    hi -= step
                    ri -= 1
                    continue
                break
            v = frag[li]
            middle = frag[li + 1 : ri + 1]
            rest_min = sum(len(local[s]) if s in local else 1 for s in middle)
            rest_max = sum(len(local[s]) if s in local else self.caps[s] for s in middle)
            space = hi - lo
            low = max(1, space - rest_max)
            high = min(self.caps[v], space - rest_min)
            for length in range(low, high + 1):
                candidate = dict(local)
                candidate[v] = Word(data[lo : lo + length], alphabet)
                if not self._admits(candidate):
                    continue
                yield from walk(li + 1, ri, lo + length, hi, candidate)

        yield from walk(0, len(frag) - 1, 0, len(data), dict(binding))

    def _admits(self, binding: dict[int, Word]) -> bool:
        lengths = {v: len(img) for v, img in binding.items()}
        return self.bounds.admits(lengths)

    def _assignment(self, binding: dict[int, Word]) -> Assignment:
        images = tuple(binding[v] for v in self.formula.variables)
        witnesses = []
        for frag in self.formula.fragments:
            image = _concat(binding, frag)
            witnesses.append(
                FragmentWitness(frag, image, self.source.locate(image))
            )
        return Assignment(images, tuple(witnesses))


def _concat(binding: dict[int, Word], frag: tuple[int, ...]) -> Word:
    data = b"".join(binding[v].data for v in frag)
    size = max(binding[v].alphabet_size for v in frag)
    return Word(data, size)


def find_occurrence(
    formula: Formula,
    source,
    bounds: VarBounds = EMPTY_BOUNDS,
    *,
    budget: int | None = None,
) -> Assignment | None:
    """First occurrence of the formula in the source, or None.

    The search is deterministic: fragment processing order, candidate
    factors, and image lengths are all enumerated in a fixed order, so the
    returned assignment is reproducible.
    """
    search = _Search(formula, as_occurrence_source(source), bounds, budget)
    return search.run()


def occurs_with_new_suffix(
    formula: Formula,
    word: Word,
    bounds: VarBounds = EMPTY_BOUNDS,
    *,
    budget: int | None = None,
) -> bool:
    """Does the formula occur in `word` with a fragment image ending at the
    last letter?

    An occurrence whose fragment images all end before the last letter is
    an occurrence in word[:-1], so growing a word letter by letter and
    calling this after each append finds occurrences exactly when checking
    each prefix from scratch would.
    """
    source = WordSource(word)
    search = _Search(formula, source, bounds, budget)
    n = len(word)
    for anchor in formula.fragments:
        rest = [f for f in search.order if f != anchor]
        search.order = [anchor] + rest
        min_len = len(anchor)
        max_len = min(n, sum(search.caps[v] for v in anchor))
        for length in range(min_len, max_len + 1):
            suffix = word[n - length :]
            search._tick()
            for binding in search._match(anchor, suffix, {}):
                if search._solve(1, binding) is not None:
                    return True
    return False


def divides(f_small: Formula, f_big: Formula) -> Assignment | None:
    """Witness that f_small divides f_big, or None.

    f_small divides f_big when a non-erasing morphism on variables maps
    every fragment of f_small into a factor of some fragment of f_big.
    The search treats f_big's fragments as words over its variables and is
    bounded by their lengths; a witness means every word avoiding f_small
    also avoids f_big.
    """
    alphabet = f_big.variable_count
    corpus = [Word(bytes(frag), alphabet) for frag in f_big.fragments]
    source = CorpusSource(corpus, label="fragments")
    return find_occurrence(f_small, source)
