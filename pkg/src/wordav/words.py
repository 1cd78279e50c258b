"""Words over small integer alphabets, morphisms, and factor machinery.

Letters are integers 0..k-1 rendered as decimal digits, so alphabets are
capped at 10 letters for text I/O (internally up to 255). Words wrap a
bytes payload, which makes slicing, equality, and substring tests cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Protocol


class CompletenessError(ValueError):
    """A factor set without a completeness guarantee was used where one is required."""


class StabilizationError(RuntimeError):
    """Factor-set iteration did not stabilize within the iteration cap."""

    def __init__(self, message: str, partial: "FactorSet | None" = None):
        super().__init__(message)
        self.partial = partial


def _check_letters(data: bytes, alphabet_size: int) -> None:
    if not 1 <= alphabet_size <= 255:
        raise ValueError(f"alphabet size must be in 1..255, got {alphabet_size}")
    if data and max(data) >= alphabet_size:
        bad = max(data)
        raise ValueError(f"letter {bad} outside alphabet of size {alphabet_size}")


@dataclass(frozen=True, order=True)
class Word:
    """Immutable word over the alphabet {0, ..., alphabet_size-1}."""

    data: bytes
    alphabet_size: int = field(compare=False)

    def __post_init__(self) -> None:
        _check_letters(self.data, self.alphabet_size)

    @classmethod
    def from_letters(cls, letters: Iterable[int], alphabet_size: int | None = None) -> "Word":
        data = bytes(letters)
        if alphabet_size is None:
            alphabet_size = (max(data) + 1) if data else 1
        return cls(data, alphabet_size)

    @classmethod
    def from_text(cls, text: str, alphabet_size: int | None = None) -> "Word":
        """Parse a word written as decimal digits, e.g. "0121"."""
        if not all("0" <= ch <= "9" for ch in text):
            raise ValueError(f"word text must be decimal digits, got {text!r}")
        return cls.from_letters((ord(ch) - ord("0") for ch in text), alphabet_size)

    def to_text(self) -> str:
        if self.data and max(self.data) > 9:
            raise ValueError("letters above 9 have no digit rendering")
        return "".join(chr(ord("0") + b) for b in self.data)

    def __str__(self) -> str:
        return self.to_text()

    def __len__(self) -> int:
        return len(self.data)

    def __iter__(self) -> Iterator[int]:
        return iter(self.data)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Word(self.data[index], self.alphabet_size)
        return self.data[index]

    def __contains__(self, other: "Word") -> bool:
        return other.data in self.data

    def __add__(self, other: "Word") -> "Word":
        return Word(self.data + other.data, max(self.alphabet_size, other.alphabet_size))

    def rotated(self, i: int) -> "Word":
        """The rotation moving the first i letters to the end."""
        if not self.data:
            return self
        i %= len(self.data)
        return Word(self.data[i:] + self.data[:i], self.alphabet_size)

    def factors(self, length: int) -> Iterator["Word"]:
        """All factors of the given length, left to right (with repeats)."""
        for i in range(len(self.data) - length + 1):
            yield Word(self.data[i : i + length], self.alphabet_size)


@dataclass(frozen=True)
class Morphism:
    """Non-erasing morphism given by the image of each source letter."""

    images: tuple[Word, ...]

    def __post_init__(self) -> None:
        if not self.images:
            raise ValueError("a morphism needs at least one letter image")
        if any(len(img) == 0 for img in self.images):
            raise ValueError("morphism must be non-erasing (no empty images)")
        size = max(img.alphabet_size for img in self.images)
        # normalize image alphabets so concatenation is uniform
        object.__setattr__(
            self, "images", tuple(Word(img.data, size) for img in self.images)
        )

    @classmethod
    def from_texts(cls, images: Iterable[str]) -> "Morphism":
        return cls(tuple(Word.from_text(t) for t in images))

    @property
    def source_size(self) -> int:
        return len(self.images)

    @property
    def target_size(self) -> int:
        return self.images[0].alphabet_size

    @property
    def uniform_width(self) -> int | None:
        """Common image length if the morphism is uniform, else None."""
        widths = {len(img) for img in self.images}
        return widths.pop() if len(widths) == 1 else None

    def __call__(self, w: Word) -> Word:
        if w.data and max(w.data) >= self.source_size:
            raise ValueError(
                f"letter {max(w.data)} outside morphism domain of size {self.source_size}"
            )
        return Word(b"".join(self.images[b].data for b in w.data), self.target_size)

    def to_text(self) -> str:
        return "\n".join(f"{i} -> {img}" for i, img in enumerate(self.images))


def load_morphism(text: str) -> Morphism:
    """Parse a morphism from `letter -> image` lines; '#' starts a comment."""
    entries: dict[int, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise ValueError(f"expected 'letter -> image', got {raw!r}")
        left, right = (part.strip() for part in line.split("->", 1))
        letter = int(left)
        if letter in entries:
            raise ValueError(f"duplicate image for letter {letter}")
        entries[letter] = right
    if sorted(entries) != list(range(len(entries))):
        raise ValueError("morphism letters must be exactly 0..k-1")
    return Morphism.from_texts(entries[i] for i in range(len(entries)))


def load_words(text: str) -> list[Word]:
    """Parse one word per line; blank lines and '#' comments are skipped."""
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(Word.from_text(line))
    return out


def apply_morphism(m: Morphism, w: Word) -> Word:
    return m(w)


def fixed_point_prefix(m: Morphism, seed: int, min_len: int) -> Word:
    """Prefix of the fixed point of m at the prolongable letter seed.

    Returns the first iterate m^n(seed) whose length reaches min_len.
    """
    if not 0 <= seed < m.source_size:
        raise ValueError(f"seed letter {seed} outside domain")
    img = m.images[seed]
    if img[0] != seed or len(img) < 2:
        raise ValueError(
            f"morphism is not prolongable at {seed}: image must start with {seed} "
            "and have length at least 2"
        )
    w = Word(bytes([seed]), m.source_size)
    while len(w) < min_len:
        grown = m(w)
        if len(grown) == len(w):
            raise ValueError("fixed-point iteration stopped growing")
        w = grown
    return w


@dataclass(frozen=True)
class FactorSet:
    """The set of length-`length` factors of some word or family of words.

    `complete` records whether the set is guaranteed to hold every factor
    of the underlying (possibly infinite) word; `evidence` says why.
    """

    length: int
    members: frozenset[Word]
    complete: bool
    evidence: dict = field(default_factory=dict, compare=False)

    def __contains__(self, w: Word) -> bool:
        return w in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[Word]:
        return sorted(self.members)


def factor_set(w: Word, length: int) -> FactorSet:
    """All length-`length` factors of a finite word (complete by construction)."""
    if length < 0:
        raise ValueError("factor length must be non-negative")
    members = frozenset(w.factors(length))
    return FactorSet(length, members, True, {"source_length": len(w)})


class FactorFamily(Protocol):
    """Anything that can produce factor sets per length."""

    def factor_set(self, length: int) -> FactorSet: ...


class WordFactors:
    """Factor family of a single finite word."""

    def __init__(self, word: Word):
        self.word = word

    def factor_set(self, length: int) -> FactorSet:
        return factor_set(self.word, length)


class MorphicFactors:
    """Factor family of the fixed point of a prolongable morphism.

    Factor sets are computed by iterating the morphism on the seed letter
    until the set of length-n factors of the prefix is identical on two
    consecutive iterates. This stabilization is a heuristic certificate:
    the returned set is always a subset of the fixed point's factors, and
    the iteration evidence is recorded on the FactorSet.
    """

    def __init__(self, m: Morphism, seed: int = 0, iteration_cap: int = 40):
        # validates prolongability
        fixed_point_prefix(m, seed, 2)
        self.morphism = m
        self.seed = seed
        self.iteration_cap = iteration_cap
        self._cache: dict[int, FactorSet] = {}

    def factor_set(self, length: int) -> FactorSet:
        if length in self._cache:
            return self._cache[length]
        m = self.morphism
        w = Word(bytes([self.seed]), m.source_size)
        prev: frozenset[Word] | None = None
        for iteration in range(1, self.iteration_cap + 1):
            w = m(w)
            if len(w) < length:
                continue
            current = frozenset(w.factors(length))
            if prev is not None and current == prev:
                fs = FactorSet(
                    length,
                    current,
                    True,
                    {
                        "method": "stabilization",
                        "iterations": iteration,
                        "prefix_length": len(w),
                        "size": len(current),
                    },
                )
                self._cache[length] = fs
                return fs
            prev = current
        partial = FactorSet(length, prev or frozenset(), False, {"method": "stabilization"})
        raise StabilizationError(
            f"factor set of length {length} did not stabilize within "
            f"{self.iteration_cap} iterations",
            partial=partial,
        )


def image_factor_set(g: Morphism, base: FactorFamily, length: int) -> FactorSet:
    """Length-n factors of g(x) where x is the word behind `base`.

    For a q-uniform g, every length-n factor of g(x) lies inside the image
    of a factor of x of length ceil(n/q)+1, so completeness of the base
    factor set transfers to the image factor set.
    """
    q = g.uniform_width
    if q is None:
        raise ValueError("image factor sets require a uniform morphism")
    if length < 1:
        raise ValueError("factor length must be positive")
    span = math.ceil(length / q) + 1
    base_fs = base.factor_set(span)
    members: set[Word] = set()
    for u in base_fs.sorted_members():
        img = g(u)
        members.update(img.factors(length))
    return FactorSet(
        length,
        frozenset(members),
        base_fs.complete,
        {
            "method": "image-windows",
            "base_length": span,
            "base_size": len(base_fs),
            "base_evidence": dict(base_fs.evidence),
        },
    )


class ImageFactors:
    """Factor family of g(x) for a uniform morphism g over a base family."""

    def __init__(self, g: Morphism, base: FactorFamily):
        if g.uniform_width is None:
            raise ValueError("image factor families require a uniform morphism")
        self.morphism = g
        self.base = base
        self._cache: dict[int, FactorSet] = {}

    def factor_set(self, length: int) -> FactorSet:
        if length not in self._cache:
            self._cache[length] = image_factor_set(self.morphism, self.base, length)
        return self._cache[length]


@dataclass(frozen=True)
class ConjugacyClass:
    """All rotations of a word, reported by its least rotation."""

    representative: Word

    @property
    def length(self) -> int:
        return len(self.representative)

    def members(self) -> list[Word]:
        rep = self.representative
        seen = []
        for i in range(len(rep)):
            rot = rep.rotated(i)
            if rot not in seen:
                seen.append(rot)
        return seen

    @property
    def size(self) -> int:
        return len(self.members())


def conjugates(w: Word) -> ConjugacyClass:
    if len(w) == 0:
        raise ValueError("conjugacy classes are defined for non-empty words")
    rep = min(w.rotated(i) for i in range(len(w)))
    return ConjugacyClass(rep)


def contained_conjugacy_classes(fs: FactorSet) -> list[ConjugacyClass]:
    """Conjugacy classes fully contained in the factor set, each reported once.

    Requires a complete factor set: absence of a rotation must mean absence
    from the underlying word, never an enumeration gap.
    """
    if not fs.complete:
        raise CompletenessError(
            "conjugacy containment needs a complete factor set"
        )
    found: list[ConjugacyClass] = []
    seen: set[Word] = set()
    for u in fs.sorted_members():
        cls = conjugates(u)
        if cls.representative in seen:
            continue
        seen.add(cls.representative)
        if all(rot in fs for rot in cls.members()):
            found.append(cls)
    found.sort(key=lambda c: c.representative)
    return found
