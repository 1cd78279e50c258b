"""Exact-rational repetition detection and power-free word enumeration.

A repetition is a factor u with a period p <= |u|; its exponent is |u|/p.
A word is (beta+, n)-free when it has no factor with period at least n and
exponent strictly greater than beta; dropping the '+' forbids exponents
equal to beta as well. All comparisons use exact integer arithmetic.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .words import Word


@dataclass(frozen=True)
class FreenessSpec:
    """Forbid repetitions with period >= min_period and exponent beyond threshold."""

    threshold: Fraction
    strict: bool = True
    min_period: int = 1

    def __post_init__(self) -> None:
        # Non-strict at threshold 1 would forbid every single letter
        # (a length-1 factor has period 1 and exponent exactly 1).
        if self.strict:
            if self.threshold < 1:
                raise ValueError("strict freeness threshold must be at least 1")
        elif self.threshold <= 1:
            raise ValueError("non-strict freeness threshold must exceed 1")
        if self.min_period < 1:
            raise ValueError("min_period must be at least 1")

    @classmethod
    def parse(cls, text: str) -> "FreenessSpec":
        """Parse "5/4+", "97/75+,61", or "2" (integer threshold, non-strict)."""
        match = re.fullmatch(r"\s*(\d+)(?:/(\d+))?(\+)?(?:,(\d+))?\s*", text)
        if not match:
            raise ValueError(f"cannot parse freeness spec {text!r}")
        num, den, plus, period = match.groups()
        if den is not None and int(den) == 0:
            raise ValueError(f"zero denominator in freeness spec {text!r}")
        return cls(
            Fraction(int(num), int(den) if den else 1),
            strict=plus is not None,
            min_period=int(period) if period else 1,
        )

    def to_text(self) -> str:
        beta = self.threshold
        text = f"{beta.numerator}" if beta.denominator == 1 else f"{beta.numerator}/{beta.denominator}"
        if self.strict:
            text += "+"
        if self.min_period != 1:
            text += f",{self.min_period}"
        return text

    def __str__(self) -> str:
        return self.to_text()

    def violates(self, period: int, length: int) -> bool:
        """Is a repetition of this period and total length forbidden?"""
        if period < self.min_period:
            return False
        lhs = self.threshold.denominator * length
        rhs = self.threshold.numerator * period
        return lhs > rhs if self.strict else lhs >= rhs

    def run_threshold(self, period: int) -> int:
        """Least match-run r making a period-p factor of length p+r forbidden."""
        num, den = self.threshold.numerator, self.threshold.denominator
        if self.strict:
            return (num - den) * period // den + 1
        return -((-(num - den) * period) // den)


@dataclass(frozen=True)
class Repetition:
    """A periodic factor: w[start : start+length] has the given period."""

    start: int
    period: int
    length: int

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.length, self.period)

    def factor(self, w: Word) -> Word:
        return w[self.start : self.start + self.length]

    def as_dict(self) -> dict:
        return {
            "start": self.start,
            "period": self.period,
            "length": self.length,
            "exponent": str(self.exponent),
        }


def _better(a: Repetition, b: Repetition) -> Repetition:
    """Prefer the leftmost violation, then larger exponent, then smaller period."""
    ka = (a.start, -a.exponent, a.period)
    kb = (b.start, -b.exponent, b.period)
    return a if ka <= kb else b


def find_forbidden_repetition(w: Word, spec: FreenessSpec) -> Repetition | None:
    """A maximal forbidden repetition at the leftmost violating position, or None."""
    data = w.data
    n = len(data)
    best: Repetition | None = None
    for period in range(spec.min_period, n):
        threshold = spec.run_threshold(period)
        i = 0
        limit = n - period
        while i < limit:
            if data[i] != data[i + period]:
                i += 1
                continue
            j = i
            while j < limit and data[j] == data[j + period]:
                j += 1
            run = j - i
            if run >= threshold:
                rep = Repetition(i, period, period + run)
                best = rep if best is None else _better(best, rep)
            i = j + 1
    return best


def last_position_check(w: Word, spec: FreenessSpec) -> Repetition | None:
    """A forbidden repetition ending at the last letter, or None.

    Appending letters one at a time and calling this after each append
    rejects exactly the words rejected by find_forbidden_repetition.
    """
    data = w.data
    n = len(data)
    best: Repetition | None = None
    for period in range(spec.min_period, n):
        run = 0
        while run < n - period and data[n - 1 - run] == data[n - 1 - run - period]:
            run += 1
        if run >= spec.run_threshold(period):
            rep = Repetition(n - period - run, period, period + run)
            if best is None or (-rep.exponent, rep.period) < (-best.exponent, best.period):
                best = rep
    return best


@dataclass
class EnumerationReport:
    """Outcome of a depth-first enumeration of spec-free words."""

    alphabet_size: int
    spec: FreenessSpec
    max_len: int
    counts: list[int]
    nodes: int
    symmetry: bool
    aborted: bool = False
    cap_hit: bool = False

    @property
    def total(self) -> int:
        return sum(self.counts[1:])

    def as_dict(self) -> dict:
        return {
            "alphabet_size": self.alphabet_size,
            "spec": str(self.spec),
            "max_len": self.max_len,
            "counts": list(self.counts),
            "total": self.total,
            "nodes": self.nodes,
            "symmetry": self.symmetry,
            "aborted": self.aborted,
            "cap_hit": self.cap_hit,
        }


def enumerate_free_words(
    k: int,
    spec: FreenessSpec,
    max_len: int,
    visitor: Callable[[Word], bool | None] | None = None,
    *,
    symmetry: bool = False,
    node_cap: int | None = None,
) -> EnumerationReport:
    """Depth-first, lexicographic visit of every spec-free word of length <= max_len.

    The visitor may return False to stop the traversal. With symmetry=True
    only words starting with letter 0 are visited and counts are scaled by
    k (freeness is invariant under letter permutations).
    """
    if k < 1:
        raise ValueError("alphabet size must be at least 1")
    counts = [0] * (max_len + 1)
    counts[0] = 1
    report = EnumerationReport(k, spec, max_len, counts, 0, symmetry)
    if max_len == 0:
        return report
    thresholds = [spec.run_threshold(p) for p in range(max_len + 1)]
    word = bytearray()
    # runs[d][p] = matching run for period p ending at position d-1;
    # entries with p >= d stay 0 and are never written, which is exact
    runs: list[list[int]] = [[0] * (max_len + 1) for _ in range(max_len + 1)]

    def extend(letter: int) -> bool:
        d = len(word)
        word.append(letter)
        cur = runs[d + 1]
        prev = runs[d]
        for p in range(spec.min_period, d + 1):
            r = prev[p] + 1 if word[d] == word[d - p] else 0
            cur[p] = r
            if r >= thresholds[p]:
                word.pop()
                return False
        return True

    def dfs() -> bool:
        d = len(word)
        letters = 1 if (symmetry and d == 0) else k
        for letter in range(letters):
            if not extend(letter):
                continue
            report.nodes += 1
            counts[d + 1] += 1
            if node_cap is not None and report.nodes >= node_cap:
                report.cap_hit = True
                word.pop()
                return False
            if visitor is not None and visitor(Word(bytes(word), k)) is False:
                report.aborted = True
                word.pop()
                return False
            if d + 1 < max_len and not dfs():
                word.pop()
                return False
            word.pop()
        return True

    dfs()
    if symmetry:
        for length in range(1, max_len + 1):
            counts[length] *= k
    return report


def count_free_words(k: int, spec: FreenessSpec, length: int, *, symmetry: bool = False) -> int:
    """Number of spec-free words of exactly the given length."""
    report = enumerate_free_words(k, spec, length, symmetry=symmetry)
    return report.counts[length]


def maximal_free_words(k: int, spec: FreenessSpec, depth: int) -> list[Word]:
    """Free words that are either of length `depth` or not extendable.

    Every free word is a prefix of some word in this list, so the images
    of these words cover all factors of images of free words up to the
    corresponding window length.
    """
    collected: list[Word] = []
    thresholds = [spec.run_threshold(p) for p in range(depth + 1)]
    word = bytearray()
    runs: list[list[int]] = [[0] * (depth + 1) for _ in range(depth + 1)]

    def extend(letter: int) -> bool:
        d = len(word)
        word.append(letter)
        cur = runs[d + 1]
        prev = runs[d]
        for p in range(spec.min_period, d + 1):
            r = prev[p] + 1 if word[d] == word[d - p] else 0
            cur[p] = r
            if r >= thresholds[p]:
                word.pop()
                return False
        return True

    def dfs() -> None:
        d = len(word)
        if d == depth:
            collected.append(Word(bytes(word), k))
            return
        extended = False
        for letter in range(k):
            if extend(letter):
                extended = True
                dfs()
                word.pop()
        if not extended and d > 0:
            collected.append(Word(bytes(word), k))

    dfs()
    collected.sort()
    return collected


def lemma_length_bound(target, source) -> int:
    """Least B such that source-free words of length < B suffice to certify
    that images of all source-free words are target-free: ceil(2b'/(b'-b)).
    """
    target_beta = _as_threshold(target)
    source_beta = _as_threshold(source)
    if target_beta <= source_beta:
        raise ValueError("target threshold must exceed source threshold")
    return math.ceil(2 * target_beta / (target_beta - source_beta))


def _as_threshold(value) -> Fraction:
    if isinstance(value, FreenessSpec):
        return value.threshold
    if isinstance(value, str):
        return FreenessSpec.parse(value).threshold
    return Fraction(value)


def parse_freeness_spec(text: str) -> FreenessSpec:
    return FreenessSpec.parse(text)
