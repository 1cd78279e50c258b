"""Shared fixtures and independent reference oracles.

The oracles here are deliberately naive re-implementations used to
cross-check the optimized library code: an all-periods repetition scan
and a candidate-image occurrence search. They share no code with the
package under test.
"""

from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


# --- naive repetition oracle -------------------------------------------------


def naive_forbidden_repetition(
    text: str, num: int, den: int, min_period: int = 1
) -> tuple[int, int, int] | None:
    """First (start, period, length) with period >= min_period and
    length/period > num/den, scanning every start and period directly."""
    n = len(text)
    for i in range(n):
        for p in range(1, n - i):
            j = i + p
            while j < n and text[j] == text[j - p]:
                j += 1
            length = j - i
            if length > p and p >= min_period and length * den > num * p:
                return (i, p, length)
    return None


# --- naive formula-occurrence oracle -----------------------------------------


def brute_occurs(text: str, fragments: list[tuple[int, ...]]) -> bool:
    """Occurrence test by enumerating candidate variable images.

    Every variable image must appear inside some fragment image, hence be
    a factor of the host word; so drawing candidates from the factor set
    is exhaustive. Assignments are extended one variable at a time, and a
    fragment is checked as soon as all its variables have images.
    """
    n = len(text)
    variables = sorted({v for frag in fragments for v in frag})
    factors_by_len: dict[int, list[str]] = {
        l: sorted({text[i : i + l] for i in range(n - l + 1)})
        for l in range(1, n + 1)
    }

    def feasible(lengths: dict[int, int]) -> bool:
        for frag in fragments:
            total = sum(lengths.get(v, 1) for v in frag)
            if total > n:
                return False
        return True

    def ready_fragments(assigned: set[int]) -> list[tuple[int, ...]]:
        return [f for f in fragments if set(f) <= assigned]

    def rec(idx: int, images: dict[int, str], checked: set[tuple[int, ...]]) -> bool:
        if idx == len(variables):
            return True
        v = variables[idx]
        for length in range(1, n + 1):
            lengths = {u: len(img) for u, img in images.items()}
            lengths[v] = length
            if not feasible(lengths):
                break
            for cand in factors_by_len[length]:
                images[v] = cand
                new_checked = set(checked)
                ok = True
                for frag in ready_fragments(set(images)):
                    if frag in new_checked:
                        continue
                    if "".join(images[u] for u in frag) not in text:
                        ok = False
                        break
                    new_checked.add(frag)
                if ok and rec(idx + 1, images, new_checked):
                    return True
                del images[v]
        return False

    return rec(0, {}, set())


# --- CLI runner ---------------------------------------------------------------


@pytest.fixture(scope="session")
def run_cli():
    def run(*args: str, stdin: str | None = None) -> subprocess.CompletedProcess:
        return subprocess.run(
            [sys.executable, "-m", "wordav.cli", *args],
            capture_output=True,
            text=True,
            input=stdin,
        )

    return run
