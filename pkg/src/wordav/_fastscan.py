"""Compiled depth-first scan over free words with incremental image checking.

The kernel enumerates source words (pruned by a run-table freeness check)
and, for each appended letter, extends the image of a uniform morphism and
updates per-period match runs incrementally. It stops at the first image
violation, at the node cap, or after exhausting the tree.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .freeness import FreenessSpec

INFINITE_RUN = 2**30

STATUS_CLEAN = 0
STATUS_VIOLATION = 1
STATUS_CAPPED = 2


def run_thresholds(spec: FreenessSpec, max_period: int) -> np.ndarray:
    """thr[p] = least forbidden match run for period p (huge below min_period)."""
    thr = np.full(max_period + 1, INFINITE_RUN, np.int64)
    for p in range(spec.min_period, max_period + 1):
        thr[p] = spec.run_threshold(p)
    return thr


def image_period_limit(spec: FreenessSpec, image_len: int) -> int:
    """Largest period whose shortest forbidden repetition fits in image_len."""
    limit = 0
    for p in range(spec.min_period, image_len):
        if p + spec.run_threshold(p) <= image_len:
            limit = p
    return limit


@njit(cache=True)
def _scan(images, q, max_len, src_thr, img_thr, img_min_p, node_cap):  # pragma: no cover
    k = images.shape[0]
    src = np.zeros(max_len, np.int64)
    img = np.zeros(max_len * q, np.uint8)
    p_max = img_thr.shape[0] - 1
    runs_src = np.zeros((max_len + 1, max_len + 1), np.int64)
    runs_img = np.zeros((max_len + 1, p_max + 1), np.int64)
    counts = np.zeros(max_len + 1, np.int64)
    next_letter = np.zeros(max_len + 1, np.int64)
    nodes = 0
    status = STATUS_CLEAN
    wit_period = -1
    wit_end = -1
    wit_len = 0
    d = 0
    while d >= 0:
        if next_letter[d] >= k:
            d -= 1
            continue
        c = next_letter[d]
        next_letter[d] += 1
        src[d] = c
        ok = True
        for p in range(1, d + 1):
            if src[d] == src[d - p]:
                r = runs_src[d, p] + 1
            else:
                r = 0
            runs_src[d + 1, p] = r
            if r >= src_thr[p]:
                ok = False
                break
        if not ok:
            continue
        for p in range(img_min_p, p_max + 1):
            runs_img[d + 1, p] = runs_img[d, p]
        base = d * q
        violation = -1
        for j in range(q):
            t = base + j
            img[t] = images[c, j]
            hi = t if t < p_max else p_max
            for p in range(img_min_p, hi + 1):
                if img[t] == img[t - p]:
                    r = runs_img[d + 1, p] + 1
                else:
                    r = 0
                runs_img[d + 1, p] = r
                if r >= img_thr[p]:
                    violation = p
                    wit_end = t
                    break
            if violation >= 0:
                break
        if violation >= 0:
            status = STATUS_VIOLATION
            wit_period = violation
            wit_len = d + 1
            break
        nodes += 1
        counts[d + 1] += 1
        if node_cap > 0 and nodes >= node_cap:
            status = STATUS_CAPPED
            wit_len = d + 1
            break
        if d + 1 < max_len:
            d += 1
            next_letter[d] = 0
    return status, nodes, counts, wit_period, wit_end, wit_len, src


def scan_images(
    morphism_rows: list[bytes],
    max_len: int,
    source_spec: FreenessSpec,
    target_spec: FreenessSpec,
    node_cap: int = 0,
) -> dict:
    """Check target-freeness of images of all source-free words up to max_len.

    Returns a dict with status, node/length counts, and (on violation) the
    offending source word plus the period and end position in its image.
    """
    widths = {len(row) for row in morphism_rows}
    if len(widths) != 1:
        raise ValueError("image scan requires a uniform morphism")
    q = widths.pop()
    images = np.array([list(row) for row in morphism_rows], np.uint8)
    src_thr = run_thresholds(source_spec, max_len)
    p_max = image_period_limit(target_spec, max_len * q)
    p_max = max(p_max, target_spec.min_period)
    img_thr = run_thresholds(target_spec, p_max)
    status, nodes, counts, wit_period, wit_end, wit_len, src = _scan(
        images,
        q,
        max_len,
        src_thr,
        img_thr,
        target_spec.min_period,
        node_cap,
    )
    result = {
        "status": int(status),
        "nodes": int(nodes),
        "counts": [int(x) for x in counts],
        "max_len": max_len,
        "period_limit": int(p_max),
    }
    if status == STATUS_VIOLATION:
        result["witness_source"] = bytes(int(x) for x in src[:wit_len])
        result["witness_period"] = int(wit_period)
        result["witness_end"] = int(wit_end)
    if status == STATUS_CAPPED:
        result["last_length"] = int(wit_len)
    return result
