"""Integer kernels on monomial supports.

Each variable subset is a bitmask in a uint64, so these kernels cover rings
with at most 64 variables.  The same source runs either jitted by numba or as
plain Python over numpy arrays; set ``FADHM_NUMBA=0`` to force the fallback
(numba is also skipped when it is not installed).
"""

from __future__ import annotations

import os

import numpy as np

MAX_VARS = 64

_WANT_NUMBA = os.environ.get("FADHM_NUMBA", "1").lower() not in ("0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def _min_hitting_set(masks, nvars):
    """Size of the smallest variable set meeting every mask.

    Depth-first branch and bound: take the first mask not yet hit and branch
    on each of its variables.
    """
    m = masks.shape[0]
    if m == 0:
        return 0
    best = nvars + 1
    stack = np.zeros((nvars + 1) * 64 + 1, dtype=np.uint64)
    top = 1
    one = np.uint64(1)
    zero = np.uint64(0)
    while top > 0:
        top -= 1
        chosen = stack[top]
        size = 0
        x = chosen
        while x:
            x &= x - one
            size += 1
        if size >= best:
            continue
        pick = -1
        for k in range(m):
            if masks[k] & chosen == zero:
                pick = k
                break
        if pick < 0:
            best = size
            continue
        if size + 1 >= best:
            continue
        mk = masks[pick]
        for b in range(nvars):
            bit = one << np.uint64(b)
            if mk & bit:
                stack[top] = chosen | bit
                top += 1
    return best


def _pairwise_disjoint(masks):
    m = masks.shape[0]
    acc = np.uint64(0)
    for k in range(m):
        if masks[k] & acc:
            return False
        acc |= masks[k]
    return True


def _minimal_supports(masks):
    """Flags for masks that contain no other mask (duplicates keep the first)."""
    m = masks.shape[0]
    keep = np.ones(m, dtype=np.bool_)
    for a in range(m):
        for b in range(m):
            if a == b or not keep[b]:
                continue
            if masks[b] & masks[a] == masks[b]:
                if masks[a] != masks[b] or b < a:
                    keep[a] = False
                    break
    return keep


min_hitting_set_py = _min_hitting_set
pairwise_disjoint_py = _pairwise_disjoint
minimal_supports_py = _minimal_supports

if HAVE_NUMBA:
    min_hitting_set_jit = njit(cache=True)(_min_hitting_set)
    pairwise_disjoint_jit = njit(cache=True)(_pairwise_disjoint)
    minimal_supports_jit = njit(cache=True)(_minimal_supports)
    min_hitting_set = min_hitting_set_jit
    pairwise_disjoint = pairwise_disjoint_jit
    minimal_supports = minimal_supports_jit
else:
    min_hitting_set = min_hitting_set_py
    pairwise_disjoint = pairwise_disjoint_py
    minimal_supports = minimal_supports_py


def support_masks(exps) -> np.ndarray:
    """Bitmask of the support of each exponent tuple."""
    out = np.zeros(len(exps), dtype=np.uint64)
    for k, e in enumerate(exps):
        v = 0
        for j, a in enumerate(e):
            if a:
                v |= 1 << j
        out[k] = v
    return out


def monomial_ideal_dimension(exps, nvars: int) -> int:
    """Krull dimension of k[x]/(monomials): nvars minus the minimal hitting set."""
    if nvars > MAX_VARS:
        raise ValueError(f"kernels support at most {MAX_VARS} variables")
    masks = support_masks(exps)
    if np.any(masks == 0):
        return -1
    if masks.shape[0] == 0:
        return nvars
    masks = masks[minimal_supports(masks)]
    return nvars - int(min_hitting_set(masks, nvars))


def dimension_bruteforce(exps, nvars: int) -> int:
    """Vectorised enumeration of every variable subset; nvars <= 20 only."""
    if nvars > 20:
        raise ValueError("brute force limited to 20 variables")
    masks = support_masks(exps)
    if np.any(masks == 0):
        return -1
    subsets = np.arange(1 << nvars, dtype=np.uint64)
    ok = np.ones(subsets.shape[0], dtype=bool)
    for mk in masks:
        ok &= (subsets & mk) != mk
    sizes = np.array([bin(int(s)).count("1") for s in subsets[ok]], dtype=np.int64)
    return int(sizes.max()) if sizes.size else -1
