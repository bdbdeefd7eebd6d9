"""Depth-first enumeration kernels.

Direction codes follow :func:`sawbound.walk.step_from_code`. Occupancy is a
flat ``uint8`` array over the box ``[-L, L]^d`` with ``L`` the maximum length,
so membership tests are a single index lookup.
"""

import numpy as np

from ._jit import optional_njit


@optional_njit(cache=True)
def _lattice(d, max_len):
    side = 2 * max_len + 1
    strides = np.empty(d, np.int64)
    s = 1
    for a in range(d):
        strides[a] = s
        s *= side
    origin = 0
    for a in range(d):
        origin += max_len * strides[a]
    offsets = np.empty(2 * d, np.int64)
    for a in range(d):
        offsets[2 * a] = strides[a]
        offsets[2 * a + 1] = -strides[a]
    return np.zeros(s, np.uint8), origin, offsets


@optional_njit(nogil=True, cache=True)
def count_extensions(d, max_len, prefixes, c_out, bh_out):
    """Count self-avoiding extensions of each row of ``prefixes``.

    Every row must itself be self-avoiding. Walks of length strictly greater
    than the prefix length ``p`` and at most ``max_len`` are added to
    ``c_out[n]``, and bridges among them to ``bh_out[n, end_height]``. An
    empty prefix array with zero columns is not allowed; use
    :func:`count_from_origin` for the head of the tree.
    """
    occ, origin, offsets = _lattice(d, max_len)
    hi_up = 2 * (d - 1)
    hi_down = hi_up + 1
    ndir = 2 * d
    n_pref, p = prefixes.shape

    pos = np.empty(max_len + 1, np.int64)
    height = np.empty(max_len + 1, np.int64)
    top = np.empty(max_len + 1, np.int64)
    alive = np.empty(max_len + 1, np.bool_)
    nxt = np.empty(max_len + 1, np.int64)

    for t in range(n_pref):
        pos[0] = origin
        height[0] = 0
        top[0] = 0
        alive[0] = True
        occ[origin] = 1
        for k in range(p):
            code = prefixes[t, k]
            pos[k + 1] = pos[k] + offsets[code]
            occ[pos[k + 1]] = 1
            h = height[k]
            if code == hi_up:
                h += 1
            elif code == hi_down:
                h -= 1
            height[k + 1] = h
            top[k + 1] = max(top[k], h)
            alive[k + 1] = alive[k] and h > 0

        depth = p
        nxt[depth] = 0
        while depth >= p:
            if depth == max_len or nxt[depth] == ndir:
                if depth > p:
                    occ[pos[depth]] = 0
                depth -= 1
                continue
            code = nxt[depth]
            nxt[depth] += 1
            site = pos[depth] + offsets[code]
            if occ[site]:
                continue
            h = height[depth]
            if code == hi_up:
                h += 1
            elif code == hi_down:
                h -= 1
            depth += 1
            pos[depth] = site
            occ[site] = 1
            height[depth] = h
            top[depth] = max(top[depth - 1], h)
            # once the height drops to <= 0 nothing below can be a bridge
            alive[depth] = alive[depth - 1] and h > 0
            c_out[depth] += 1
            if alive[depth] and h == top[depth]:
                bh_out[depth, h] += 1
            nxt[depth] = 0

        for k in range(p + 1):
            occ[pos[k]] = 0


@optional_njit(cache=True)
def count_from_origin(d, max_len, c_out, bh_out):
    """Full census from the empty walk, including the length-0 walk itself."""
    c_out[0] += 1
    bh_out[0, 0] += 1
    if max_len > 0:
        empty = np.zeros((1, 0), np.int8)
        count_extensions(d, max_len, empty, c_out, bh_out)


@optional_njit(cache=True)
def list_prefixes(d, depth, out):
    """Write every self-avoiding walk of length ``depth`` into the rows of ``out``.

    ``out`` must have exactly ``c_depth`` rows; returns the number written.
    Rows come out in lexicographic order of direction codes.
    """
    occ, origin, offsets = _lattice(d, depth)
    ndir = 2 * d
    pos = np.empty(depth + 1, np.int64)
    codes = np.empty(depth + 1, np.int64)
    nxt = np.empty(depth + 1, np.int64)
    pos[0] = origin
    occ[origin] = 1
    level = 0
    nxt[0] = 0
    row = 0
    if depth == 0:
        return 1
    while level >= 0:
        if level == depth:
            for k in range(depth):
                out[row, k] = codes[k]
            row += 1
            occ[pos[level]] = 0
            level -= 1
            continue
        if nxt[level] == ndir:
            if level > 0:
                occ[pos[level]] = 0
            level -= 1
            continue
        code = nxt[level]
        nxt[level] += 1
        site = pos[level] + offsets[code]
        if occ[site]:
            continue
        codes[level] = code
        level += 1
        pos[level] = site
        occ[site] = 1
        nxt[level] = 0
    return row
