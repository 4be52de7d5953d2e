"""Hot numerical kernels, numba-compiled with a pure-numpy fallback.

Set INGLETON_NO_NUMBA=1 to force the numpy path. Both paths compute the
same quantities; only summation order (and therefore the last couple of
ulps) differs. Public names are bound once at import time.

Masses are int64 numerators over a common denominator D supplied by the
caller, so every entropy here is H = log2(D) - (sum m*log2(m)) / D.
"""

from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("INGLETON_NO_NUMBA", "")
NUMBA_REQUESTED = _flag in ("", "0")

try:
    if not NUMBA_REQUESTED:
        raise ImportError("numba disabled by INGLETON_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    njit = None
    HAVE_NUMBA = False


# ---------------------------------------------------------------- group_reduce

def _group_reduce_np(keys, masses):
    """Group int64 masses by key.

    Returns (group_count, sum of m*log2(m) over group totals, max group
    total, min group total).
    """
    order = np.argsort(keys, kind="stable")
    k = keys[order]
    m = masses[order]
    starts = np.flatnonzero(np.r_[True, k[1:] != k[:-1]])
    totals = np.add.reduceat(m, starts)
    s = float(np.sum(totals * np.log2(totals)))
    return len(totals), s, int(totals.max()), int(totals.min())


def _group_reduce_loop(keys, masses):
    order = np.argsort(keys)
    n = keys.shape[0]
    groups = 0
    acc = 0.0
    comp = 0.0
    gmax = np.int64(0)
    gmin = np.int64(0)
    cur = np.int64(0)
    curkey = np.int64(0)
    started = False
    for idx in range(n):
        i = order[idx]
        key = keys[i]
        if started and key == curkey:
            cur += masses[i]
            continue
        if started:
            groups += 1
            if cur > gmax:
                gmax = cur
            if gmin == 0 or cur < gmin:
                gmin = cur
            term = cur * np.log2(cur * 1.0)
            y = term - comp
            t = acc + y
            comp = (t - acc) - y
            acc = t
        curkey = key
        cur = masses[i]
        started = True
    if started:
        groups += 1
        if cur > gmax:
            gmax = cur
        if gmin == 0 or cur < gmin:
            gmin = cur
        term = cur * np.log2(cur * 1.0)
        y = term - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
    return groups, acc, gmax, gmin


# ---------------------------------------------------------------- count_edges

def _count_edges_np(ex, ey, x_mask, y_mask):
    """Edges with both endpoints selected."""
    return int(np.count_nonzero(x_mask[ex] & y_mask[ey]))


def _count_edges_loop(ex, ey, x_mask, y_mask):
    c = 0
    for i in range(ex.shape[0]):
        if x_mask[ex[i]] and y_mask[ey[i]]:
            c += 1
    return c


# ------------------------------------------------------------ exhaustive scan
#
# Deterministic kernels A = f(edge), B = g(edge) over alphabets of sizes
# ka, kb; the joint is uniform on edges. With S(key) = sum over groups of
# c*log2(c) of edge counts sharing the key,
#
#   Ing(f, g) = (S_AB - S_XA - S_YA - S_XB - S_YB) / E + log2(d1*d2)
#
# because S_XY, S_XYA, S_XYB vanish (edges are distinct) and the uniform
# marginals contribute the constant. Scan minimizes over all (f, g).

def _exhaustive_scan_np(digits_a, digits_b, ex, ey, nx, ny, const_term):
    na, e_count = digits_a.shape
    nb = digits_b.shape[0]
    ka = int(digits_a.max()) + 1 if digits_a.size else 1
    kb = int(digits_b.max()) + 1 if digits_b.size else 1
    log_tab = np.zeros(e_count + 1)
    counts_range = np.arange(1, e_count + 1)
    log_tab[1:] = counts_range * np.log2(counts_range)

    def s_table(digits, base, side, width):
        n_rows = digits.shape[0]
        keys = side[None, :] * base + digits
        offs = np.arange(n_rows, dtype=np.int64)[:, None] * (width * base)
        flat = np.bincount((keys + offs).ravel(), minlength=n_rows * width * base)
        return log_tab[flat.reshape(n_rows, width * base)].sum(axis=1)

    fa = s_table(digits_a, ka, ex, nx) + s_table(digits_a, ka, ey, ny)
    fb = s_table(digits_b, kb, ex, nx) + s_table(digits_b, kb, ey, ny)

    best = np.inf
    best_i = 0
    best_j = 0
    offs = np.arange(nb, dtype=np.int64)[:, None] * (ka * kb)
    for i in range(na):
        keys = digits_a[i][None, :] * kb + digits_b
        flat = np.bincount((keys + offs).ravel(), minlength=nb * ka * kb)
        s_ab = log_tab[flat.reshape(nb, ka * kb)].sum(axis=1)
        vals = (s_ab - fa[i] - fb) / e_count + const_term
        j = int(np.argmin(vals))
        if vals[j] < best:
            best = float(vals[j])
            best_i = i
            best_j = j
    return best, best_i, best_j


def _exhaustive_scan_loop(digits_a, digits_b, ex, ey, nx, ny, const_term):
    na, e_count = digits_a.shape
    nb = digits_b.shape[0]
    ka = 1
    for i in range(na):
        for t in range(e_count):
            if digits_a[i, t] + 1 > ka:
                ka = digits_a[i, t] + 1
    kb = 1
    for j in range(nb):
        for t in range(e_count):
            if digits_b[j, t] + 1 > kb:
                kb = digits_b[j, t] + 1

    log_tab = np.zeros(e_count + 1)
    for c in range(1, e_count + 1):
        log_tab[c] = c * np.log2(c * 1.0)

    fa = np.zeros(na)
    cnt_x = np.zeros(nx * ka, np.int64)
    cnt_y = np.zeros(ny * ka, np.int64)
    for i in range(na):
        s = 0.0
        for t in range(e_count):
            cnt_x[ex[t] * ka + digits_a[i, t]] += 1
            cnt_y[ey[t] * ka + digits_a[i, t]] += 1
        for t in range(e_count):
            kx = ex[t] * ka + digits_a[i, t]
            if cnt_x[kx] > 0:
                s += log_tab[cnt_x[kx]]
                cnt_x[kx] = 0
            ky = ey[t] * ka + digits_a[i, t]
            if cnt_y[ky] > 0:
                s += log_tab[cnt_y[ky]]
                cnt_y[ky] = 0
        fa[i] = s

    fb = np.zeros(nb)
    cnt_x2 = np.zeros(nx * kb, np.int64)
    cnt_y2 = np.zeros(ny * kb, np.int64)
    for j in range(nb):
        s = 0.0
        for t in range(e_count):
            cnt_x2[ex[t] * kb + digits_b[j, t]] += 1
            cnt_y2[ey[t] * kb + digits_b[j, t]] += 1
        for t in range(e_count):
            kx = ex[t] * kb + digits_b[j, t]
            if cnt_x2[kx] > 0:
                s += log_tab[cnt_x2[kx]]
                cnt_x2[kx] = 0
            ky = ey[t] * kb + digits_b[j, t]
            if cnt_y2[ky] > 0:
                s += log_tab[cnt_y2[ky]]
                cnt_y2[ky] = 0
        fb[j] = s

    best = np.inf
    best_i = 0
    best_j = 0
    cnt_ab = np.zeros(ka * kb, np.int64)
    for i in range(na):
        for j in range(nb):
            for t in range(e_count):
                cnt_ab[digits_a[i, t] * kb + digits_b[j, t]] += 1
            s = 0.0
            for t in range(e_count):
                key = digits_a[i, t] * kb + digits_b[j, t]
                if cnt_ab[key] > 0:
                    s += log_tab[cnt_ab[key]]
                    cnt_ab[key] = 0
            val = (s - fa[i] - fb[j]) / e_count + const_term
            if val < best:
                best = val
                best_i = i
                best_j = j
    return best, best_i, best_j


# ---------------------------------------------------------- weighted kernels
#
# Randomized kernels: row e of side A carries int64 weights wa[e, :] summing
# to t_grid, likewise wb. Atom (e, a, b) has mass wa[e,a]*wb[e,b] over
# D = E * t_grid**2. The (X, Y) marginal stays uniform on edges, so
# I(X:Y) is the constant passed in by the caller.

def _masses_entropy_np(masses, d_total):
    nz = masses[masses > 0]
    return float(np.log2(d_total) - np.sum(nz * np.log2(nz)) / d_total)


def _kernel_pair_ing_np(ex, ey, wa, wb, nx, ny, t_grid, i_xy):
    e_count, ka = wa.shape
    kb = wb.shape[1]
    d_total = e_count * t_grid * t_grid

    row_a = wa * t_grid
    row_b = wb * t_grid
    m_a = row_a.sum(axis=0)
    m_b = row_b.sum(axis=0)
    m_ab = np.einsum("ea,eb->ab", wa, wb)
    m_xa = np.zeros((nx, ka), np.int64)
    np.add.at(m_xa, ex, row_a)
    m_ya = np.zeros((ny, ka), np.int64)
    np.add.at(m_ya, ey, row_a)
    m_xb = np.zeros((nx, kb), np.int64)
    np.add.at(m_xb, ex, row_b)
    m_yb = np.zeros((ny, kb), np.int64)
    np.add.at(m_yb, ey, row_b)

    h = lambda m: _masses_entropy_np(m.ravel(), d_total)
    h_a = h(m_a)
    h_b = h(m_b)
    h_xya = h(row_a)
    h_xyb = h(row_b)
    return (
        (h(m_xa) + h(m_ya) - h_xya - h_a)
        + (h(m_xb) + h(m_yb) - h_xyb - h_b)
        + (h_a + h_b - h(m_ab))
        - i_xy
    )


def _kernel_pair_ing_loop(ex, ey, wa, wb, nx, ny, t_grid, i_xy):
    e_count, ka = wa.shape
    kb = wb.shape[1]
    d_total = e_count * t_grid * t_grid

    m_a = np.zeros(ka, np.int64)
    m_b = np.zeros(kb, np.int64)
    m_ab = np.zeros(ka * kb, np.int64)
    m_xa = np.zeros(nx * ka, np.int64)
    m_ya = np.zeros(ny * ka, np.int64)
    m_xb = np.zeros(nx * kb, np.int64)
    m_yb = np.zeros(ny * kb, np.int64)
    m_xya = np.zeros(e_count * ka, np.int64)
    m_xyb = np.zeros(e_count * kb, np.int64)

    for e in range(e_count):
        x = ex[e]
        y = ey[e]
        for a in range(ka):
            w = wa[e, a]
            if w == 0:
                continue
            wt = w * t_grid
            m_a[a] += wt
            m_xa[x * ka + a] += wt
            m_ya[y * ka + a] += wt
            m_xya[e * ka + a] = wt
            for b in range(kb):
                v = wb[e, b]
                if v != 0:
                    m_ab[a * kb + b] += w * v
        for b in range(kb):
            v = wb[e, b]
            if v == 0:
                continue
            vt = v * t_grid
            m_b[b] += vt
            m_xb[x * kb + b] += vt
            m_yb[y * kb + b] += vt
            m_xyb[e * kb + b] = vt

    def h(arr):
        acc = 0.0
        comp = 0.0
        for i in range(arr.shape[0]):
            m = arr[i]
            if m > 0:
                term = m * np.log2(m * 1.0)
                y = term - comp
                t = acc + y
                comp = (t - acc) - y
                acc = t
        return np.log2(d_total * 1.0) - acc / d_total

    h_a = h(m_a)
    h_b = h(m_b)
    return (
        (h(m_xa) + h(m_ya) - h(m_xya) - h_a)
        + (h(m_xb) + h(m_yb) - h(m_xyb) - h_b)
        + (h_a + h_b - h(m_ab))
        - i_xy
    )


if HAVE_NUMBA:
    group_reduce = njit(cache=True)(_group_reduce_loop)
    count_edges = njit(cache=True)(_count_edges_loop)
    exhaustive_scan = njit(cache=True)(_exhaustive_scan_loop)
    kernel_pair_ing = njit(cache=True)(_kernel_pair_ing_loop)
else:
    group_reduce = _group_reduce_np
    count_edges = _count_edges_np
    exhaustive_scan = _exhaustive_scan_np
    kernel_pair_ing = _kernel_pair_ing_np


def backend_name() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
