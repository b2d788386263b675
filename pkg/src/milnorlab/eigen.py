"""Complex Schur decomposition for small dense matrices.

Householder reduction to upper Hessenberg form followed by implicit
single-shift QR sweeps (Wilkinson shift, exceptional shifts on stagnation).
Eigenvalues can be reordered along the diagonal with Givens swaps, which keeps
the leading Schur vectors spanning an invariant subspace.  Sized for the
matrices this package produces (a few dozen rows, at most ~100).
"""

from __future__ import annotations

import numpy as np

from .errors import IllConditioned

_EPS = np.finfo(float).eps


def hessenberg(a):
    """Return ``(H, Q)`` with ``a = Q @ H @ Q^H`` and ``H`` upper Hessenberg."""
    h = np.array(a, dtype=complex)
    n = h.shape[0]
    q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        h[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, :])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h, q


def balance(a, iters=100):
    """Diagonal scaling by powers of two: returns ``(b, d)`` with ``b = diag(d)^-1 a diag(d)``."""
    b = np.array(a, dtype=complex)
    n = b.shape[0]
    d = np.ones(n)
    for _ in range(iters):
        done = True
        for i in range(n):
            c = np.abs(b[:, i]).sum() - abs(b[i, i])
            r = np.abs(b[i, :]).sum() - abs(b[i, i])
            if c == 0.0 or r == 0.0:
                continue
            f = 1.0
            s = c + r
            while c < r / 2.0:
                c *= 2.0
                r /= 2.0
                f *= 2.0
            while c >= r * 2.0:
                c /= 2.0
                r *= 2.0
                f /= 2.0
            if c + r < 0.95 * s:
                done = False
                d[i] *= f
                b[:, i] *= f
                b[i, :] /= f
        if done:
            break
    return b, d


def givens(x, y):
    """``(c, s)`` with real ``c`` so that ``[[c, s], [-conj(s), c]] @ [x, y] = [r, 0]``."""
    ax = abs(x)
    if y == 0:
        return 1.0, 0j
    if ax == 0:
        return 0.0, 1 + 0j
    r = np.hypot(ax, abs(y))
    return ax / r, (x / ax) * np.conj(y) / r


def _rotate(t, z, k, c, s, row_start=0, row_stop=None):
    """Similarity ``t <- G t G^H`` acting on indices k, k+1; ``z <- z G^H``."""
    n = t.shape[0]
    rk = t[k, row_start:].copy()
    rk1 = t[k + 1, row_start:]
    t[k, row_start:] = c * rk + s * rk1
    t[k + 1, row_start:] = -np.conj(s) * rk + c * rk1
    stop = n if row_stop is None else row_stop
    ck = t[:stop, k].copy()
    ck1 = t[:stop, k + 1]
    t[:stop, k] = c * ck + np.conj(s) * ck1
    t[:stop, k + 1] = -s * ck + c * ck1
    if z is not None:
        zk = z[:, k].copy()
        zk1 = z[:, k + 1]
        z[:, k] = c * zk + np.conj(s) * zk1
        z[:, k + 1] = -s * zk + c * zk1


def _wilkinson(a, b, c, d):
    half = (a - d) / 2.0
    disc = np.sqrt(half * half + b * c)
    m1 = (a + d) / 2.0 + disc
    m2 = (a + d) / 2.0 - disc
    return m1 if abs(m1 - d) < abs(m2 - d) else m2


def schur(a, max_sweeps_per_eig=60):
    """Complex Schur form: ``a = Z @ T @ Z^H`` with ``T`` upper triangular."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if n == 0:
        return a.copy(), np.eye(0, dtype=complex)
    t, z = hessenberg(a)
    if n == 1:
        return t, z
    scale = np.abs(t).max() or 1.0
    hi = n - 1
    its = 0
    total = 0
    while hi > 0:
        lo = hi
        while lo > 0:
            s = abs(t[lo - 1, lo - 1]) + abs(t[lo, lo])
            if s == 0.0:
                if lo >= 2:
                    s += abs(t[lo - 1, lo - 2])
                if lo + 1 < n:
                    s += abs(t[lo + 1, lo])
                if s == 0.0:
                    s = scale
            if abs(t[lo, lo - 1]) <= _EPS * s:
                t[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            its = 0
            continue
        its += 1
        total += 1
        if its > max_sweeps_per_eig:
            raise IllConditioned("QR iteration failed to converge")
        if its % 11 == 0:
            mu = t[hi, hi] + abs(t[hi, hi - 1]) * (0.75 + 0.4375j)
        else:
            mu = _wilkinson(t[hi - 1, hi - 1], t[hi - 1, hi], t[hi, hi - 1], t[hi, hi])
        x = t[lo, lo] - mu
        y = t[lo + 1, lo]
        for k in range(lo, hi):
            if k > lo:
                x = t[k, k - 1]
                y = t[k + 1, k - 1]
            c, s = givens(x, y)
            _rotate(t, z, k, c, s, row_start=max(k - 1, 0), row_stop=min(k + 3, n))
            if k > lo:
                t[k + 1, k - 1] = 0.0
    return np.triu(t), z


def swap_adjacent(t, z, k):
    """Exchange diagonal entries ``k`` and ``k+1`` of the triangular ``t`` in place."""
    a, b, c = t[k, k], t[k, k + 1], t[k + 1, k + 1]
    if a == c and b == 0:
        return
    cs, sn = givens(b, c - a)
    _rotate(t, z, k, cs, sn, row_start=k)
    t[k + 1, k] = 0.0


def reorder_schur(t, z, order):
    """Permute the diagonal of ``t`` so that old index ``order[p]`` lands at position ``p``."""
    t = t.copy()
    z = z.copy()
    labels = list(range(t.shape[0]))
    for p, want in enumerate(order):
        q = labels.index(want)
        while q > p:
            swap_adjacent(t, z, q - 1)
            labels[q - 1], labels[q] = labels[q], labels[q - 1]
            q -= 1
    return t, z


def eigvals(a):
    t, _ = schur(balance(a)[0])
    return np.diag(t).copy()


def companion_roots(coeffs):
    """Roots of ``sum coeffs[k] x^k`` (lowest degree first) from its companion matrix."""
    c = [complex(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    deg = len(c) - 1
    if deg < 1:
        return np.zeros(0, dtype=complex)
    lead = c[-1]
    m = np.zeros((deg, deg), dtype=complex)
    m[1:, :-1] = np.eye(deg - 1)
    m[:, -1] = [-x / lead for x in c[:-1]]
    return eigvals(m)
