"""Exact linear algebra over the chain rings Z/ell^k.

Matrices are numpy int64 arrays with entries reduced into [0, ell^k).
All arithmetic is exact; ell^k is kept small enough that int64 products
cannot overflow (see gring.build_ring for the guard).
"""

from __future__ import annotations

import numpy as np


def valuation(x: int, ell: int, k: int) -> int:
    """ell-adic valuation of x as an element of Z/ell^k; valuation(0) = k."""
    x = int(x) % ell**k
    if x == 0:
        return k
    v = 0
    while x % ell == 0:
        x //= ell
        v += 1
    return v


def unit_part(x: int, ell: int, k: int) -> int:
    """Write x = u * ell^v with u a unit; return u (u = 1 for x = 0)."""
    x = int(x) % ell**k
    if x == 0:
        return 1
    while x % ell == 0:
        x //= ell
    return x


def _as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2:
        raise ValueError("expected a 2-d array")
    return m


def howell_form(a, ell: int, k: int) -> np.ndarray:
    """Canonical Howell form of the row span of a over Z/ell^k.

    Rows of the result are a canonical generating set of the span:
    pivot columns strictly increase, each pivot entry is exactly ell^v,
    entries above a pivot are reduced mod that pivot, and for every
    pivot with v > 0 the multiple ell^(k-v) * row was fed back into the
    elimination so the span property holds. Two inputs have the same
    row span iff their Howell forms are identical arrays.
    """
    q = ell**k
    a = _as_matrix(a) % q
    if k == 1:
        return _rref_mod_prime(a, ell)
    ncols = a.shape[1]
    pool = [row.copy() for row in a if row.any()]
    done: list[np.ndarray] = []
    for col in range(ncols):
        live = [i for i, r in enumerate(pool) if r[col] != 0]
        if not live:
            continue
        best = min(live, key=lambda i: valuation(pool[i][col], ell, k))
        piv = pool.pop(best)
        v = valuation(piv[col], ell, k)
        pl = ell**v
        u = int(piv[col]) // pl
        piv = (piv * pow(u, -1, q)) % q
        for r in pool:
            if r[col] != 0:
                r -= (int(r[col]) // pl) * piv
                r %= q
        if v > 0:
            extra = (piv * (q // pl)) % q
            if extra.any():
                pool.append(extra)
        pool = [r for r in pool if r.any()]
        done.append(piv)
    # reduce entries above each pivot modulo the pivot
    for j in range(1, len(done)):
        piv = done[j]
        col = int(np.nonzero(piv)[0][0])
        pl = ell ** valuation(piv[col], ell, k)
        for i in range(j):
            x = int(done[i][col])
            if x >= pl:
                done[i] = (done[i] - (x // pl) * piv) % q
    if not done:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.array(done, dtype=np.int64)


def _rref_mod_prime(a: np.ndarray, ell: int) -> np.ndarray:
    """Reduced row echelon form mod a prime; equals the Howell form at k = 1."""
    m = a % ell
    m = m[m.any(axis=1)]
    nrows, ncols = m.shape
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(m[r:, col])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        row = m[r] * pow(int(m[r, col]), ell - 2, ell) % ell
        m[r] = row
        hit = np.nonzero(m[:, col])[0]
        hit = hit[hit != r]
        if hit.size:
            m[hit] = (m[hit] - np.outer(m[hit, col], row)) % ell
        r += 1
    return m[:r]


def span_invariants(h: np.ndarray, ell: int, k: int) -> tuple[int, ...]:
    """Cyclic invariants of a row span given in Howell form.

    Returns exponents (e_1, e_2, ...) sorted descending with the span
    isomorphic, as an abelian group, to the direct sum of Z/ell^e_i.
    """
    if k == 1:
        return (1,) * sum(1 for row in h if row.any())
    out = []
    for row in h:
        nz = np.nonzero(row)[0]
        if len(nz) == 0:
            continue
        out.append(k - valuation(row[nz[0]], ell, k))
    return tuple(sorted(out, reverse=True))


def span_order_log(h: np.ndarray, ell: int, k: int) -> int:
    """log_ell of the number of elements in the row span (Howell form input)."""
    return sum(span_invariants(h, ell, k))


def smith_normal_form(a, ell: int, k: int):
    """Diagonalize a over Z/ell^k: returns (d, u, v) with u @ a @ v = d mod ell^k.

    u and v are invertible and d is diagonal with entries ell^{a_t},
    a_t nondecreasing (ell^k, i.e. 0, counts as exponent k).
    """
    q = ell**k
    d = _as_matrix(a) % q
    d = d.copy()
    m, n = d.shape
    u = np.eye(m, dtype=np.int64)
    v = np.eye(n, dtype=np.int64)
    for t in range(min(m, n)):
        sub = d[t:, t:]
        if not sub.any():
            break
        vals = np.full(sub.shape, k + 1, dtype=np.int64)
        nz = np.nonzero(sub)
        for i, j in zip(*nz):
            vals[i, j] = valuation(sub[i, j], ell, k)
        i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
        i, j = i + t, j + t
        if i != t:
            d[[t, i]] = d[[i, t]]
            u[[t, i]] = u[[i, t]]
        if j != t:
            d[:, [t, j]] = d[:, [j, t]]
            v[:, [t, j]] = v[:, [j, t]]
        pv = valuation(d[t, t], ell, k)
        pl = ell**pv
        w = pow(int(d[t, t]) // pl, -1, q)
        d[t] = (d[t] * w) % q
        u[t] = (u[t] * w) % q
        for i in range(m):
            if i != t and d[i, t] != 0:
                f = int(d[i, t]) // pl
                d[i] = (d[i] - f * d[t]) % q
                u[i] = (u[i] - f * u[t]) % q
        for j in range(n):
            if j != t and d[t, j] != 0:
                f = int(d[t, j]) // pl
                d[:, j] = (d[:, j] - f * d[:, t]) % q
                v[:, j] = (v[:, j] - f * v[:, t]) % q
    return d, u, v


def kernel_generators(a, ell: int, k: int) -> list[tuple[np.ndarray, int]]:
    """Independent cyclic generators of {x : a @ x = 0 over Z/ell^k}.

    Returns [(vector, e)] with the kernel the internal direct sum of the
    cyclic groups generated by the vectors, of orders ell^e. An empty
    constraint matrix (zero rows) yields the full ambient module.
    """
    a = _as_matrix(a)
    m, n = a.shape
    q = ell**k
    if m == 0 or not (a % q).any():
        return [(np.eye(n, dtype=np.int64)[i], k) for i in range(n)]
    d, _, v = smith_normal_form(a, ell, k)
    gens = []
    for i in range(n):
        e = valuation(d[i, i], ell, k) if i < min(m, n) else k
        if e > 0:
            gens.append(((v[:, i] * ell ** (k - e)) % q, e))
    return gens


def solve_mod(a, b, ell: int, k: int):
    """One solution x of a @ x = b over Z/ell^k, or None if inconsistent."""
    a = _as_matrix(a)
    q = ell**k
    b = np.asarray(b, dtype=np.int64) % q
    m, n = a.shape
    if m == 0:
        return np.zeros(n, dtype=np.int64)
    d, u, v = smith_normal_form(a, ell, k)
    c = (u @ b) % q
    y = np.zeros(n, dtype=np.int64)
    for i in range(m):
        if i < n:
            e = valuation(d[i, i], ell, k)
            pl = ell**e
            if int(c[i]) % pl != 0:
                return None
            y[i] = (int(c[i]) // pl) % q if e < k else 0
            if e == k and c[i] != 0:
                return None
        elif c[i] != 0:
            return None
    return (v @ y) % q


def invert_unit_matrix(a, ell: int, k: int) -> np.ndarray:
    """Inverse of a square matrix whose determinant is a unit mod ell^k."""
    q = ell**k
    a = _as_matrix(a) % q
    n = a.shape[0]
    work = a.copy()
    inv = np.eye(n, dtype=np.int64)
    for col in range(n):
        piv = None
        for i in range(col, n):
            if work[i, col] % ell != 0:
                piv = i
                break
        if piv is None:
            raise ValueError("matrix is not invertible mod ell^k")
        if piv != col:
            work[[col, piv]] = work[[piv, col]]
            inv[[col, piv]] = inv[[piv, col]]
        w = pow(int(work[col, col]), -1, q)
        work[col] = (work[col] * w) % q
        inv[col] = (inv[col] * w) % q
        for i in range(n):
            if i != col and work[i, col] != 0:
                f = int(work[i, col])
                work[i] = (work[i] - f * work[col]) % q
                inv[i] = (inv[i] - f * inv[col]) % q
    return inv


def nullspace_mod_prime(a, ell: int) -> np.ndarray:
    """Basis (rows) of the kernel of a over the prime field F_ell."""
    gens = kernel_generators(a, ell, 1)
    if not gens:
        return np.zeros((0, _as_matrix(a).shape[1]), dtype=np.int64)
    return np.array([g for g, _ in gens], dtype=np.int64)


def rank_mod_prime(a, ell: int) -> int:
    a = _as_matrix(a)
    return a.shape[1] - len(kernel_generators(a, ell, 1))


def row_space_contains(h: np.ndarray, x, ell: int, k: int) -> bool:
    """Membership test against a Howell form h."""
    q = ell**k
    x = np.asarray(x, dtype=np.int64).copy() % q
    for row in h:
        nz = np.nonzero(row)[0]
        if len(nz) == 0:
            continue
        col = nz[0]
        if x[col] == 0:
            continue
        pl = ell ** valuation(row[col], ell, k)
        if int(x[col]) % pl != 0:
            return False
        x = (x - (int(x[col]) // pl) * row) % q
    return not x.any()
