"""Linear algebra over Z/N.

Two tools live here: a local Smith elimination over Z/p^k, used to count
solutions of homogeneous systems and to produce kernel generators, and the
Howell form over Z/N, which gives a canonical generating matrix for a
submodule of (Z/N)^c and hence canonical coset representatives.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization as a sorted list of (p, e)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def valuation(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass
class LocalSmith:
    """Result of eliminating an integer matrix over Z/p^k.

    ``valuations`` lists the p-adic valuations of the nonzero diagonal
    entries (all below k). ``V`` is the column transform when requested.
    """

    p: int
    k: int
    ncols: int
    valuations: list[int]
    V: np.ndarray | None = None

    @property
    def rank(self) -> int:
        return len(self.valuations)

    def log_kernel_size(self, e: int) -> int:
        """log_p of the number of solutions of ``A x = 0`` over Z/p^e, e <= k."""
        if e > self.k:
            raise ValueError("modulus exceeds the elimination precision")
        return e * (self.ncols - self.rank) + sum(min(v, e) for v in self.valuations)

    def kernel_generators(self) -> np.ndarray:
        """Rows generating the solution module over Z/p^k."""
        if self.V is None:
            raise ValueError("column transform was not tracked")
        q = self.p**self.k
        rows = []
        for i, v in enumerate(self.valuations):
            if v > 0:
                rows.append(self.V[:, i] * self.p ** (self.k - v) % q)
        for i in range(self.rank, self.ncols):
            rows.append(self.V[:, i] % q)
        if not rows:
            return np.zeros((0, self.ncols), dtype=np.int64)
        return np.array(rows, dtype=np.int64)


def local_smith(A: np.ndarray, p: int, k: int, track: bool = False) -> LocalSmith:
    """Diagonalize ``A`` over Z/p^k with minimal-valuation pivots.

    Units are preferred as pivots; only when none remain are valuations
    computed. Row transforms are never needed for the uses here.
    """
    q = p**k
    A = np.array(A, dtype=np.int64) % q
    R, C = A.shape
    V = np.eye(C, dtype=np.int64) if track else None
    vals: list[int] = []
    t = 0
    # drop all-zero rows up front; they never pivot
    A = A[A.any(axis=1)]
    R = A.shape[0]
    while t < min(R, C):
        # cheap searches first: a unit in the current column, then row
        colu = np.flatnonzero(A[t:, t] % p)
        if colu.size:
            i, j, v = int(colu[0]), 0, 0
        else:
            rowu = np.flatnonzero(A[t, t:] % p)
            if rowu.size:
                i, j, v = 0, int(rowu[0]), 0
            else:
                i, j, v = _min_valuation_entry(A[t:, t:], p, k)
                if v >= k:
                    break
        i += t
        j += t
        if i != t:
            A[[t, i]] = A[[i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            if V is not None:
                V[:, [t, j]] = V[:, [j, t]]
        pv = p**v
        u = int(A[t, t]) // pv
        uinv = pow(u % q, -1, q)
        A[t, t:] = A[t, t:] * uinv % q
        f = A[t + 1 :, t] // pv
        if f.any():
            nzr = np.flatnonzero(f) + t + 1
            A[nzr, t:] = (A[nzr, t:] - np.outer(f[nzr - t - 1], A[t, t:])) % q
        g = A[t, t + 1 :] // pv
        if V is not None and g.any():
            nzc = np.flatnonzero(g)
            V[:, t + 1 + nzc] = (V[:, t + 1 + nzc] - np.outer(V[:, t], g[nzc])) % q
        A[t, t + 1 :] = 0
        vals.append(v)
        t += 1
        # compact away rows that became zero to keep later steps cheap
        if t % 64 == 0 and t < A.shape[0]:
            rest = A[t:]
            keep = rest[:, t:].any(axis=1)
            A = np.vstack([A[:t], rest[keep]])
            R = A.shape[0]
    return LocalSmith(p, k, C, vals, V)


def _min_valuation_entry(sub: np.ndarray, p: int, k: int) -> tuple[int, int, int]:
    units = sub % p != 0
    if units.any():
        i, j = np.unravel_index(int(np.argmax(units)), units.shape)
        return int(i), int(j), 0
    nz = sub != 0
    if not nz.any():
        return 0, 0, k
    val = np.where(nz, 0, k)
    tmp = sub.copy()
    for _ in range(k - 1):
        div = nz & (tmp % p == 0)
        if not div.any():
            break
        val += div
        tmp = np.where(div, tmp // p, tmp)
    i, j = np.unravel_index(int(np.argmin(val)), val.shape)
    return int(i), int(j), int(val[i, j])


def crt_combine(parts: list[tuple[np.ndarray, int]], m: int) -> np.ndarray:
    """Combine rows given modulo coprime prime powers into rows modulo ``m``.

    Each part contributes its rows lifted so they vanish modulo the other
    prime powers.
    """
    rows = []
    for arr, q in parts:
        if arr.size == 0:
            continue
        co = m // q
        lift = co * pow(co % q, -1, q) % m if q > 1 else 0
        rows.append(arr % q * lift % m)
    if not rows:
        ncols = parts[0][0].shape[1] if parts else 0
        return np.zeros((0, ncols), dtype=np.int64)
    return np.vstack(rows)


def kernel_mod(A: np.ndarray, m: int) -> np.ndarray:
    """Generators (as rows) of ``{x : A x = 0 mod m}``."""
    A = np.asarray(A, dtype=np.int64)
    C = A.shape[1]
    if m == 1:
        return np.zeros((0, C), dtype=np.int64)
    parts = []
    for p, e in factorize(m):
        ls = local_smith(A, p, e, track=True)
        parts.append((ls.kernel_generators(), p**e))
    return crt_combine(parts, m)


def _gcdex(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        qq = a // b
        a, b = b, a - qq * b
        s0, s1 = s1, s0 - qq * s1
        t0, t1 = t1, t0 - qq * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def _unit_normalizer(a: int, N: int) -> int:
    """A unit u of Z/N with ``u*a = gcd(a, N) mod N``."""
    g = gcd(a, N)
    m = N // g
    if m == 1:
        return 1
    u = pow((a // g) % m, -1, m)
    # lift u from Z/m to a unit of Z/N
    while gcd(u, N) != 1:
        u += m
    return u % N


@dataclass
class HowellForm:
    """Canonical generating rows of a submodule of (Z/N)^c.

    ``pivots[i]`` is the pivot column of ``rows[i]`` and ``rows[i, pivots[i]]``
    divides N.
    """

    N: int
    ncols: int
    rows: np.ndarray
    pivots: list[int]

    def reduce(self, X: np.ndarray) -> np.ndarray:
        """Canonical representatives of ``X`` (rows) modulo the submodule.

        The result is the lexicographically least element of each coset.
        """
        X = np.array(X, dtype=np.int64, ndmin=2) % self.N
        if X.shape[0] == 0 or not self.pivots:
            return X
        # rows with unit pivots vanish on each other's pivot columns and on
        # every other pivot column, so they can be applied all at once
        unit = self._unit_rows
        if unit.size:
            cols = np.asarray(self.pivots)[unit]
            X = (X - _modmat(X[:, cols], self.rows[unit], self.N)) % self.N
        for i in self._nonunit_rows:
            row = self.rows[i]
            c = self.pivots[i]
            d = int(row[c])
            qv = X[:, c] // d
            if qv.any():
                X = (X - np.outer(qv, row)) % self.N
        return X

    @cached_property
    def _unit_rows(self) -> np.ndarray:
        return np.array([i for i, c in enumerate(self.pivots) if self.rows[i, c] == 1], dtype=np.int64)

    @cached_property
    def _nonunit_rows(self) -> list[int]:
        return [i for i, c in enumerate(self.pivots) if self.rows[i, c] != 1]

    def key(self) -> bytes:
        return self.rows.tobytes() + np.asarray(self.pivots, dtype=np.int64).tobytes()

    def contains(self, x: np.ndarray) -> bool:
        return not self.reduce(x).any()

    def size_log(self) -> dict[int, int]:
        """Submodule order as {p: exponent}."""
        out: dict[int, int] = {}
        for row, c in zip(self.rows, self.pivots):
            d = int(row[c])
            for p, e in factorize(self.N // d):
                out[p] = out.get(p, 0) + e
        return out

    def order(self) -> int:
        o = 1
        for row, c in zip(self.rows, self.pivots):
            o *= self.N // int(row[c])
        return o


def _modmat(A: np.ndarray, B: np.ndarray, N: int) -> np.ndarray:
    """``A @ B mod N``, via floating point when that is exact."""
    A = A % N
    B = B % N
    if A.shape[1] * (N - 1) ** 2 < 2**52:
        return np.rint(A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64) % N
    return (A @ B) % N


def howell_form(A: np.ndarray, N: int, ncols: int | None = None) -> HowellForm:
    """Howell form of the row span of ``A`` over Z/N."""
    A = np.array(A, dtype=np.int64, ndmin=2)
    if ncols is None:
        ncols = A.shape[1]
    if A.size == 0:
        A = np.zeros((0, ncols), dtype=np.int64)
    pool = A % N
    pool = pool[pool.any(axis=1)]
    out_rows: list[np.ndarray] = []
    pivots: list[int] = []
    for c in range(ncols):
        if pool.shape[0] == 0:
            break
        col = pool[:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        # pick the entry generating the largest ideal first
        gs = np.gcd(col[nz], N)
        order = nz[np.argsort(gs, kind="stable")]
        piv = pool[order[0]].copy()
        others = []
        for i in order[1:]:
            row = pool[i]
            a, b = int(piv[c]), int(row[c])
            if b % gcd(a, N) == 0 and a != 0:
                # b lies in the ideal of a: plain elimination
                g = gcd(a, N)
                u = _unit_normalizer(a, N)
                f = (b // g) * u % N
                others.append((row - f * piv) % N)
                continue
            g, s, t = _gcdex(a, b)
            newp = (s * piv + t * row) % N
            rest = ((-(b // g)) * piv + (a // g) * row) % N
            piv = newp
            others.append(rest)
        u = _unit_normalizer(int(piv[c]), N)
        piv = piv * u % N
        d = int(piv[c])
        keep_mask = np.ones(pool.shape[0], dtype=bool)
        keep_mask[nz] = False
        new_pool = [pool[keep_mask]]
        if others:
            new_pool.append(np.array(others, dtype=np.int64))
        ann = piv * (N // d) % N
        if ann.any():
            new_pool.append(ann[None, :])
        pool = np.vstack(new_pool)
        pool = pool[pool.any(axis=1)]
        out_rows.append(piv)
        pivots.append(c)
    # back-reduce entries above each pivot
    for i in range(len(out_rows)):
        c = pivots[i]
        d = int(out_rows[i][c])
        for j in range(i):
            qv = int(out_rows[j][c]) // d
            if qv:
                out_rows[j] = (out_rows[j] - qv * out_rows[i]) % N
    rows = np.array(out_rows, dtype=np.int64) if out_rows else np.zeros((0, ncols), dtype=np.int64)
    return HowellForm(N, ncols, rows, pivots)
