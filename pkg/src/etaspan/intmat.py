"""Integer and exact-rational linear algebra used by the enumeration, span and
cuspidal-group code.

Matrices are plain lists of lists of Python ints (arbitrary precision).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

__all__ = [
    "hermite_normal_form",
    "smith_normal_form",
    "kernel_mod",
    "integer_kernel",
    "matmul",
    "det",
    "inverse",
    "bareiss_rank",
    "IntegerEchelon",
    "ModularEchelon",
    "modular_rank",
]

Matrix = list[list[int]]


def _row_sub(a: list, b: list, q: int) -> list:
    return [x - q * y for x, y in zip(a, b)]


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows in echelon order: pivot columns strictly
    increase, pivots are positive and entries above a pivot lie in
    ``[0, pivot)``.  Two integer matrices span the same row lattice iff
    their HNFs are equal.
    """
    A = [list(map(int, r)) for r in rows]
    if not A:
        return []
    m, n = len(A), len(A[0])
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[piv] = A[piv], A[r]
            clean = True
            for i in range(r + 1, m):
                if A[i][c]:
                    A[i] = _row_sub(A[i], A[r], A[i][c] // A[r][c])
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if not A[r][c]:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
        p = A[r][c]
        for i in range(r):
            q = A[i][c] // p
            if q:
                A[i] = _row_sub(A[i], A[r], q)
        r += 1
    return A[:r]


def _hnf_with_transform(A: Matrix) -> tuple[Matrix, Matrix]:
    """(H, U) with U unimodular and U A = H in row echelon form (zero rows last)."""
    m = len(A)
    n = len(A[0]) if m else 0
    aug = [list(A[i]) + [int(i == j) for j in range(m)] for i in range(m)]
    R = hermite_normal_form(aug)  # full row rank, so all m rows survive
    return [row[:n] for row in R], [row[n:] for row in R]


def _transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)]


def smith_normal_form(M: Sequence[Sequence[int]]):
    """Smith normal form with transforms.

    Returns ``(diag, U, V)`` with ``U @ M @ V`` diagonal, ``diag`` its
    diagonal entries (nonnegative, each dividing the next) and ``U``, ``V``
    unimodular.  Row and column Hermite forms are alternated until the
    matrix is diagonal, which keeps the entries small.
    """
    S = [list(map(int, r)) for r in M]
    m = len(S)
    n = len(S[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    if not m or not n:
        return [], U, V

    def diagonal(A):
        return all(A[i][j] == 0 for i in range(m) for j in range(n) if i != j)

    while not diagonal(S):
        S, U1 = _hnf_with_transform(S)
        U = matmul(U1, U)
        if diagonal(S):
            break
        St, V1 = _hnf_with_transform(_transpose(S))
        S = _transpose(St)
        V = matmul(V, _transpose(V1))
    r = min(m, n)
    # gcd / lcm sweep with explicit unimodular 2x2 transforms
    for i in range(r):
        for j in range(i + 1, r):
            a, b = S[i][i], S[j][j]
            if b == 0 or (a and b % a == 0):
                continue
            if a == 0:
                U[i], U[j] = U[j], U[i]
                for row in V:
                    row[i], row[j] = row[j], row[i]
                S[i][i], S[j][j] = b, 0
                continue
            g = gcd(a, b)
            x, y = _bezout(a, b)
            ui, uj = U[i], U[j]
            U[i] = [x * p + y * q for p, q in zip(ui, uj)]
            U[j] = [-(b // g) * p + (a // g) * q for p, q in zip(ui, uj)]
            for row in V:
                vi, vj = row[i], row[j]
                row[i] = vi + vj
                row[j] = -(y * b // g) * vi + (x * a // g) * vj
            S[i][i], S[j][j] = g, a // g * b
    for i in range(r):
        if S[i][i] < 0:
            S[i][i] = -S[i][i]
            U[i] = [-x for x in U[i]]
    return [S[i][i] for i in range(r)], U, V


def _bezout(a: int, b: int) -> tuple[int, int]:
    """x, y with x a + y b = gcd(a, b) > 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        x0, y0 = -x0, -y0
    return x0, y0


def kernel_mod(C: Sequence[Sequence[int]], moduli: Sequence[int], n: int | None = None) -> Matrix:
    """Basis (rows, in HNF) of ``{x in Z^n : C x = 0 (mod moduli)}``.

    A modulus of 0 means the congruence is an equality.
    """
    m = len(C)
    if n is None:
        n = len(C[0])
    W = []
    for i in range(n):
        W.append([int(C[j][i]) for j in range(m)] + [int(i == t) for t in range(n)])
    for j, mod in enumerate(moduli):
        if mod:
            W.append([mod * int(j == t) for t in range(m)] + [0] * n)
    H = hermite_normal_form(W)
    basis = [row[m:] for row in H if not any(row[:m])]
    return hermite_normal_form(basis)


def integer_kernel(C: Sequence[Sequence[int]], n: int | None = None) -> Matrix:
    """Basis of ``{x in Z^n : C x = 0}``."""
    return kernel_mod(C, [0] * len(C), n)


def matmul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def det(M) -> Fraction:
    """Exact determinant by fraction Gaussian elimination."""
    A = [[Fraction(x) for x in r] for r in M]
    n = len(A)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        d *= A[c][c]
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] / A[c][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return d


def inverse(M) -> list[list[Fraction]]:
    """Exact inverse of a square rational matrix (Gauss-Jordan)."""
    n = len(M)
    A = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        A[c], A[piv] = A[piv], A[c]
        p = A[c][c]
        A[c] = [x / p for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [r[n:] for r in A]


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of an integer matrix by Bareiss fraction-free elimination."""
    A = [list(map(int, r)) for r in rows]
    if not A:
        return 0
    m, n = len(A), len(A[0])
    prev = 1
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        for i in range(r + 1, m):
            a = A[i][c]
            A[i] = [(p * x - a * y) // prev for x, y in zip(A[i], A[r])]
        prev = p
        r += 1
        if r == m:
            break
    return r


def _content(v):
    g = 0
    for x in v:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


class IntegerEchelon:
    """Incrementally maintained integer row-echelon basis (exact over Q).

    Each incoming row is reduced fraction-free against the stored rows in
    ascending pivot order (``v <- b[p] v - v[p] b``) and divided by its content;
    a nonzero remainder is stored with its first nonzero column as pivot.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence[int]) -> list[int]:
        v = list(map(int, v))
        for row, p in zip(self.rows, self.pivots):
            a = v[p]
            if a:
                b = row[p]
                g = gcd(a, b)
                v = [(b // g) * x - (a // g) * y for x, y in zip(v, row)]
                c = _content(v)
                if c > 1:
                    v = [x // c for x in v]
        return v

    def add(self, v: Sequence[int]) -> bool:
        """Insert ``v``; return True iff it was independent of the stored rows."""
        w = self.reduce(v)
        piv = next((i for i, x in enumerate(w) if x), None)
        if piv is None:
            return False
        if w[piv] < 0:
            w = [-x for x in w]
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < piv:
            pos += 1
        self.rows.insert(pos, w)
        self.pivots.insert(pos, piv)
        return True


DEFAULT_PRIME = 2097143  # largest prime below 2**21; keeps int64 dot products exact


class ModularEchelon:
    """Reduced row-echelon basis over GF(p), vectorised with numpy.

    Independence mod p implies independence over Q, so a full-rank result
    certifies full rank exactly; a dependence mod p is only probable.
    """

    def __init__(self, ncols: int, p: int = DEFAULT_PRIME):
        if p * p * max(ncols, 1) >= 2 ** 62:
            raise ValueError("prime too large for exact int64 arithmetic")
        self.p = p
        self.ncols = ncols
        self.B = np.zeros((0, ncols), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, v) -> bool:
        p = self.p
        if isinstance(v, np.ndarray) and v.dtype == np.int64:
            w = v % p
        else:
            w = np.asarray([int(x) % p for x in v], dtype=np.int64)
        if self.pivots:
            coef = w[self.pivots]
            w = (w - coef @ self.B) % p
        nz = np.flatnonzero(w)
        if nz.size == 0:
            return False
        c = int(nz[0])
        inv = pow(int(w[c]), p - 2, p)
        w = (w * inv) % p
        if self.pivots:
            col = self.B[:, c].copy()
            self.B = (self.B - np.outer(col, w)) % p
        self.B = np.vstack([self.B, w])
        self.pivots.append(c)
        return True


def modular_rank(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank over GF(p) by plain Gaussian elimination (pure Python)."""
    A = [[int(x) % p for x in r] for r in rows]
    if not A:
        return 0
    m, n = len(A), len(A[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], p - 2, p)
        A[r] = [(x * inv) % p for x in A[r]]
        for i in range(r + 1, m):
            a = A[i][c]
            if a:
                A[i] = [(x - a * y) % p for x, y in zip(A[i], A[r])]
        r += 1
        if r == m:
            break
    return r
