"""Positive definite quadratic forms in rank 4: Gram matrices of twisted ideal
lattices, LLL reduction and complete short-vector enumeration."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SingularBasis

SLACK = 1e-9
LLL_DELTA = 0.99


@dataclass(frozen=True, eq=False)
class GramMatrix:
    entries: np.ndarray
    scale_note: str = ""

    def __post_init__(self):
        g = np.array(self.entries, dtype=float)
        if g.shape != (4, 4):
            raise ValueError(f"expected a 4x4 Gram matrix, got {g.shape}")
        if np.max(np.abs(g - g.T)) > 1e-12 * max(1.0, np.max(np.abs(g))):
            raise ValueError("Gram matrix is not symmetric")
        g = 0.5 * (g + g.T)
        try:
            np.linalg.cholesky(g)
        except np.linalg.LinAlgError as exc:
            raise SingularBasis("Gram matrix is not positive definite") from exc
        g.setflags(write=False)
        object.__setattr__(self, "entries", g)

    def qform(self, v) -> float:
        v = np.asarray(v, dtype=float)
        return float(v @ self.entries @ v)

    def scaled(self, c: float) -> "GramMatrix":
        return GramMatrix(c * self.entries, f"{c} * ({self.scale_note})")

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.entries))


@dataclass(frozen=True)
class ShortVectorSet:
    """Lattice vectors (one per +- pair) with squared length at most ``bound``."""

    bound: float
    vectors: tuple = field(default_factory=tuple)
    lengths_sq: tuple = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.vectors)

    def as_array(self) -> np.ndarray:
        if not self.vectors:
            return np.zeros((0, 4), dtype=np.int64)
        return np.array(self.vectors, dtype=np.int64)


def gram(fd, em, u=(1.0, 1.0), ideal_basis=None) -> GramMatrix:
    """Gram matrix of the twisted lattice u*I in the trace metric.

    ``ideal_basis`` rows are coordinates of the ideal generators over the
    integral basis of ``fd`` (identity for the maximal order).
    """
    us, usp = (float(t) for t in u)
    if us <= 0 or usp <= 0:
        raise DomainError("twist components must be positive")
    B = np.eye(4, dtype=np.int64) if ideal_basis is None else np.asarray(ideal_basis, dtype=np.int64)
    if round(abs(np.linalg.det(B.astype(float)))) == 0:
        raise SingularBasis("ideal basis is singular")
    sig = B @ em.basis_sigma
    sigp = B @ em.basis_sigma_prime
    g = 2 * us**2 * np.real(np.outer(sig, np.conj(sig))) + 2 * usp**2 * np.real(
        np.outer(sigp, np.conj(sigp))
    )
    return GramMatrix(g, f"{getattr(fd, 'name', '?')} u=({us:.17g},{usp:.17g})")


def _gso(g: np.ndarray):
    """Gram-Schmidt coefficients mu and squared norms from a Gram matrix."""
    n = g.shape[0]
    mu = np.zeros((n, n))
    bstar = np.zeros(n)
    for i in range(n):
        for j in range(i):
            mu[i, j] = (g[i, j] - sum(mu[j, k] * mu[i, k] * bstar[k] for k in range(j))) / bstar[j]
        bstar[i] = g[i, i] - sum(mu[i, k] ** 2 * bstar[k] for k in range(i))
    return mu, bstar


def lll_reduce(G: GramMatrix, delta: float = LLL_DELTA):
    """LLL on a Gram matrix. Returns (reduced GramMatrix, T) with T^t G T = reduced.

    Columns of the integer matrix ``T`` are the reduced basis vectors in the
    input coordinates; ``det T = +-1``.
    """
    g0 = G.entries
    n = g0.shape[0]
    T = np.eye(n, dtype=np.int64)
    k = 1
    for _ in range(10_000):
        if k >= n:
            break
        g = T.T @ g0 @ T
        mu, bstar = _gso(g)
        for j in range(k - 1, -1, -1):
            r = round(mu[k, j])
            if r:
                T[:, k] -= r * T[:, j]
                g = T.T @ g0 @ T
                mu, bstar = _gso(g)
        if bstar[k] >= (delta - mu[k, k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            T[:, [k - 1, k]] = T[:, [k, k - 1]]
            k = max(k - 1, 1)
    else:  # pragma: no cover
        raise RuntimeError("LLL did not terminate")
    return GramMatrix(T.T @ g0 @ T, f"LLL({G.scale_note})"), T


def _fp_coefficients(g: np.ndarray):
    """Quadratic completion q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2."""
    n = g.shape[0]
    q = g.astype(float).copy()
    for i in range(n):
        for j in range(i + 1, n):
            q[j, i] = q[i, j]
            q[i, j] = q[i, j] / q[i, i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k, l] -= q[k, i] * q[i, l]
    return q


def _fincke_pohst(g: np.ndarray, bound: float):
    """All nonzero integer x with x^t g x <= bound (both signs)."""
    n = g.shape[0]
    q = _fp_coefficients(g)
    diag = [q[i, i] for i in range(n)]
    x = [0] * n
    out = []

    def recurse(i: int, remaining: float):
        c = -sum(q[i, j] * x[j] for j in range(i + 1, n))
        r = math.sqrt(max(remaining, 0.0) / diag[i])
        lo = math.ceil(c - r - 1e-12)
        hi = math.floor(c + r + 1e-12)
        for xi in range(lo, hi + 1):
            rest = remaining - diag[i] * (xi - c) ** 2
            if rest < -1e-12 * max(1.0, bound):
                continue
            x[i] = xi
            if i == 0:
                if any(x):
                    out.append(tuple(x))
            else:
                recurse(i - 1, rest)
        x[i] = 0

    recurse(n - 1, bound)
    return out


def _canonical_sign(v):
    for c in v:
        if c > 0:
            return tuple(v)
        if c < 0:
            return tuple(-t for t in v)
    return tuple(v)


def enumerate_short(G: GramMatrix, bound: float) -> ShortVectorSet:
    """Complete up-to-sign enumeration of {v != 0 : v^t G v <= bound}.

    Works on an LLL-reduced copy and maps back, so the search tree stays
    small. Representatives have their first nonzero coordinate positive;
    order is by squared length, then lexicographic.
    """
    if bound <= 0:
        return ShortVectorSet(float(bound))
    red, T = lll_reduce(G)
    slack = SLACK * max(1.0, bound)
    raw = _fincke_pohst(red.entries, bound + slack)
    g = G.entries
    seen = {}
    for w in raw:
        v = _canonical_sign([int(t) for t in T @ np.array(w, dtype=np.int64)])
        if v not in seen:
            vv = np.array(v, dtype=float)
            seen[v] = float(vv @ g @ vv)
    items = sorted(((L, v) for v, L in seen.items() if L <= bound + slack))
    return ShortVectorSet(float(bound), tuple(v for _, v in items), tuple(L for L, _ in items))


def shortest_length_sq(G: GramMatrix) -> float:
    """Squared length of a shortest nonzero vector."""
    bound = 4.0 * max(G.det, 1e-300) ** 0.25
    bound = max(bound, float(np.min(np.diag(G.entries))) * 0.5)
    while True:
        svs = enumerate_short(G, bound)
        if len(svs):
            return min(svs.lengths_sq)
        bound *= 2.0


def count_annulus(G: GramMatrix, M: float, t: float) -> int:
    """#{f : M <= |f|^2 <= t}, both signs counted."""
    if M > t:
        raise DomainError(f"empty annulus: M={M} > t={t}")
    if M <= 0:
        raise DomainError("M must be positive (excludes the zero vector)")
    svs = enumerate_short(G, t)
    lo = M - SLACK * max(1.0, M)
    return 2 * sum(1 for L in svs.lengths_sq if L >= lo)


def box_enumerate(G: GramMatrix, bound: float, box) -> ShortVectorSet:
    """Brute-force search of the coordinate box |x_i| <= box[i]; test oracle."""
    ranges = [np.arange(-b, b + 1) for b in box]
    grid = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, 4)
    vals = np.einsum("ij,jk,ik->i", grid, G.entries, grid)
    slack = SLACK * max(1.0, bound)
    keep = (vals <= bound + slack) & np.any(grid != 0, axis=1)
    seen = {}
    for v, L in zip(grid[keep], vals[keep]):
        c = _canonical_sign([int(t) for t in v])
        seen[c] = float(L)
    items = sorted((L, v) for v, L in seen.items())
    return ShortVectorSet(float(bound), tuple(v for _, v in items), tuple(L for L, _ in items))


def coordinate_box(G: GramMatrix, bound: float):
    """Exact per-coordinate bounds |x_i| <= sqrt(bound * (G^-1)_ii)."""
    ginv = np.linalg.inv(G.entries)
    return [int(math.floor(math.sqrt(bound * ginv[i, i]) + 1e-9)) for i in range(4)]


def lll_box(b1_len_sq: float, bound: float):
    """Coordinate box 2^{3/2} (3/2)^{4-i} sqrt(bound)/|b_1| in an LLL basis."""
    return [
        int(math.floor(2**1.5 * 1.5 ** (4 - i) * math.sqrt(bound) / math.sqrt(b1_len_sq)))
        for i in range(1, 5)
    ]
