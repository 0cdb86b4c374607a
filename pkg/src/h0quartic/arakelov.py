"""Arakelov divisors on totally complex quartic fields and certified theta sums.

A divisor is an ideal lattice with a positive twist at the two complex
places. Its effectivity k0 is the theta sum over the twisted lattice; we
enclose it by an exact-membership partial sum plus the Gaussian tail bound
from ``special``. Along the torus of degree-0 twists of O_F the twist is
(s, 1/s), and all the second-derivative terms live in this module too.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import lattice, numfield, special
from .errors import DomainError
from .interval import PI, Interval, exp, log
from .numfield import EmbeddingMap, FieldDescriptor, FieldElement

DEFAULT_CUTOFF = 40.0
DEFAULT_A = 2.0
# certified relative error of a computed squared length (see _length_error)
LENGTH_REL_ERR = 1e-10
SHELL_TOL = 1e-9
BJ_POOL_BOUND = 11.0
BJ_S_RANGE = (0.8722, 1 / 0.8722)
T4_CUTOFF = 8.0


@dataclass(frozen=True, eq=False)
class ArakelovDivisor:
    ideal_basis: np.ndarray = field(default_factory=lambda: np.eye(4, dtype=np.int64))
    norm_I: Fraction = Fraction(1)
    twist: tuple = (1.0, 1.0)

    def __post_init__(self):
        B = np.array(self.ideal_basis, dtype=np.int64)
        if B.shape != (4, 4):
            raise ValueError("ideal basis must be 4x4")
        B.setflags(write=False)
        object.__setattr__(self, "ideal_basis", B)
        object.__setattr__(self, "norm_I", Fraction(self.norm_I))
        us, usp = (float(t) for t in self.twist)
        if us <= 0 or usp <= 0:
            raise DomainError("twist must be positive")
        object.__setattr__(self, "twist", (us, usp))

    @classmethod
    def trivial(cls) -> "ArakelovDivisor":
        return cls()

    @classmethod
    def torus(cls, s: float) -> "ArakelovDivisor":
        if s <= 0:
            raise DomainError("s must be positive")
        return cls(twist=(s, 1.0 / s))

    @classmethod
    def degree_zero(cls, ideal_basis, norm_I, s: float = 1.0) -> "ArakelovDivisor":
        """(I, u) with u = N(I)^(-1/4) (s, 1/s), so that N(u) N(I) = 1."""
        c = float(Fraction(norm_I)) ** -0.25
        return cls(ideal_basis, norm_I, (c * s, c / s))

    @property
    def degree(self) -> float:
        us, usp = self.twist
        return 2 * math.log(us) + 2 * math.log(usp) + math.log(float(self.norm_I))

    @property
    def is_principal_ideal(self) -> bool:
        return bool(np.array_equal(self.ideal_basis, np.eye(4, dtype=np.int64)))


@dataclass(frozen=True)
class ThetaEnclosure:
    partial_sum: float
    tail_bound: float
    lower: float
    upper: float
    cutoff_M: float
    points_used: int
    a_used: float

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def interval(self) -> Interval:
        return Interval(self.lower, self.upper)


@dataclass(frozen=True)
class ShellElement:
    element: FieldElement
    length_sq: float
    norm: int


# ---------------------------------------------------------------------------
# lengths


def twisted_norm_sq(fd: FieldDescriptor, em: EmbeddingMap, D: ArakelovDivisor, x) -> float:
    """|ux|^2 = 2 u_s^2 |sigma x|^2 + 2 u_s'^2 |sigma' x|^2; x in O_F coordinates."""
    a, b = em.abs2(x)
    us, usp = D.twist
    return float(2 * us * us * a + 2 * usp * usp * b)


def torus_length_sq(s, a, b):
    """Vectorized 2 s^2 a + 2 b / s^2 for squared moduli a, b."""
    s2 = np.asarray(s, dtype=float) ** 2
    return 2 * s2 * a + 2 * b / s2


def _length_error(coords: np.ndarray, em: EmbeddingMap) -> float:
    """A priori relative error bound for the binary64 moduli of a batch of vectors."""
    if len(coords) == 0:
        return 0.0
    C = np.abs(coords.astype(float))
    worst = 0.0
    for basis in (em.basis_sigma, em.basis_sigma_prime):
        val = np.abs(coords.astype(float) @ basis)
        # dot product of <= 4 terms plus the rounding of the stored embedding values
        err = (C @ np.abs(basis)) * 1e-15 + C.sum(axis=1) * 1e-18
        rel = 2 * err / val + (err / val) ** 2
        worst = max(worst, float(np.max(rel)))
    return worst + 1e-15


def _check_length_error(coords: np.ndarray, em: EmbeddingMap):
    e = _length_error(coords, em)
    if e > LENGTH_REL_ERR:
        raise DomainError(f"length error bound {e:.3g} exceeds {LENGTH_REL_ERR:.1e}")


# ---------------------------------------------------------------------------
# theta sums


def tail_bound(a: float, M: float) -> float:
    return special.tail_bound(a, M)


def annulus_count_bound(a: float, M: float, t: float) -> float:
    return special.annulus_count_bound(a, M, t)


def theta_enclosure(lengths_sq, cutoff_M: float, a_lower: float) -> ThetaEnclosure:
    """Enclose 1 + 2 sum exp(-pi L) + tail for up-to-sign squared lengths L <= M (1 + slack).

    Each L carries relative error at most LENGTH_REL_ERR; numpy's exp and the
    summation are covered by a further relative 1e-12.
    """
    L = np.asarray(lengths_sq, dtype=float)
    L = L[L <= cutoff_M * (1 + 2 * LENGTH_REL_ERR) + lattice.SLACK * max(1.0, cutoff_M)]
    n = len(L)
    lo_terms = np.exp(-math.pi * (1 + 1e-15) * L * (1 + LENGTH_REL_ERR))
    hi_terms = np.exp(-math.pi * L * (1 - LENGTH_REL_ERR))
    slop = 1e-12 + n * 4e-16
    s_lo = 2 * float(np.sum(lo_terms)) * (1 - slop)
    s_hi = 2 * float(np.sum(hi_terms)) * (1 + slop)
    # points with true length >= M(1 - rel) may sit outside the partial sum
    M_eff = cutoff_M * (1 - LENGTH_REL_ERR)
    if M_eff < a_lower * a_lower:
        raise DomainError(f"cutoff {cutoff_M} below a^2 = {a_lower ** 2}")
    tail = special.tail_bound(a_lower, M_eff)
    lower = (Interval(1.0) + s_lo).lo
    upper = (Interval(1.0) + s_hi + tail).hi
    tail_total = (Interval(upper) - lower).hi
    return ThetaEnclosure(lower, tail_total, lower, upper, float(cutoff_M), 2 * n + 1, float(a_lower))


def k0(fd: FieldDescriptor, em: EmbeddingMap, D: ArakelovDivisor,
       cutoff_M: float = DEFAULT_CUTOFF, a_lower: float = DEFAULT_A) -> ThetaEnclosure:
    if a_lower <= 0:
        raise DomainError("a_lower must be positive")
    G = lattice.gram(fd, em, D.twist, D.ideal_basis)
    lam2 = lattice.shortest_length_sq(G)
    if lam2 < a_lower * a_lower * (1 - LENGTH_REL_ERR):
        raise DomainError(f"lambda^2 = {lam2:.6g} < a^2 = {a_lower ** 2:.6g}")
    if cutoff_M < lam2:
        raise DomainError(f"cutoff {cutoff_M} below lambda^2 = {lam2:.6g}")
    svs = lattice.enumerate_short(G, cutoff_M)
    X = svs.as_array() @ D.ideal_basis if len(svs) else svs.as_array()
    _check_length_error(X, em)
    if len(X):
        a, b = em.abs2(X)
        us, usp = D.twist
        lengths = 2 * us * us * a + 2 * usp * usp * b
    else:
        lengths = np.zeros(0)
    return theta_enclosure(lengths, cutoff_M, a_lower)


def h0_from(enc: ThetaEnclosure) -> Interval:
    return log(enc.interval())


def h0(fd: FieldDescriptor, em: EmbeddingMap, D: ArakelovDivisor,
       cutoff_M: float = DEFAULT_CUTOFF, a_lower: float = DEFAULT_A) -> Interval:
    return h0_from(k0(fd, em, D, cutoff_M, a_lower))


# ---------------------------------------------------------------------------
# pooled torus evaluation


class TorusPool:
    """Untwisted short vectors of O_F reused for every s on the torus.

    Since |ux|^2 >= min(s^2, s^-2) |x|^2, a pool complete up to ``bound``
    covers twisted radius M at s whenever M max(s^2, s^-2) <= bound.
    """

    def __init__(self, fd: FieldDescriptor, em: EmbeddingMap, bound: float):
        self.fd, self.em, self.bound = fd, em, float(bound)
        svs = lattice.enumerate_short(numfield.untwisted_gram(fd, em), bound)
        self.coords = svs.as_array()
        _check_length_error(self.coords, em)
        if len(self.coords):
            self.a, self.b = em.abs2(self.coords)
        else:
            self.a = self.b = np.zeros(0)
        self._norms = None

    @classmethod
    def for_range(cls, fd, em, s_lo: float, s_hi: float, cutoff_M: float = DEFAULT_CUTOFF):
        stretch = max(1 / s_lo ** 2, s_hi ** 2, s_lo ** 2, 1 / s_hi ** 2)
        return cls(fd, em, cutoff_M * stretch * (1 + 1e-9))

    def covers(self, s: float, M: float) -> bool:
        return M * max(s * s, 1 / (s * s)) <= self.bound

    @property
    def norms(self) -> np.ndarray:
        """Exact |N(x)| for every pooled vector."""
        if self._norms is None:
            self._norms = np.array([abs(numfield.norm(self.fd, v)) for v in self.coords], dtype=np.int64)
        return self._norms

    def lengths(self, s: float) -> np.ndarray:
        return torus_length_sq(s, self.a, self.b)

    def k0(self, s: float, cutoff_M: float = DEFAULT_CUTOFF) -> ThetaEnclosure:
        if not self.covers(s, cutoff_M):
            raise DomainError(f"pool bound {self.bound} does not cover s={s}, M={cutoff_M}")
        L = self.lengths(s)
        return theta_enclosure(L[L <= cutoff_M * (1 + 1e-9)], cutoff_M, DEFAULT_A)

    def h0(self, s: float, cutoff_M: float = DEFAULT_CUTOFF) -> Interval:
        return h0_from(self.k0(s, cutoff_M))


def torus_samples(s_lo: float, s_hi: float, n: int, endpoint: bool = True) -> np.ndarray:
    """n log-uniform samples; ``endpoint=False`` suits one full period (s_hi ~ s_lo)."""
    if not 0 < s_lo < s_hi:
        raise DomainError("need 0 < s_lo < s_hi")
    if n < 2:
        raise DomainError("need at least two samples")
    return np.exp(np.linspace(math.log(s_lo), math.log(s_hi), n, endpoint=endpoint))


def torus_scan(fd: FieldDescriptor, em: EmbeddingMap, s_lo: float, s_hi: float, n: int,
               cutoff_M: float = DEFAULT_CUTOFF, endpoint: bool = True):
    """[(s, h0 midpoint, h0 width)] at n log-uniform samples."""
    ss = torus_samples(s_lo, s_hi, n, endpoint)
    pool = TorusPool.for_range(fd, em, s_lo, s_hi, cutoff_M)
    out = []
    for s in ss:
        iv = pool.h0(float(s), cutoff_M)
        out.append((float(s), iv.mid, iv.width))
    return out


def period_scan(fd: FieldDescriptor, em: EmbeddingMap, n: int = 512, cutoff_M: float = DEFAULT_CUTOFF):
    """One period, s = |eps|^((k - n/2)/n) for k < n; s = 1 is a sample when n is even."""
    s_lo, s_hi = period_range(fd, em, 1.0)
    return torus_scan(fd, em, s_lo, s_hi, n, cutoff_M, endpoint=False)


def period_range(fd: FieldDescriptor, em: EmbeddingMap, periods: float = 1.0):
    """s-range of ``periods`` torus periods centred at s = 1 (period |eps| in s)."""
    half = numfield.unit_abs(fd, em) ** (periods / 2)
    return 1 / half, half


# ---------------------------------------------------------------------------
# small-norm sets and shells


def shell_index(L):
    """Index m with 4 sqrt(m) <= L < 4 sqrt(m+1), boundaries within SHELL_TOL going up."""
    L = np.asarray(L, dtype=float)
    return np.floor(((L + SHELL_TOL) / 4) ** 2).astype(np.int64)


def bj_candidates(fd: FieldDescriptor, em: EmbeddingMap, j: int, pool: TorusPool | None = None):
    """Pool indices of x with |x|^2 < 11 and |N(x)| = j (up to sign)."""
    pool = pool or TorusPool(fd, em, BJ_POOL_BOUND)
    untw = 2 * pool.a + 2 * pool.b
    idx = np.nonzero(untw < BJ_POOL_BOUND)[0]
    return pool, [int(i) for i in idx if pool.norms[i] == j]


def bj_set(fd: FieldDescriptor, em: EmbeddingMap, s: float, j: int, pool: TorusPool | None = None):
    """All x (both signs) with |N(x)| = j and |ux|^2 < 8 at u = (s, 1/s)."""
    lo, hi = BJ_S_RANGE
    if not lo - 1e-15 <= s <= hi + 1e-15:
        raise DomainError(f"s = {s} outside [{lo}, 1/{lo}]")
    if j not in (2, 3):
        raise DomainError("j must be 2 or 3")
    pool, cand = bj_candidates(fd, em, j, pool)
    out = []
    for i in cand:
        L = torus_length_sq(s, pool.a[i], pool.b[i])
        if L < 8.0:
            x = FieldElement(tuple(pool.coords[i]))
            out.extend([x, -x])
    return out


def bm_set(fd: FieldDescriptor, em: EmbeddingMap, s: float, m: int):
    """Shell {x : 4 sqrt(m) <= |ux|^2 < 4 sqrt(m+1)} with exact norms, both signs."""
    if m < 1:
        raise DomainError("m must be >= 1")
    D = ArakelovDivisor.torus(s)
    G = lattice.gram(fd, em, D.twist)
    svs = lattice.enumerate_short(G, 4 * math.sqrt(m + 1))
    out = []
    for v in svs.vectors:
        L = twisted_norm_sq(fd, em, D, v)
        if int(shell_index(L)) == m:
            n = abs(numfield.norm(fd, v))
            x = FieldElement(v)
            out.extend([ShellElement(x, L, n), ShellElement(-x, L, n)])
    return out


# ---------------------------------------------------------------------------
# second derivative along the torus


def G_of_z(z, N):
    """G as a function of z = s^2 |sigma x|^2 and N = |N(x)| (vectorized)."""
    z = np.asarray(z, dtype=float)
    q = 2 * z + 2 * N / z
    return (math.pi * q * q - 16 * math.pi * N - q / 2 - 2 * N / z) * np.exp(-math.pi * q)


def G_interval(z: Interval, N) -> Interval:
    """Outward enclosure of G(z, N) over an interval of z (naive interval evaluation)."""
    if not isinstance(z, Interval):
        z = Interval(z)
    q = 2 * z + 2 * N / z
    return (PI * q.sqr() - 16 * PI * N - q / 2 - 2 * N / z) * exp(-PI * q)


def G_value(fd: FieldDescriptor, em: EmbeddingMap, s: float, x) -> float:
    x = x if isinstance(x, FieldElement) else FieldElement(tuple(x))
    if x.is_zero():
        raise DomainError("G is undefined at 0")
    a, _ = em.abs2(x)
    N = abs(numfield.norm(fd, x))
    return float(G_of_z(s * s * a, N))


@dataclass(frozen=True)
class GppTerms:
    s: float
    T1: Interval
    T2: Interval
    T3: Interval
    T4_upper: float
    T4_partial: Interval  # the sum over 8 <= |ux|^2 <= pool radius, for reference
    total_upper: float
    gpp_upper: float  # (4 pi / s^2) * total_upper

    @property
    def certificate_negative(self) -> bool:
        return self.total_upper < 0


_T4_BOUND = None


def t4_upper() -> float:
    global _T4_BOUND
    if _T4_BOUND is None:
        _T4_BOUND = special.second_derivative_tail_interval(T4_CUTOFF).hi
    return _T4_BOUND


def _G_sum(z, N) -> Interval:
    """Enclosure of sum_i 2 G(z_i, N_i) from float evaluation (relative error << 1e-9)."""
    if len(z) == 0:
        return Interval(0.0)
    g = 2 * G_of_z(z, N)
    pos = float(np.sum(np.abs(g)))
    tot = float(np.sum(g))
    err = 1e-9 * pos + 1e-300
    return Interval(tot - err, tot + err)


def gpp_terms(fd: FieldDescriptor, em: EmbeddingMap, s: float, pool: TorusPool | None = None) -> GppTerms:
    """T1, T2, T3 summed over the shells B_1..B_3 (both signs) and the T4 upper bound."""
    if pool is None or not pool.covers(s, 16.0):
        pool = TorusPool(fd, em, 16.0 * max(s * s, 1 / (s * s)) * 1.01)
    L = pool.lengths(s)
    m = shell_index(L)
    z = s * s * pool.a
    N = pool.norms
    T = [_G_sum(z[m == k], N[m == k]) for k in (1, 2, 3)]
    keep4 = (m >= 4) & (L <= 16.0)
    T4p = _G_sum(z[keep4], N[keep4])
    t4 = t4_upper()
    total = (T[0] + T[1] + T[2] + t4).hi
    return GppTerms(s, T[0], T[1], T[2], t4, T4p, total, 4 * math.pi / (s * s) * total)


def g_truncated(pool: TorusPool, s: float, cutoff: float) -> float:
    """k0 along the torus restricted to the fixed vector set with |x|^2 <= cutoff (untwisted)."""
    keep = 2 * pool.a + 2 * pool.b <= cutoff
    return 1 + 2 * float(np.sum(np.exp(-math.pi * torus_length_sq(s, pool.a[keep], pool.b[keep]))))


def gpp_truncated(pool: TorusPool, s: float, cutoff: float) -> float:
    """(4 pi / s^2) * sum 2 G(s, x) over the same fixed vector set."""
    keep = 2 * pool.a + 2 * pool.b <= cutoff
    z = s * s * pool.a[keep]
    return 4 * math.pi / (s * s) * 2 * float(np.sum(G_of_z(z, pool.norms[keep])))


def unit_powers(fd: FieldDescriptor):
    """[1, eps, eps^-1, eps^2, eps^-2] by exact ring arithmetic."""
    e = fd.unit
    ei = numfield.unit_inverse(fd, e)
    return [numfield.ONE, e, ei, numfield.mul(fd, e, e), numfield.mul(fd, ei, ei)]


def frak_g(fd: FieldDescriptor, em: EmbeddingMap, s: float) -> float:
    """omega * sum of G(s, eps^k) for k in {0, +-1, +-2}."""
    total = 0.0
    for x in unit_powers(fd):
        a, _ = em.abs2(x)
        total += float(G_of_z(s * s * a, 1))
    return fd.omega * total


def frak_g_interval(s: Interval, eps_abs: Interval, omega: int) -> Interval:
    """omega * sum_k G(s^2 |eps|^(2k), 1) over an interval of s."""
    s2 = s.sqr()
    e2 = eps_abs.sqr()
    zs = [s2, s2 * e2, s2 / e2, s2 * e2.sqr(), s2 / e2.sqr()]
    total = Interval(0.0)
    for z in zs:
        total = total + G_interval(z, 1)
    return omega * total
