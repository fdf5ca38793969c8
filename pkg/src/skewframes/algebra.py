"""Circulant and negacirculant matrices, root-of-unity bookkeeping, and
exact arithmetic backends.

Conventions used throughout the package:

- Floating matrices are numpy complex128 arrays.
- A root of unity is addressed as RootIndex(order, index) and denotes
  exp(-2j*pi*index/order).  Keeping the pair instead of a float lets
  exact code turn products of roots into index arithmetic.
- circulant(v) places v[(j - i) % n] at row i, column j, so each row is
  the previous row rotated one step right.
- negacirculant(v) does the same but the entries that wrap around the
  right edge pick up a minus sign: row i+1 is row i rotated right with
  the wrapped entry negated.
- Exact scalars are Gaussian rationals (pairs of fractions.Fraction).
- Exact cyclotomic arithmetic represents an element of Q(zeta_m) as a
  sparse dict {exponent: Fraction} in zeta_m = exp(-2j*pi/m), reduced
  against the m-th cyclotomic polynomial only when testing equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np


# ---------------------------------------------------------------------------
# roots of unity


@dataclass(frozen=True)
class RootIndex:
    """The root of unity exp(-2j*pi*index/order), stored exactly.

    index is normalised into range(order), so two RootIndex values are
    equal exactly when they denote the same complex number.
    """

    order: int
    index: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("root order must be a positive integer")
        object.__setattr__(self, "index", self.index % self.order)

    @property
    def value(self) -> complex:
        return root_power(self.order, self.index)

    def conjugate(self) -> "RootIndex":
        return RootIndex(self.order, -self.index)

    def power(self, e: int) -> "RootIndex":
        return RootIndex(self.order, self.index * e)

    def is_real(self) -> bool:
        return (2 * self.index) % self.order == 0

    def annihilates(self, n: int) -> bool:
        """True when self**n == 1."""
        return (n * self.index) % self.order == 0

    def negates(self, n: int) -> bool:
        """True when self**n == -1."""
        num = 2 * n * self.index - self.order
        return num % (2 * self.order) == 0


@lru_cache(maxsize=None)
def _root_table(order: int) -> np.ndarray:
    return np.exp(-2j * np.pi * np.arange(order) / order)


def root_power(order: int, e: int) -> complex:
    """exp(-2j*pi*e/order), computed from a shared table so equal roots
    compare bit-identically."""
    return complex(_root_table(order)[e % order])


# ---------------------------------------------------------------------------
# circulant / negacirculant kernel


def _as_vector(v) -> np.ndarray:
    a = np.asarray(v, dtype=complex)
    if a.ndim != 1 or a.size < 1:
        raise ValueError("expected a non-empty one-dimensional sequence")
    return a


def circulant(v) -> np.ndarray:
    """n x n matrix C with C[i, j] = v[(j - i) % n]."""
    a = _as_vector(v)
    n = a.size
    j = np.arange(n)
    return a[(j[None, :] - j[:, None]) % n]


def negacirculant(v) -> np.ndarray:
    """n x n matrix N with N[i, j] = v[j - i] if j >= i else -v[n + j - i]."""
    a = _as_vector(v)
    n = a.size
    j = np.arange(n)
    diff = j[None, :] - j[:, None]
    out = a[diff % n].copy()
    out[diff < 0] *= -1
    return out


def _square(M) -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise ValueError("expected a square matrix")
    return A


def is_circulant(M, tol: float = 1e-9) -> bool:
    A = _square(M)
    return float(np.max(np.abs(A - circulant(A[0])))) <= tol


def is_negacirculant(M, tol: float = 1e-9) -> bool:
    A = _square(M)
    return float(np.max(np.abs(A - negacirculant(A[0])))) <= tol


# ---------------------------------------------------------------------------
# idempotent systems attached to circulant / negacirculant algebras


def cyclotomic_idempotent(n: int, zeta: RootIndex) -> np.ndarray:
    """(1/n) * (zeta**(j-i))_{i,j}; requires zeta**n == 1.

    These matrices are the rank-one spectral projectors of the circulant
    algebra: the distinct ones over all n-th roots sum to the identity
    and multiply like orthogonal idempotents.
    """
    if not zeta.annihilates(n):
        raise ValueError("zeta**n must equal 1 for a cyclotomic idempotent")
    j = np.arange(n)
    expo = (j[None, :] - j[:, None]) * zeta.index
    return _root_table(zeta.order)[expo % zeta.order] / n


def nega_cyclotomic_idempotent(n: int, zeta: RootIndex) -> np.ndarray:
    """(1/n) * (zeta**(i-j))_{i,j}; requires zeta**n == -1.

    Equals u u* / n for u = (1, zeta, ..., zeta**(n-1)), which makes the
    idempotency and mutual orthogonality over the 2n-th roots that are
    not n-th roots immediate.
    """
    if not zeta.negates(n):
        raise ValueError("zeta**n must equal -1 for a nega-cyclotomic idempotent")
    j = np.arange(n)
    expo = (j[:, None] - j[None, :]) * zeta.index
    return _root_table(zeta.order)[expo % zeta.order] / n


def circulant_eigenvalue(C, zeta: RootIndex, tol: float = 1e-9) -> complex:
    """Scalar a with C @ E == a * E for E = cyclotomic_idempotent(n, zeta).

    For a circulant with first row v this is sum_k v[k] * conj(zeta)**k.
    """
    A = _square(C)
    if not is_circulant(A, tol):
        raise ValueError("matrix is not circulant within tolerance")
    n = A.shape[0]
    if not zeta.annihilates(n):
        raise ValueError("zeta**n must equal 1")
    table = _root_table(zeta.order)
    k = np.arange(n)
    return complex(np.sum(A[0] * table[(-zeta.index * k) % zeta.order]))


def negacirculant_eigenvalue(N, zeta: RootIndex, tol: float = 1e-9) -> complex:
    """Scalar a with N @ K == a * K for K = nega_cyclotomic_idempotent(n, zeta).

    For a negacirculant with first row v this is sum_k v[k] * zeta**k.
    """
    A = _square(N)
    if not is_negacirculant(A, tol):
        raise ValueError("matrix is not negacirculant within tolerance")
    n = A.shape[0]
    if not zeta.negates(n):
        raise ValueError("zeta**n must equal -1")
    table = _root_table(zeta.order)
    k = np.arange(n)
    return complex(np.sum(A[0] * table[(zeta.index * k) % zeta.order]))


# ---------------------------------------------------------------------------
# exact Gaussian-rational matrices


@dataclass(frozen=True)
class GaussianRational:
    """a + b*i with a, b rational, for exact complex linear algebra."""

    re: Fraction
    im: Fraction

    def __add__(self, other):
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)


def gq(re=0, im=0) -> GaussianRational:
    return GaussianRational(Fraction(re), Fraction(im))


class ExactComplexMatrix:
    """Immutable dense matrix of GaussianRational entries."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data):
        data = tuple(tuple(row) for row in data)
        if not data or not data[0]:
            raise ValueError("matrix must be non-empty")
        if any(len(row) != len(data[0]) for row in data):
            raise ValueError("rows must have equal length")
        self.rows = len(data)
        self.cols = len(data[0])
        self.data = data

    @classmethod
    def from_complex_integers(cls, M, scale=1):
        """Round a complex array with (scaled) Gaussian-integer entries."""
        A = np.asarray(M, dtype=complex) * scale
        R = np.rint(A.real).astype(int)
        I = np.rint(A.imag).astype(int)
        if float(np.max(np.abs(A - (R + 1j * I)))) > 1e-6:
            raise ValueError("entries are not Gaussian integers at this scale")
        return cls([[gq(int(R[i, j]), int(I[i, j])) for j in range(A.shape[1])]
                    for i in range(A.shape[0])])

    @classmethod
    def identity(cls, n, scale=1):
        z, o = gq(0), gq(scale)
        return cls([[o if i == j else z for j in range(n)] for i in range(n)])

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        zero = gq(0)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                s = zero
                for k in range(self.cols):
                    s = s + self.data[i][k] * other.data[k][j]
                row.append(s)
            out.append(row)
        return ExactComplexMatrix(out)

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def _zip(self, other, op):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        return ExactComplexMatrix(
            [[op(a, b) for a, b in zip(r0, r1)] for r0, r1 in zip(self.data, other.data)]
        )

    def scale(self, c: GaussianRational):
        return ExactComplexMatrix([[c * x for x in row] for row in self.data])

    def conjugate_transpose(self):
        return ExactComplexMatrix(
            [[self.data[i][j].conjugate() for i in range(self.rows)] for j in range(self.cols)]
        )

    def __eq__(self, other):
        return (isinstance(other, ExactComplexMatrix)
                and self.data == other.data)

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.data for x in row)

    def to_complex(self) -> np.ndarray:
        return np.array([[x.to_complex() for x in row] for row in self.data])


# ---------------------------------------------------------------------------
# exact cyclotomic arithmetic


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple:
    """Integer coefficients of the m-th cyclotomic polynomial, low degree
    first, computed by dividing x**m - 1 by the lower-order factors."""
    if m == 1:
        return (-1, 1)
    num = [0] * (m + 1)
    num[0], num[m] = -1, 1
    for d in range(1, m):
        if m % d == 0:
            num = _polydiv_exact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _polydiv_exact(num, den):
    """Exact division of integer polynomials (low degree first); the
    remainder is required to vanish."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for shift in range(len(num) - len(den), -1, -1):
        coef = num[shift + len(den) - 1]
        assert coef % den[-1] == 0
        q = coef // den[-1]
        out[shift] = q
        for i, c in enumerate(den):
            num[shift + i] -= q * c
    assert all(c == 0 for c in num)
    return out


class CycloPoly:
    """Element of Q(zeta_m), zeta_m = exp(-2j*pi/m), as a sparse
    polynomial {exponent: Fraction} with exponents taken mod m.

    Products only fold exponents mod m; canonical reduction against the
    m-th cyclotomic polynomial happens in reduced()/is_zero(), which is
    what makes equality testing exact.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs=None):
        self.order = order
        folded = {}
        for e, c in (coeffs or {}).items():
            if c:
                e %= order
                folded[e] = folded.get(e, Fraction(0)) + c
        self.coeffs = {e: c for e, c in folded.items() if c}

    @classmethod
    def root(cls, order: int, e: int = 1, coeff=1) -> "CycloPoly":
        return cls(order, {e: Fraction(coeff)})

    @classmethod
    def rational(cls, order: int, c) -> "CycloPoly":
        return cls(order, {0: Fraction(c)})

    @classmethod
    def gaussian(cls, order: int, re, im) -> "CycloPoly":
        # i = exp(-2j*pi * 3/4) = zeta_m ** (3m/4), so m must be divisible by 4.
        if order % 4 != 0:
            raise ValueError("need 4 | order to embed Gaussian rationals")
        return cls(order, {0: Fraction(re), (3 * order) // 4: Fraction(im)})

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return CycloPoly(self.order, out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) - c
        return CycloPoly(self.order, out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloPoly(self.order, {e: c * other for e, c in self.coeffs.items()})
        out = {}
        m = self.order
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = (e1 + e2) % m
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return CycloPoly(self.order, out)

    __rmul__ = __mul__

    def __neg__(self):
        return CycloPoly(self.order, {e: -c for e, c in self.coeffs.items()})

    def conjugate(self):
        return CycloPoly(self.order, {-e % self.order: c for e, c in self.coeffs.items()})

    def rescaled(self, m: int) -> "CycloPoly":
        """View this element inside Q(zeta_m) for a multiple m of order."""
        if m % self.order != 0:
            raise ValueError("target order must be a multiple")
        k = m // self.order
        return CycloPoly(m, {e * k: c for e, c in self.coeffs.items()})

    def reduced(self) -> tuple:
        """Canonical coefficient tuple of degree < phi(order), obtained by
        polynomial remainder against the cyclotomic polynomial."""
        phi = cyclotomic_polynomial(self.order)
        deg = len(phi) - 1
        dense = [Fraction(0)] * self.order
        for e, c in self.coeffs.items():
            dense[e] += c
        for pos in range(self.order - 1, deg - 1, -1):
            c = dense[pos]
            if c:
                dense[pos] = Fraction(0)
                for i in range(deg):
                    dense[pos - deg + i] -= c * phi[i]
        return tuple(dense[:deg])

    def is_zero(self) -> bool:
        if not self.coeffs:
            return True
        return all(c == 0 for c in self.reduced())

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloPoly.rational(self.order, other)
        if self.order != other.order:
            raise ValueError("mixed cyclotomic orders; rescale first")
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.order, self.reduced()))

    def to_complex(self) -> complex:
        t = _root_table(self.order)
        return complex(sum(complex(c) * t[e] for e, c in self.coeffs.items()))

    def __repr__(self):
        return f"CycloPoly({self.order}, {self.coeffs!r})"


def cyclo_zero_matrix(order: int, n: int):
    z = CycloPoly(order)
    return [[z for _ in range(n)] for _ in range(n)]


def cyclo_identity(order: int, n: int):
    out = cyclo_zero_matrix(order, n)
    one = CycloPoly.rational(order, 1)
    for i in range(n):
        out[i][i] = one
    return out


def cyclo_matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    assert len(A[0]) == k
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            s = CycloPoly(Ai[0].order)
            for t in range(k):
                s = s + Ai[t] * B[t][j]
            row.append(s)
        out.append(row)
    return out


def cyclo_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def cyclo_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def cyclo_scale(A, c):
    return [[x * c for x in row] for row in A]


def cyclo_conj_transpose(A):
    n, m = len(A), len(A[0])
    return [[A[i][j].conjugate() for i in range(n)] for j in range(m)]


def cyclo_is_zero(A) -> bool:
    return all(x.is_zero() for row in A for x in row)


def cyclo_equal(A, B) -> bool:
    return cyclo_is_zero(cyclo_sub(A, B))


def cyclo_trace(A) -> CycloPoly:
    s = CycloPoly(A[0][0].order)
    for i in range(len(A)):
        s = s + A[i][i]
    return s


def cyclotomic_idempotent_exact(n: int, zeta: RootIndex, ring_order: int | None = None):
    """Exact counterpart of cyclotomic_idempotent as CycloPoly entries."""
    if not zeta.annihilates(n):
        raise ValueError("zeta**n must equal 1")
    m = ring_order or zeta.order
    if m % zeta.order != 0:
        raise ValueError("ring order must be a multiple of the root order")
    step = m // zeta.order
    inv_n = Fraction(1, n)
    return [
        [CycloPoly(m, {(j - i) * zeta.index * step: inv_n}) for j in range(n)]
        for i in range(n)
    ]


def nega_cyclotomic_idempotent_exact(n: int, zeta: RootIndex, ring_order: int | None = None):
    """Exact counterpart of nega_cyclotomic_idempotent as CycloPoly entries."""
    if not zeta.negates(n):
        raise ValueError("zeta**n must equal -1")
    m = ring_order or zeta.order
    if m % zeta.order != 0:
        raise ValueError("ring order must be a multiple of the root order")
    step = m // zeta.order
    inv_n = Fraction(1, n)
    return [
        [CycloPoly(m, {(i - j) * zeta.index * step: inv_n}) for j in range(n)]
        for i in range(n)
    ]


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b
