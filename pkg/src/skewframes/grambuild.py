"""Building 2n x 2n tight Gram matrices from spectral data.

The Gram matrices of the dihedral-orbit ETFs in this package are, up to
the factor 2, self-adjoint idempotents that decompose over the spectral
projectors of the circulant (strict flavor) or negacirculant
(projective flavor) algebra:

    X = sum over mixed roots z of [[|u|^2, u conj(v)], [v conj(u), |v|^2]] (x) K_z
      + sum over full roots z of I_2 (x) K_z

where K_z is the rank-one projector attached to the root z, (x) is the
Kronecker product with the 2 x 2 coefficient matrix on the outside, and
(u, v) = pairs[z] is a unit vector in C^2.  The roots split into three
conjugation-closed sets: "mixed" roots carry a rank-one 2 x 2 block,
"full" roots carry the identity, "empty" roots carry zero.  X is then a
rank-n orthogonal projection for any unit pairs, and G = 2 X is a Gram
matrix.

For G to carry the dihedral block pattern [[A, B], [B^T, A^T]] with B
real, the pairs cannot be independent across conjugate roots: the pair
at the conjugate root must be the swap (v, u) of the pair (u, v), and
self-conjugate roots must use u = 1/sqrt(2), v = +-1/sqrt(2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Optional, Tuple

import numpy as np

from .algebra import (
    CycloPoly,
    RootIndex,
    cyclotomic_idempotent,
    cyclotomic_idempotent_exact,
    lcm,
    nega_cyclotomic_idempotent,
    nega_cyclotomic_idempotent_exact,
)
from .frames import DihedralFlavor, GramMatrix


class InvalidPartitionError(ValueError):
    pass


class InvalidPairsError(ValueError):
    pass


def full_root_set(n: int, flavor: DihedralFlavor) -> frozenset:
    """The n roots indexing the projector system: all n-th roots of
    unity (strict) or the 2n-th roots that are not n-th roots
    (projective)."""
    if n < 1:
        raise ValueError("n must be positive")
    if flavor is DihedralFlavor.STRICT:
        return frozenset(RootIndex(n, k) for k in range(n))
    if flavor is DihedralFlavor.PROJECTIVE:
        return frozenset(RootIndex(2 * n, 2 * k + 1) for k in range(n))
    raise ValueError("unknown flavor")


def _conjugation_closed(s) -> bool:
    return all(z.conjugate() in s for z in s)


@dataclass(frozen=True)
class SpectralPartition:
    """Disjoint conjugation-closed split of the flavor's root set into
    mixed / full / empty parts with len(full) == len(empty)."""

    n: int
    flavor: DihedralFlavor
    mixed: FrozenSet[RootIndex]
    full: FrozenSet[RootIndex] = frozenset()
    empty: FrozenSet[RootIndex] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "mixed", frozenset(self.mixed))
        object.__setattr__(self, "full", frozenset(self.full))
        object.__setattr__(self, "empty", frozenset(self.empty))
        universe = full_root_set(self.n, self.flavor)
        parts = (self.mixed, self.full, self.empty)
        if sum(len(p) for p in parts) != len(universe) or \
                frozenset().union(*parts) != universe:
            raise InvalidPartitionError("parts must partition the root set")
        if len(self.full) != len(self.empty):
            raise InvalidPartitionError("full and empty parts must have equal size")
        for p in parts:
            if not _conjugation_closed(p):
                raise InvalidPartitionError("parts must be closed under conjugation")


def is_regular_gram(partition: SpectralPartition) -> bool:
    """The built Gram matrix is regular exactly when every root is mixed."""
    return len(partition.mixed) == partition.n


def _projector(n: int, zeta: RootIndex, flavor: DihedralFlavor) -> np.ndarray:
    if flavor is DihedralFlavor.STRICT:
        return cyclotomic_idempotent(n, zeta)
    return nega_cyclotomic_idempotent(n, zeta)


@dataclass(frozen=True)
class UnitPairAssignment:
    """Unit vectors (u, v) in C^2 indexed by the mixed roots.

    Validated invariants, relative to a partition:
    - defined exactly on the mixed roots;
    - |u|^2 + |v|^2 == 1 for every pair;
    - pairs at conjugate roots are swaps of each other:
      pairs[conj(z)] == (v, u) when pairs[z] == (u, v);
    - self-conjugate roots carry u = 1/sqrt(2), v = +-1/sqrt(2).
    """

    pairs: Dict[RootIndex, Tuple[complex, complex]]

    def __post_init__(self):
        object.__setattr__(self, "pairs",
                           {z: (complex(u), complex(v))
                            for z, (u, v) in self.pairs.items()})

    def validate(self, partition: SpectralPartition, tol: float = 1e-12):
        if set(self.pairs) != set(partition.mixed):
            raise InvalidPairsError("pairs must be indexed exactly by the mixed roots")
        r = 1.0 / np.sqrt(2.0)
        for z, (u, v) in self.pairs.items():
            if abs(abs(u) ** 2 + abs(v) ** 2 - 1.0) > tol:
                raise InvalidPairsError("each pair must be a unit vector in C^2")
            if z.is_real():
                # the swap condition degenerates here; the block pattern
                # instead needs u real and u * conj(v) real, pinned to
                # the balanced choice below
                if abs(u - r) > tol or min(abs(v - r), abs(v + r)) > tol:
                    raise InvalidPairsError(
                        "self-conjugate roots need u = 1/sqrt(2), v = +-1/sqrt(2)")
            else:
                uc, vc = self.pairs[z.conjugate()]
                if abs(uc - v) > tol or abs(vc - u) > tol:
                    raise InvalidPairsError(
                        "conjugate roots must carry swapped pairs")


def random_pairs(partition: SpectralPartition, rng) -> UnitPairAssignment:
    """Sample a valid assignment: independent (cos t, e^{i s} sin t) on
    one root of each conjugate pair, swapped on the other, random sign
    at self-conjugate roots."""
    pairs = {}
    r = 1.0 / np.sqrt(2.0)
    for z in partition.mixed:
        if z in pairs:
            continue
        if z.is_real():
            pairs[z] = (r, float(rng.choice([-1.0, 1.0])) * r)
        else:
            t = float(rng.uniform(0.0, np.pi / 2))
            s = float(rng.uniform(0.0, 2 * np.pi))
            u = np.cos(t)
            v = np.exp(1j * s) * np.sin(t)
            pairs[z] = (u, v)
            pairs[z.conjugate()] = (v, u)
    return UnitPairAssignment(pairs)


def tight_idempotent(partition: SpectralPartition,
                     pairs: UnitPairAssignment) -> np.ndarray:
    """The rank-n orthogonal projection X described in the module
    docstring, as a 2n x 2n complex array."""
    pairs.validate(partition)
    n, flavor = partition.n, partition.flavor
    X = np.zeros((2 * n, 2 * n), dtype=complex)
    for z in partition.mixed:
        K = _projector(n, z, flavor)
        u, v = pairs.pairs[z]
        X[:n, :n] += (u * np.conj(u)) * K
        X[:n, n:] += (u * np.conj(v)) * K
        X[n:, :n] += (v * np.conj(u)) * K
        X[n:, n:] += (v * np.conj(v)) * K
    for z in partition.full:
        K = _projector(n, z, flavor)
        X[:n, :n] += K
        X[n:, n:] += K
    return X


def build_tight_gram(partition: SpectralPartition, pairs: UnitPairAssignment,
                     flavor: Optional[DihedralFlavor] = None) -> GramMatrix:
    """Gram matrix G = 2 X; unit diagonal because the projector diagonal
    is constant 1/2 for any valid partition and pairs."""
    if flavor is not None and flavor is not partition.flavor:
        raise InvalidPartitionError("flavor disagrees with the partition")
    return GramMatrix(2.0 * tight_idempotent(partition, pairs))


def upper_block_real_part(partition: SpectralPartition) -> np.ndarray:
    """Predicted real part of the upper-left n x n block of the built
    Gram matrix: the mixed roots contribute half their projector, the
    full roots all of it, independent of the unit pairs."""
    n, flavor = partition.n, partition.flavor
    A = np.zeros((n, n), dtype=complex)
    for z in partition.mixed:
        A += 0.5 * _projector(n, z, flavor)
    for z in partition.full:
        A += _projector(n, z, flavor)
    assert float(np.max(np.abs(A.imag))) < 1e-12
    return 2.0 * A.real


# ---------------------------------------------------------------------------
# exact counterpart over the cyclotomic ring, used by the test suite


def exact_ring_order(partition: SpectralPartition) -> int:
    """Smallest cyclotomic order containing the projector entries, i,
    and 1/sqrt(2) (needed at self-conjugate roots)."""
    base = partition.n if partition.flavor is DihedralFlavor.STRICT else 2 * partition.n
    return lcm(lcm(base, 4), 8)


def exact_pair_from_rationals(order: int, t: Fraction, s: Fraction,
                              ) -> Tuple[CycloPoly, CycloPoly]:
    """Unit pair (u, v) with u = (1-t^2)/(1+t^2) rational and
    v = 2t/(1+t^2) times the rational unimodular (1-s^2+2si)/(1+s^2);
    |u|^2 + |v|^2 == 1 holds exactly."""
    den = 1 + t * t
    u = (1 - t * t) / den
    scale = 2 * t / den
    pden = 1 + s * s
    pre = (1 - s * s) / pden
    pim = 2 * s / pden
    return (CycloPoly.gaussian(order, u, 0),
            CycloPoly.gaussian(order, scale * pre, scale * pim))


def _exact_inv_sqrt2(order: int) -> CycloPoly:
    # 1/sqrt(2) = (zeta_8 + zeta_8^7) / 2 inside Q(zeta_order), 8 | order.
    k = order // 8
    return CycloPoly(order, {k: Fraction(1, 2), 7 * k: Fraction(1, 2)})


def random_exact_pairs(partition: SpectralPartition, rng):
    """Exact analog of random_pairs: CycloPoly unit pairs from small
    random rationals; returns {root: (u, v)} over exact_ring_order."""
    order = exact_ring_order(partition)
    pairs = {}
    r = _exact_inv_sqrt2(order)
    for z in sorted(partition.mixed, key=lambda w: (w.order, w.index)):
        if z in pairs:
            continue
        if z.is_real():
            sign = 1 if rng.integers(0, 2) == 0 else -1
            pairs[z] = (r, r * sign)
        else:
            t = Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 7)))
            s = Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 7)))
            u, v = exact_pair_from_rationals(order, t, s)
            pairs[z] = (u, v)
            pairs[z.conjugate()] = (v, u)
    return pairs


def tight_idempotent_exact(partition: SpectralPartition, exact_pairs):
    """Exact CycloPoly matrix of the projector X for exact unit pairs
    (as produced by random_exact_pairs)."""
    n, flavor = partition.n, partition.flavor
    order = exact_ring_order(partition)
    N = 2 * n
    zero = CycloPoly(order)
    X = [[zero for _ in range(N)] for _ in range(N)]

    def add_block(bi, bj, coef, K):
        for i in range(n):
            Ki = K[i]
            Xi = X[bi + i]
            for j in range(n):
                Xi[bj + j] = Xi[bj + j] + coef * Ki[j]

    for z in sorted(partition.mixed, key=lambda w: (w.order, w.index)):
        if flavor is DihedralFlavor.STRICT:
            K = cyclotomic_idempotent_exact(n, z, ring_order=order)
        else:
            K = nega_cyclotomic_idempotent_exact(n, z, ring_order=order)
        u, v = exact_pairs[z]
        uc, vc = u.conjugate(), v.conjugate()
        add_block(0, 0, u * uc, K)
        add_block(0, n, u * vc, K)
        add_block(n, 0, v * uc, K)
        add_block(n, n, v * vc, K)
    one = CycloPoly.rational(order, 1)
    for z in sorted(partition.full, key=lambda w: (w.order, w.index)):
        if flavor is DihedralFlavor.STRICT:
            K = cyclotomic_idempotent_exact(n, z, ring_order=order)
        else:
            K = nega_cyclotomic_idempotent_exact(n, z, ring_order=order)
        add_block(0, 0, one, K)
        add_block(n, n, one, K)
    return X
