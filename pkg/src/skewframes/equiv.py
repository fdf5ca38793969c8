"""Switching/permutation equivalence of ETF Gram matrices, decided in
exact integer arithmetic.

Two Gram matrices are equivalent when some monomial matrix Pi (a
permutation with unimodular column scalings) satisfies
G1 = Pi G0 Pi*.  All Gram matrices handled here have an exact view
K = sqrt(N-1) (G - I) with entries in {0, +-1, +-i}, so the whole
question is combinatorial:

- normalize(G, anchor) moves the anchor vertex to index 0 and rescales
  so the entire first row and column of K become +1.  Phases are then
  completely pinned: any residual equivalence between two normalized
  grams that keeps index 0 fixed is a pure permutation of {1..N-1}.
- are_equivalent matches G0 normalized at anchor 0 against G1
  normalized at every anchor (transitive grams need only anchor 0),
  trying each candidate image for the vertex labelled 1 and running a
  forward-checked backtracking search for the residual permutation.
- Certificates are returned as (permutation, phases) and are verified
  against both the float and the exact data before being returned.

canonical_profile aggregates per-vertex integer invariants into a
fingerprint that is equal for equivalent vertex-transitive grams, which
is what makes classification by bucketing sound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .frames import GramMatrix


class NotEtfGramError(ValueError):
    """The matrix has no exact {0, +-1, +-i} scaled off-diagonal view."""


_UNITS = (1 + 0j, -1 + 0j, 1j, -1j)
_CODE_OF = {(1, 0): 1, (-1, 0): 2, (0, 1): 3, (0, -1): 4}


def _exact_view(G: GramMatrix) -> np.ndarray:
    """sqrt(N-1) (G - I) with entries verified to be 0 on the diagonal
    and Gaussian units off it."""
    if G.exact_scaled is not None:
        K = np.asarray(G.exact_scaled, dtype=complex)
    else:
        N = G.size
        K = np.sqrt(N - 1) * (G.values - np.eye(N))
    R = np.rint(K.real)
    I = np.rint(K.imag)
    if float(np.max(np.abs(K - (R + 1j * I)))) > 1e-6:
        raise NotEtfGramError("scaled off-diagonal entries are not Gaussian integers")
    K = R + 1j * I
    N = K.shape[0]
    off = ~np.eye(N, dtype=bool)
    if np.any(np.abs(R) + np.abs(I) != off.astype(float)):
        raise NotEtfGramError("entries are not Gaussian units off the diagonal")
    return K


def _codes(K: np.ndarray) -> np.ndarray:
    """int8 encoding 0,+1,-1,+i,-i -> 0,1,2,3,4 for fast comparisons."""
    out = np.zeros(K.shape, dtype=np.int8)
    out[K == 1] = 1
    out[K == -1] = 2
    out[K == 1j] = 3
    out[K == -1j] = 4
    return out


@dataclass(frozen=True)
class NormalizedGram:
    """Result of normalize(): gram carries the normalized floats, exact
    the integer view with all-ones first row and column; order[new] is
    the original index now sitting at position new, and phases holds the
    unimodular scalings applied after that reordering."""

    gram: GramMatrix
    exact: np.ndarray
    order: tuple
    phases: tuple


def normalize(G: GramMatrix, anchor: int = 0) -> NormalizedGram:
    K = _exact_view(G)
    N = K.shape[0]
    if not 0 <= anchor < N:
        raise ValueError("anchor out of range")
    order = list(range(N))
    order[0], order[anchor] = order[anchor], order[0]
    K1 = K[np.ix_(order, order)]
    d = np.ones(N, dtype=complex)
    d[1:] = K1[0, 1:]
    NK = (d[:, None] * K1) * d.conj()[None, :]
    values = np.eye(N) + NK / np.sqrt(N - 1)
    return NormalizedGram(
        gram=GramMatrix(values, exact_scaled=NK),
        exact=NK,
        order=tuple(order),
        phases=tuple(d),
    )


def _charpoly_gaussian_int(M: np.ndarray) -> tuple:
    """Characteristic polynomial coefficients of a Gaussian-integer
    matrix, exactly, via the Faddeev-LeVerrier recurrence on arbitrary
    precision integers.  Returns ((re, im), ...) for c_1..c_k in
    x^k + c_1 x^(k-1) + ... + c_k."""
    k = M.shape[0]
    if k == 0:
        return ()
    A = [[(int(round(M[i, j].real)), int(round(M[i, j].imag)))
          for j in range(k)] for i in range(k)]

    def mat_mul(X, Y):
        out = []
        for i in range(k):
            row = []
            Xi = X[i]
            for j in range(k):
                sr = si = 0
                for t in range(k):
                    ar, ai = Xi[t]
                    br, bi = Y[t][j]
                    sr += ar * br - ai * bi
                    si += ar * bi + ai * br
                row.append((sr, si))
            out.append(row)
        return out

    coeffs = []
    B = A
    for i in range(1, k + 1):
        tr_r = sum(B[t][t][0] for t in range(k))
        tr_i = sum(B[t][t][1] for t in range(k))
        assert tr_r % i == 0 and tr_i % i == 0
        c = (-tr_r // i, -tr_i // i)
        coeffs.append(c)
        if i < k:
            Bc = [row[:] for row in B]
            for t in range(k):
                Bc[t][t] = (Bc[t][t][0] + c[0], Bc[t][t][1] + c[1])
            B = mat_mul(A, Bc)
    return tuple(coeffs)


def invariant_signature(ng: NormalizedGram) -> tuple:
    """Hashable invariant of a normalized gram, preserved by any
    equivalence that fixes the normalized vertices 0 and 1: the indices
    {2..N-1} are partitioned by their value in row 1 of the exact view,
    and each part contributes its size and the exact characteristic
    polynomial of its principal submatrix."""
    K = ng.exact
    N = K.shape[0]
    parts = []
    for v in _UNITS:
        sel = [k for k in range(2, N) if K[1, k] == v]
        sub = K[np.ix_(sel, sel)]
        parts.append((
            _CODE_OF[(int(v.real), int(v.imag))],
            len(sel),
            _charpoly_gaussian_int(sub),
        ))
    return (N, tuple(parts))


@dataclass(frozen=True)
class EquivalenceCertificate:
    """Monomial witness: with p = permutation and f = phases, the matrix
    Pi with Pi[p[j], j] = f[p[j]] satisfies Pi G0 Pi* == G1."""

    permutation: tuple
    phases: tuple

    def apply(self, G: GramMatrix) -> GramMatrix:
        M = G.values
        N = M.shape[0]
        p = np.asarray(self.permutation)
        f = np.asarray(self.phases, dtype=complex)
        out = np.empty_like(M)
        out[np.ix_(p, p)] = (f[p, None] * M) * f[p].conj()[None, :]
        exact = None
        if G.exact_scaled is not None:
            E = np.asarray(G.exact_scaled, dtype=complex)
            exact = np.empty_like(E)
            exact[np.ix_(p, p)] = (f[p, None] * E) * f[p].conj()[None, :]
        return GramMatrix(out, exact_scaled=exact)


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    certificate: Optional[EquivalenceCertificate] = None


def _wl_colors(codes: np.ndarray):
    """Canonical stable pair coloring by Weisfeiler-Leman style
    refinement: the color of a pair (i, j) starts as its value code and
    is repeatedly refined by a 64-bit sketch of the multiset of color
    pairs ((i, k), (k, j)) over all middle points k.

    The relabeling after every round orders colors by their (old color,
    sketch) signature, so two matrices related by a simultaneous row and
    column permutation get identical color matrices up to that
    permutation, and in particular identical histograms; this is what
    makes the histogram a sound pruning invariant and the colors sound
    candidate filters.  Sketch collisions can only make the refinement
    coarser, never unsound.
    """
    C = codes.astype(np.int64)
    N = C.shape[0]
    rng = np.random.default_rng(0x5EED)
    while True:
        ncol = int(C.max()) + 1
        w1 = rng.integers(1, 1 << 62, size=ncol, dtype=np.int64)
        w2 = rng.integers(1, 1 << 62, size=ncol, dtype=np.int64)
        S = w1[C] @ w2[C]
        sig = np.stack([C.ravel(), S.ravel()], axis=1)
        _, inv = np.unique(sig, axis=0, return_inverse=True)
        C = inv.reshape(N, N).astype(np.int64)
        if int(C.max()) + 1 == ncol:
            break
    # canonical ids make the id-tagged histogram itself an invariant
    hist = tuple(np.bincount(C.ravel()).tolist())
    return C, hist


def _row_signatures(col: np.ndarray):
    """Per-vertex invariant under pair-color-preserving permutations:
    the diagonal color plus the sorted row and column color multisets."""
    N = col.shape[0]
    return [
        (int(col[i, i]), tuple(sorted(col[i].tolist())),
         tuple(sorted(col[:, i].tolist())))
        for i in range(N)
    ]


def _find_permutation(col0, col1, rows0, rows1):
    """Permutation sigma of {0..N-1} with sigma(0) = 0 and
    col1[sigma u, sigma w] == col0[u, w] for all u, w; None if none
    exists.  Equal stable colors imply equal value codes, so any sigma
    found here carries the normalized exact view onto the other.

    Forward-checked backtracking, always extending the vertex with the
    fewest remaining candidates.  Candidate sets are bitsets (ints, bit
    t = target vertex t) so the inner loop is pure integer arithmetic:
    the candidates of w after mapping u -> k are the old candidates
    intersected with {t : col1[k, t] == col0[u, w]} and
    {t : col1[t, k] == col0[w, u]}, both precomputed per (k, color)."""
    N = col0.shape[0]
    C0 = col0.tolist()
    C1 = col1.tolist()
    row_mask = []  # row_mask[k][v] bits = {t : col1[k, t] == v}
    col_mask = []  # col_mask[k][v] bits = {t : col1[t, k] == v}
    for k in range(N):
        rk: dict = {}
        row_mask.append(rk)
        for t, v in enumerate(C1[k]):
            rk[v] = rk.get(v, 0) | (1 << t)
    for k in range(N):
        ck: dict = {}
        col_mask.append(ck)
        for t in range(N):
            v = C1[t][k]
            ck[v] = ck.get(v, 0) | (1 << t)

    diag_mask: dict = {}
    sig_mask: dict = {}
    for k in range(N):
        v = C1[k][k]
        diag_mask[v] = diag_mask.get(v, 0) | (1 << k)
        s = rows1[k]
        sig_mask[s] = sig_mask.get(s, 0) | (1 << k)

    anchor_row = row_mask[0]
    anchor_col = col_mask[0]
    nonzero = ((1 << N) - 1) ^ 1
    masks = {}
    for u in range(1, N):
        m = (nonzero
             & anchor_row.get(C0[0][u], 0)
             & anchor_col.get(C0[u][0], 0)
             & diag_mask.get(C0[u][u], 0)
             & sig_mask.get(rows0[u], 0))
        if m == 0:
            return None
        masks[u] = m

    assignment = {0: 0}

    def extend(masks):
        if not masks:
            return True
        u = min(masks, key=lambda w: masks[w].bit_count())
        row_u = C0[u]
        cand = masks[u]
        while cand:
            k_bit = cand & -cand
            cand ^= k_bit
            k = k_bit.bit_length() - 1
            rmk = row_mask[k]
            cmk = col_mask[k]
            keep = ~k_bit
            narrowed = {}
            feasible = True
            for w, mw in masks.items():
                if w == u:
                    continue
                nm = (mw & keep
                      & rmk.get(row_u[w], 0)
                      & cmk.get(C0[w][u], 0))
                if nm == 0:
                    feasible = False
                    break
                narrowed[w] = nm
            if feasible:
                assignment[u] = k
                if extend(narrowed):
                    return True
                del assignment[u]
        return False

    if extend(masks):
        return assignment
    return None


def _certificate_from(ng0: NormalizedGram, ng1: NormalizedGram, sigma: dict,
                      N: int) -> EquivalenceCertificate:
    """Compose (normalize G0) -> (permute by sigma) -> (unnormalize G1)
    into a single monomial matrix and read off its permutation/phases."""
    def perm_matrix(order):
        P = np.zeros((N, N))
        for new, old in enumerate(order):
            P[new, old] = 1.0
        return P

    P0 = perm_matrix(ng0.order)
    P1 = perm_matrix(ng1.order)
    D0 = np.diag(np.asarray(ng0.phases, dtype=complex))
    D1 = np.diag(np.asarray(ng1.phases, dtype=complex))
    L = np.zeros((N, N))
    for u, k in sigma.items():
        L[k, u] = 1.0
    Pi = P1.T @ D1.conj().T @ L @ D0 @ P0
    perm = [0] * N
    phases = [0j] * N
    for j in range(N):
        i = int(np.argmax(np.abs(Pi[:, j])))
        perm[j] = i
        phases[i] = complex(Pi[i, j])
    return EquivalenceCertificate(tuple(perm), tuple(phases))


def _verify_certificate(cert, G0, G1) -> bool:
    mapped = cert.apply(G0)
    if float(np.max(np.abs(mapped.values - G1.values))) > 1e-9:
        return False
    if mapped.exact_scaled is not None and G1.exact_scaled is not None:
        return bool(np.array_equal(mapped.exact_scaled, G1.exact_scaled))
    return True


def are_equivalent(G0: GramMatrix, G1: GramMatrix,
                   assume_transitive: bool = False) -> EquivalenceResult:
    """Decide monomial equivalence of two exact-view Gram matrices.

    assume_transitive=True restricts the anchor scan to index 0; that is
    sound whenever either gram has a vertex-transitive automorphism
    group (compose any equivalence with an automorphism moving the
    anchor), which holds for all Gram matrices built from dihedral
    orbits or Paley matrices in this package.
    """
    if G0.size != G1.size:
        raise ValueError("Gram matrices must have equal size")
    N = G0.size
    ng0 = normalize(G0, 0)
    col0, hist0 = _wl_colors(_codes(ng0.exact))
    rows0 = _row_signatures(col0)

    anchors = [0] if assume_transitive else list(range(N))
    for anchor in anchors:
        ng1 = normalize(G1, anchor)
        col1, hist1 = _wl_colors(_codes(ng1.exact))
        if hist1 != hist0:
            continue
        rows1 = _row_signatures(col1)
        sigma = _find_permutation(col0, col1, rows0, rows1)
        if sigma is None:
            continue
        cert = _certificate_from(ng0, ng1, sigma, N)
        if not _verify_certificate(cert, G0, G1):
            raise RuntimeError("internal error: certificate failed verification")
        return EquivalenceResult(True, cert)
    return EquivalenceResult(False, None)


def equivalence_fingerprint(G: GramMatrix) -> tuple:
    """Histogram of the stable pair colors of the anchor-0 normalized
    exact view.  Equivalent vertex-transitive grams always agree (an
    equivalence can be composed with an automorphism to fix the anchor),
    so unequal fingerprints prove transitive grams inequivalent."""
    ng = normalize(G, 0)
    _, hist = _wl_colors(_codes(ng.exact))
    return (G.size, hist)


def canonical_profile(G: GramMatrix) -> tuple:
    """Fingerprint for bucketing vertex-transitive grams: the sorted
    multiset, over each choice of second vertex j, of the per-value
    class sizes, block entry sums, and power traces of the normalized
    exact view.  Equivalent transitive grams always agree; unequal
    profiles prove inequivalence."""
    ng = normalize(G, 0)
    K = ng.exact
    N = K.shape[0]
    rows = []
    for j in range(1, N):
        sels = [[k for k in range(1, N) if k != j and K[j, k] == v] for v in _UNITS]
        entry = []
        for si, sel in enumerate(sels):
            M = K[np.ix_(sel, sel)]
            t2 = complex(np.trace(M @ M)) if sel else 0j
            t3 = complex(np.trace(M @ M @ M)) if sel else 0j
            cross = []
            for sel2 in sels:
                s = complex(np.sum(K[np.ix_(sel, sel2)])) if sel and sel2 else 0j
                cross.append((int(round(s.real)), int(round(s.imag))))
            entry.append((len(sel),
                          int(round(t2.real)), int(round(t2.imag)),
                          int(round(t3.real)), int(round(t3.imag)),
                          tuple(cross)))
        rows.append(tuple(entry))
    return (N, tuple(sorted(rows)))
