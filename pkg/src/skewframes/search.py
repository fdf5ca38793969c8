"""Exhaustive search for two-negacirculant skew Hadamard matrices and
classification of the resulting ETF Gram matrices up to equivalence.

The search space for order 2n is pairs of +-1 rows (a, b) of length n
where a[0] == 1 and a[k] == a[n-k] (so negacirculant(a) is skew) and
P P^T + Q Q^T == 2n I.  Writing S for the sign-twisted rotation
S(v) = (-v[n-1], v[0], ..., v[n-2]) (row i of negacirculant(v) is
S^i v), the matrix condition is equivalent to

    <a, S^s a> + <b, S^s b> == 0   for s = 1..n-1,

and since <v, S^(n-s) v> == -<v, S^s v> (S is orthogonal with
S^n == -I), only the shifts s = 1..n/2-1 bind.  Vectors are packed into
integers, one bit per sign (+1 -> 1), most significant bit first, which
turns each correlation into an xor plus popcount.

The enumeration is meet-in-the-middle: every b is reduced to the
maximum integer in its S-orbit (the orbit includes -b = S^n b, and the
maximum is found by sweeping the 2^n encodings in descending order),
the canonical b values are bucketed by their correlation popcount
profile, and then each admissible a looks up the complementary profile.

Classification groups the surviving pairs by Gram matrix equivalence
and tags each class that matches a Paley-type reference:
"P" for the Paley gram on GF(2n-1), "DP" for the doubled Paley gram on
GF(n-1), "CDP" for its conjugate; ties are reported with the priority
P > DP > CDP.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .algebra import circulant
from .equiv import are_equivalent, equivalence_fingerprint
from .frames import GramMatrix
from .hadamard import BlockSkewHadamard, assemble, block_etf_gram, hex_decode, hex_encode
from .paley import FiniteField, conj_double_paley_gram, double_paley_gram, paley_gram


# ---------------------------------------------------------------------------
# bit-packed sign vectors


def _pack(v) -> int:
    x = 0
    for s in v:
        x = (x << 1) | (1 if s == 1 else 0)
    return x


def _unpack(x: int, n: int) -> tuple:
    return tuple(1 if (x >> (n - 1 - k)) & 1 else -1 for k in range(n))


def _shift(x: int, n: int) -> int:
    """Bit image of the sign-twisted rotation S."""
    return (x >> 1) | ((~x & 1) << (n - 1))


def _correlation_popcounts(x: int, n: int, count: int) -> tuple:
    """popcount(x ^ S^s x) for s = 1..count; <v, S^s v> = n - 2 popcount."""
    out = []
    y = x
    for _ in range(count):
        y = _shift(y, n)
        out.append((x ^ y).bit_count())
    return tuple(out)


def canonicalize_b(b) -> tuple:
    """Representative of the orbit of b under sign-twisted rotations and
    negation: the encoding-maximal member (negation is S^n, so the whole
    orbit is the S-orbit of length dividing 2n)."""
    t = tuple(int(s) for s in b)
    if any(s not in (1, -1) for s in t):
        raise ValueError("expected a +-1 vector")
    n = len(t)
    x = _pack(t)
    best = x
    y = x
    for _ in range(2 * n - 1):
        y = _shift(y, n)
        if y > best:
            best = y
    return _unpack(best, n)


# ---------------------------------------------------------------------------
# enumeration


def _bucket_canonical_b(n: int):
    """Map correlation profile -> canonical b encodings, sweeping all
    2^n encodings downward so each orbit is charged to its maximum."""
    half = n // 2
    size = 1 << n
    seen = bytearray(size)
    buckets: dict = {}
    period = 2 * n
    for x in range(size - 1, -1, -1):
        if seen[x]:
            continue
        y = x
        for _ in range(period):
            seen[y] = 1
            y = _shift(y, n)
        key = _correlation_popcounts(x, n, half - 1)
        buckets.setdefault(key, []).append(x)
    return buckets


def _admissible_a(n: int):
    """All encodings of rows a with a[0] == 1 and a[k] == a[n-k]."""
    half = n // 2
    out = []
    for f in range(1 << half):
        a = [1] * n
        for k in range(1, half + 1):
            s = 1 if (f >> (k - 1)) & 1 else -1
            a[k] = s
            a[n - k] = s
        out.append(_pack(a))
    return out


def _scan_shard(args) -> list:
    n, a_values, buckets = args
    half = n // 2
    found = []
    for a in a_values:
        key = _correlation_popcounts(a, n, half - 1)
        target = tuple(n - p for p in key)
        for b in buckets.get(target, ()):
            found.append((a, b))
    return found


def enumerate(n: int, jobs: int = 1) -> List[BlockSkewHadamard]:
    """All two-negacirculant skew Hadamard matrices of order 2n with
    canonical second row, sorted by (hex(a), hex(b)).  Only even n is
    supported: for odd n the diagonal shift s = n/2 is unavailable and
    this search space is not defined."""
    if not isinstance(n, int) or n < 2 or n % 2 != 0:
        raise ValueError("enumeration is supported for even n >= 2 only")
    if jobs < 1:
        raise ValueError("jobs must be at least 1")
    buckets = _bucket_canonical_b(n)
    a_values = _admissible_a(n)
    if jobs == 1:
        pairs = _scan_shard((n, a_values, buckets))
    else:
        shards = [(n, a_values[i::jobs], buckets) for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            pairs = [p for chunk in pool.map(_scan_shard, shards) for p in chunk]
    records = [
        BlockSkewHadamard(n=n, a=_unpack(a, n), b=_unpack(b, n))
        for a, b in pairs
    ]
    records.sort(key=lambda r: (hex_encode(r.a), hex_encode(r.b)))
    return records


def brute_force_enumerate(n: int) -> List[Tuple[tuple, tuple]]:
    """Independent small-n oracle: test every (a, b) with canonical b
    directly against the defining matrix identities."""
    if n < 2 or n % 2 != 0:
        raise ValueError("even n >= 2 only")
    out = []
    eye = 2 * n * np.eye(n, dtype=np.int64)
    for a_enc in _admissible_a(n):
        a = _unpack(a_enc, n)
        for b_enc in range(1 << n):
            b = _unpack(b_enc, n)
            if canonicalize_b(b) != b:
                continue
            H = assemble(a, b)
            PP = H[:n, :n] @ H[:n, :n].T + H[:n, n:] @ H[:n, n:].T
            if np.array_equal(PP, eye):
                out.append((a, b))
    out.sort(key=lambda p: (hex_encode(p[0]), hex_encode(p[1])))
    return out


# ---------------------------------------------------------------------------
# 2-circulant variant


def enumerate_2circulant(n: int) -> list:
    """Exhaustive search for [[C, D], [-D^T, C^T]] skew Hadamard with C,
    D circulant, order 2n; n is capped because the scan is naive.  The
    skew condition forces a[s] == -a[n-s] on the first row of C, which
    is unsatisfiable over +-1 at s = n/2, so the search verifies
    emptiness rather than assuming it."""
    if n < 2 or n % 2 != 0:
        raise ValueError("even n >= 2 only")
    if n > 12:
        raise ValueError("naive scan capped at n <= 12")
    out = []
    eye2 = 2 * np.eye(n, dtype=np.int64)
    eye2n = 2 * n * np.eye(n, dtype=np.int64)
    for a_enc in range(1 << (n - 1)):
        a = (1,) + _unpack(a_enc, n - 1)
        C = circulant(a).real.astype(np.int64)
        if not np.array_equal(C + C.T, eye2):
            continue
        for b_enc in range(1 << n):
            b = _unpack(b_enc, n)
            D = circulant(b).real.astype(np.int64)
            if np.array_equal(C @ C.T + D @ D.T, eye2n):
                out.append((a, b))
    return out


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class SolutionRecord:
    """One equivalence class of solutions for a given n, carried by its
    lexicographically least member."""

    n: int
    a_hex: str
    b_hex: str
    symmetry_type: Optional[str]
    class_id: int
    all_types: Optional[tuple] = None


def _prime_power(m: int):
    if m < 2:
        return None
    p = 2
    while p * p <= m:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            return (p, k) if m == 1 else None
        p += 1
    return (m, 1)


def paley_reference_grams(n: int) -> dict:
    """The Paley-type reference Grams available at this n, keyed by tag."""
    out = {}
    pp = _prime_power(2 * n - 1)
    if pp is not None and (2 * n - 1) % 4 == 3:
        out["P"] = paley_gram(FiniteField(*pp))
    pp = _prime_power(n - 1)
    if pp is not None and n >= 3 and (n - 1) % 4 == 3:
        field = FiniteField(*pp)
        out["DP"] = double_paley_gram(field)
        out["CDP"] = conj_double_paley_gram(field)
    return out


def record_gram(record) -> GramMatrix:
    """Gram matrix of a solution's sign matrix (accepts BlockSkewHadamard
    or SolutionRecord)."""
    if isinstance(record, SolutionRecord):
        a = hex_decode(record.a_hex, record.n)
        b = hex_decode(record.b_hex, record.n)
        return block_etf_gram(assemble(a, b))
    return block_etf_gram(record.matrix())


def classify(n: int, jobs: int = 1, solutions=None) -> List[SolutionRecord]:
    """Group the solutions for this n into equivalence classes of their
    Gram matrices and tag Paley-type classes.  Returns one record per
    class, ordered and represented by the least (hex(a), hex(b)) member,
    class_id counting from 1."""
    if solutions is None:
        solutions = enumerate(n, jobs=jobs)
    reps: List[GramMatrix] = []
    members: List[BlockSkewHadamard] = []
    fingerprints: List[tuple] = []
    for sol in solutions:
        G = record_gram(sol)
        fp = equivalence_fingerprint(G)
        placed = False
        for i in range(len(reps)):
            # fingerprints are invariants of these (vertex-transitive)
            # grams, so unequal fingerprints settle inequivalence cheaply
            if fingerprints[i] != fp:
                continue
            if are_equivalent(reps[i], G, assume_transitive=True).equivalent:
                placed = True
                break
        if not placed:
            reps.append(G)
            members.append(sol)
            fingerprints.append(fp)
    refs = paley_reference_grams(n)
    records = []
    for i in range(len(reps)):
        tags = tuple(
            tag for tag in ("P", "DP", "CDP")
            if tag in refs
            and are_equivalent(reps[i], refs[tag], assume_transitive=True).equivalent
        )
        records.append(SolutionRecord(
            n=n,
            a_hex=hex_encode(members[i].a),
            b_hex=hex_encode(members[i].b),
            symmetry_type=tags[0] if tags else None,
            class_id=i + 1,
            all_types=tags,
        ))
    return records


# ---------------------------------------------------------------------------
# persistence


def save_records(records, path):
    """Tab-separated rows n, hex(a), hex(b), type ('-' when untyped),
    class_id; UTF-8 text."""
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            t = r.symmetry_type if r.symmetry_type else "-"
            fh.write(f"{r.n}\t{r.a_hex}\t{r.b_hex}\t{t}\t{r.class_id}\n")


def load_records(path) -> List[SolutionRecord]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise ValueError("expected 5 tab-separated columns")
            n, a_hex, b_hex, t, class_id = parts
            out.append(SolutionRecord(
                n=int(n),
                a_hex=a_hex.upper(),
                b_hex=b_hex.upper(),
                symmetry_type=None if t == "-" else t,
                class_id=int(class_id),
            ))
    return out
