"""Random cokernel sampling with reproducible counter-based streams.

Each sample index owns a Philox counter block derived from (seed, stream_id),
so a run partitioned across any number of workers draws byte-identical
samples. The draw order inside one sample is fixed: first the n free
relator vectors (row-major coordinates mod ell^k), then for each subgroup
in tuple order, for each of the n slots, one coefficient per fixed-module
generator in generator order.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .gring import GroupRingB
from .invariants import IsotypicContext, TypeMatrix


@lru_cache(maxsize=64)
def _stream_key(seed: int, stream_id: int) -> tuple[int, int]:
    words = np.random.SeedSequence([seed, stream_id]).generate_state(2, np.uint64)
    return int(words[0]), int(words[1])


def sample_rng(seed: int, index: int, stream_id: int = 0) -> np.random.Generator:
    """Generator for one sample, independent of how samples are batched."""
    bits = np.random.Philox(key=_stream_key(seed, stream_id), counter=[0, 0, 0, index])
    return np.random.Generator(bits)


def draw_relators(ring: GroupRingB, n: int, gammas, rng: np.random.Generator) -> np.ndarray:
    """The n + u + 1 relator vectors of one sample, one per row of shape n * dim."""
    dim = ring.dim
    free = rng.integers(0, ring.q, size=(n, n * dim), dtype=np.int64)
    rows = [free]
    for sub in gammas:
        gens = ring.fixed_generators(sub)
        row = np.zeros(n * dim, dtype=np.int64)
        for s in range(n):
            for vec, e in gens:
                c = int(rng.integers(0, ring.ell**e))
                row[s * dim : (s + 1) * dim] += c * vec
        rows.append(row[None, :] % ring.q)
    return np.vstack(rows)


def closure_rows(ring: GroupRingB, n: int, relators: np.ndarray) -> np.ndarray:
    """Stack of all group translates of the relators; their span is the relation module."""
    dim = ring.dim
    out = []
    for g in range(ring.gamma.order):
        mat = ring.action_matrix(g)
        moved = np.zeros_like(relators)
        for s in range(n):
            moved[:, s * dim : (s + 1) * dim] = relators[:, s * dim : (s + 1) * dim] @ mat.T % ring.q
        out.append(moved % ring.q)
    return np.vstack(out)


def sample_type(ctx: IsotypicContext, n: int, gammas, seed: int, index: int, stream_id: int = 0) -> TypeMatrix:
    """Isomorphism type of the sampled cokernel for one sample index."""
    rng = sample_rng(seed, index, stream_id)
    relators = draw_relators(ctx.ring, n, gammas, rng)
    rows = closure_rows(ctx.ring, n, relators)
    return ctx.fingerprint_of_cokernel(n, rows)
