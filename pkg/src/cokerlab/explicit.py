"""Concrete finite (Z/ell^k)[Gamma]-modules in diagonal coordinates.

An ExplicitModule stores cyclic coordinate moduli (powers of ell) and one
integer action matrix per group element. It supports element enumeration,
equivariant structure maps, and exact hom counting by linear algebra, and
is the brute-force counterpart to the closed-form counts elsewhere.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .groups import FiniteGroupTable, Subgroup
from .gring import GroupRingB
from . import linalg


class ExplicitModule:
    """Finite module with coordinates z_i mod moduli[i] and column action z -> T_g z."""

    def __init__(self, gamma: FiniteGroupTable, ell: int, k: int, moduli, action) -> None:
        self.gamma = gamma
        self.ell = ell
        self.k = k
        self.moduli = tuple(int(m) for m in moduli)
        self.rank = len(self.moduli)
        for m in self.moduli:
            if m < 2 or ell ** _ilog(m, ell) != m or m > ell**k:
                raise ValueError("moduli must be powers of ell between ell and ell^k")
        mats = [np.asarray(t, dtype=np.int64) for t in action]
        if len(mats) != gamma.order:
            raise ValueError("need one action matrix per group element")
        self._mod_col = np.array(self.moduli, dtype=np.int64)
        self.action = []
        for t in mats:
            if t.shape != (self.rank, self.rank):
                raise ValueError("action matrix has wrong shape")
            self.action.append(self._reduce(t % (ell**k)))
        if not np.array_equal(self.action[0], self._reduce(np.eye(self.rank, dtype=np.int64))):
            raise ValueError("identity element must act as the identity")
        for i in range(self.rank):
            for j in range(self.rank):
                for t in self.action:
                    if (int(t[i, j]) * self.moduli[j]) % self.moduli[i]:
                        raise ValueError("action does not respect the coordinate moduli")
        for g in range(gamma.order):
            for h in range(gamma.order):
                lhs = self._reduce(self.action[g] @ self.action[h])
                if not np.array_equal(lhs, self.action[int(gamma.mul[g, h])]):
                    raise ValueError("action matrices are not multiplicative")

    def _reduce(self, m: np.ndarray) -> np.ndarray:
        return m % self._mod_col[:, None] if m.size else m

    @property
    def order(self) -> int:
        out = 1
        for m in self.moduli:
            out *= m
        return out

    def reduce_vec(self, z) -> np.ndarray:
        return np.asarray(z, dtype=np.int64) % self._mod_col

    def elements(self):
        """All elements as coordinate arrays, lexicographic order."""
        for tup in product(*[range(m) for m in self.moduli]):
            yield np.array(tup, dtype=np.int64)

    def act(self, g: int, z) -> np.ndarray:
        return self.reduce_vec(self.action[g] @ np.asarray(z, dtype=np.int64))

    def ring_action(self, coeffs) -> np.ndarray:
        """Matrix of sum_g coeffs[g] * g acting on coordinates."""
        coeffs = np.asarray(coeffs, dtype=np.int64)
        out = np.zeros((self.rank, self.rank), dtype=np.int64)
        for g in np.nonzero(coeffs % self.ell**self.k)[0]:
            out = out + int(coeffs[g]) * self.action[g]
        return self._reduce(out)

    def b_action(self, bvec) -> np.ndarray:
        """Matrix of a quotient-ring element given in the (gamma - 1) basis."""
        bvec = np.asarray(bvec, dtype=np.int64)
        out = np.zeros((self.rank, self.rank), dtype=np.int64)
        eye = np.eye(self.rank, dtype=np.int64)
        for t in range(len(bvec)):
            c = int(bvec[t]) % self.ell**self.k
            if c:
                out = out + c * (self.action[t + 1] - eye)
        return self._reduce(out)

    # --- scaled embedding into (Z/ell^k)^rank ---

    def scale_in(self, z) -> np.ndarray:
        """Embed coordinates into (Z/ell^k)^rank via z_i -> ell^(k-a_i) z_i."""
        q = self.ell**self.k
        return (np.asarray(z, dtype=np.int64) * (q // self._mod_col)) % q

    def scaled_action_mats(self) -> list[np.ndarray]:
        """Integer matrices acting on the scaled image, one per group element."""
        q = self.ell**self.k
        out = []
        for t in self.action:
            s = np.zeros((self.rank, self.rank), dtype=np.int64)
            for i in range(self.rank):
                for j in range(self.rank):
                    v = int(t[i, j]) * (q // self.moduli[i])
                    if v % (q // self.moduli[j]):
                        raise RuntimeError("scaled action entry is not integral")
                    s[i, j] = (v // (q // self.moduli[j])) % q
            out.append(s)
        return out

    def subgroup_rows(self) -> np.ndarray:
        """Howell rows of the scaled image subgroup of (Z/ell^k)^rank."""
        q = self.ell**self.k
        gens = np.diag(q // self._mod_col)
        return linalg.howell_form(gens, self.ell, self.k)

    def fixed_count_log(self, sub: Subgroup) -> int:
        """log_ell of the number of fixed points of the subgroup action."""
        q = self.ell**self.k
        rows = []
        eye = np.eye(self.rank, dtype=np.int64)
        mats = self.scaled_action_mats()
        scale = np.diag(q // self._mod_col)
        for g in sub.members:
            if g != 0:
                rows.append(((mats[g] - eye) @ scale) % q)
        if not rows:
            return sum(_ilog(m, self.ell) for m in self.moduli)
        kgens = linalg.kernel_generators(np.vstack(rows), self.ell, self.k)
        log_kernel = sum(e for _, e in kgens)
        excess = sum(self.k - _ilog(int(m), self.ell) for m in self.moduli)
        if log_kernel < excess:
            raise RuntimeError("fixed-point kernel smaller than the coordinate redundancy")
        return log_kernel - excess

    @classmethod
    def from_cokernel(cls, ring: GroupRingB, n: int, rel_rows) -> "ExplicitModule":
        """Module B^n / L for L the span of the given relation rows.

        The rows must already span a Gamma-stable subgroup. Coordinates come
        from diagonalizing the relation lattice.
        """
        ell, k = ring.ell, ring.k
        q = ell**k
        nn = n * ring.dim
        rel = np.asarray(rel_rows, dtype=np.int64).reshape(-1, nn) % q
        if rel.shape[0] == 0:
            rel = np.zeros((1, nn), dtype=np.int64)
        # columns of rel.T span L; with z = u2 @ x the lattice becomes diagonal
        d, u2, _ = linalg.smith_normal_form(rel.T, ell, k)
        u2 = u2 % q
        u2inv = linalg.invert_unit_matrix(u2, ell, k)
        diag = [int(d[i, i]) % q for i in range(min(d.shape))]
        moduli = []
        keep = []
        for i in range(nn):
            dv = diag[i] if i < len(diag) else 0
            m = q if dv == 0 else ell ** linalg.valuation(dv, ell, k)
            if m > 1:
                keep.append(i)
                moduli.append(m)
        gamma = ring.gamma
        acts = []
        for g in range(gamma.order):
            a = ring.action_matrix(g)
            big = np.zeros((nn, nn), dtype=np.int64)
            for t in range(n):
                big[t * ring.dim : (t + 1) * ring.dim, t * ring.dim : (t + 1) * ring.dim] = a
            conj = (u2 @ big) % q @ u2inv % q
            acts.append(conj[np.ix_(keep, keep)])
        mod = cls(gamma, ell, k, moduli, acts)
        mod._coords_mat = u2[keep, :] % q
        mod._rep_mat = u2inv[:, keep] % q
        mod._source = (n, rel)
        return mod

    def coords_of(self, ambient_vec) -> np.ndarray:
        """Coordinates of an ambient presentation vector (from_cokernel only)."""
        return self.reduce_vec(self._coords_mat @ np.asarray(ambient_vec, dtype=np.int64))

    def ambient_of(self, z) -> np.ndarray:
        """One ambient representative of a coordinate vector (from_cokernel only)."""
        return (self._rep_mat @ np.asarray(z, dtype=np.int64)) % self.ell**self.k


def _ilog(m: int, ell: int) -> int:
    out = 0
    while m % ell == 0 and m > 1:
        m //= ell
        out += 1
    if m != 1:
        raise ValueError("not a power of ell")
    return out


def module_from_blocks(gamma: FiniteGroupTable, ell: int, k: int, blocks) -> ExplicitModule:
    """Direct sum of lifted irreducible blocks.

    blocks: iterable of (lifted_mats, j, copies) where lifted_mats are the
    per-element matrices mod ell^k of an irreducible lift; each copy
    contributes coordinates mod ell^j with the reduced action.
    """
    moduli: list[int] = []
    pieces: list[tuple] = []
    for mats, j, copies in blocks:
        dim = mats[0].shape[0]
        for _ in range(copies):
            moduli.extend([ell**j] * dim)
            pieces.append((mats, j, dim))
    if not moduli:
        # the zero module: keep a single collapsed coordinate? no: rank 0
        return ExplicitModule(gamma, ell, k, (), [np.zeros((0, 0), dtype=np.int64)] * gamma.order)
    acts = []
    for g in range(gamma.order):
        t = np.zeros((len(moduli), len(moduli)), dtype=np.int64)
        pos = 0
        for mats, j, dim in pieces:
            t[pos : pos + dim, pos : pos + dim] = mats[g] % ell**j
            pos += dim
        acts.append(t)
    return ExplicitModule(gamma, ell, k, moduli, acts)


def hom_count(ring: GroupRingB, rel_rows, n: int, target: ExplicitModule) -> int:
    """|Hom_B(B^n / span(rows), target)| by exact linear algebra.

    Unknowns are the coordinate tuples of the n generator images; each
    relation row imposes linear conditions over the mixed moduli, counted
    after scaling into Z/ell^k.
    """
    ell, k = ring.ell, ring.k
    q = ell**k
    rel = np.asarray(rel_rows, dtype=np.int64).reshape(-1, n * ring.dim) % q
    r = target.rank
    if r == 0:
        return 1
    amod = np.array(target.moduli, dtype=np.int64)
    if rel.shape[0] == 0:
        return target.order**n
    # unknown z[(t, s)]; constraint rows scaled by q / moduli[row-coord]
    rows = []
    for rr in rel:
        # sum_t action(rr_t) z_t = 0 in target coordinates
        cmats = [target.b_action(rr[t * ring.dim : (t + 1) * ring.dim]) for t in range(n)]
        for i in range(r):
            row = np.zeros(n * r, dtype=np.int64)
            scale = q // int(amod[i])
            for t in range(n):
                for j in range(r):
                    row[t * r + j] = (scale * int(cmats[t][i, j])) % q
            rows.append(row)
    kgens = linalg.kernel_generators(np.vstack(rows), ell, k)
    log_kernel = sum(e for _, e in kgens)
    # z ranged over Z/ell^k per coordinate; shrink to the true moduli
    excess = sum(k - _ilog(int(m), ell) for m in amod) * n
    if log_kernel < excess:
        raise RuntimeError("hom kernel smaller than the coordinate redundancy")
    return ell ** (log_kernel - excess)


def hom_count_enumerate(ring: GroupRingB, rel_rows, n: int, target: ExplicitModule) -> int:
    """|Hom_B(B^n / span(rows), target)| by listing all generator images.

    Exponential in n and |target|; only for validating hom_count on tiny inputs.
    """
    ell, k = ring.ell, ring.k
    q = ell**k
    rel = np.asarray(rel_rows, dtype=np.int64).reshape(-1, n * ring.dim) % q
    mats = [[target.b_action(rr[t * ring.dim : (t + 1) * ring.dim]) for t in range(n)] for rr in rel]
    count = 0
    for images in product(list(target.elements()), repeat=n):
        ok = True
        for row_mats in mats:
            acc = np.zeros(target.rank, dtype=np.int64)
            for t in range(n):
                acc = acc + row_mats[t] @ images[t]
            if target.reduce_vec(acc).any():
                ok = False
                break
        if ok:
            count += 1
    return count


def b_span_rows(module: ExplicitModule, vectors) -> np.ndarray:
    """Howell rows (scaled coordinates) of the submodule generated by the vectors."""
    mats = module.scaled_action_mats()
    rows = []
    for z in vectors:
        w = module.scale_in(z)
        for t in mats:
            rows.append((t @ w) % module.ell**module.k)
    if not rows:
        return np.zeros((0, module.rank), dtype=np.int64)
    return linalg.howell_form(np.array(rows, dtype=np.int64), module.ell, module.k)


def generator_images_surjective(module: ExplicitModule, vectors) -> bool:
    """Whether the listed elements generate the module over the group ring."""
    h = b_span_rows(module, vectors)
    return linalg.span_order_log(h, module.ell, module.k) == sum(
        _ilog(m, module.ell) for m in module.moduli
    )
