"""Irreducible F_ell[Gamma]-modules by splitting the regular module.

Randomized splitting with the Norton singular-element test, certified by
an exhaustive spin search over projective vectors whenever ell^dim is
small enough (always true at the scales this package targets). Also
provides equivariant hom spaces, fixed-point dimensions, central
idempotents, and exact lifts of representations to Z/ell^k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroupTable, Subgroup
from . import linalg

EXHAUSTIVE_SPIN_BOUND = 20000


def _reduce_against(v: np.ndarray, basis: list[tuple[int, np.ndarray]], ell: int) -> np.ndarray:
    v = v % ell
    for p, row in basis:
        if v[p]:
            v = (v - int(v[p]) * row) % ell
    return v


def spin(vectors, gen_mats, ell: int) -> np.ndarray:
    """Echelon basis (rows) of the submodule generated by the vectors."""
    basis: list[tuple[int, np.ndarray]] = []
    queue: list[np.ndarray] = []

    def insert(v) -> None:
        v = _reduce_against(np.asarray(v, dtype=np.int64), basis, ell)
        nz = np.nonzero(v)[0]
        if len(nz) == 0:
            return
        p = int(nz[0])
        v = (v * pow(int(v[p]), -1, ell)) % ell
        basis.append((p, v))
        basis.sort(key=lambda t: t[0])
        queue.append(v)

    for v in vectors:
        insert(v)
    while queue:
        w = queue.pop()
        for m in gen_mats:
            insert(m @ w)
    if not basis:
        return np.zeros((0, gen_mats[0].shape[0]), dtype=np.int64)
    return np.array([row for _, row in basis], dtype=np.int64)


def _solve_columns(b: np.ndarray, targets: np.ndarray, ell: int) -> np.ndarray:
    """Solve b.T @ x = target mod ell for each target column; b has full row rank."""
    out = np.zeros((b.shape[0], targets.shape[1]), dtype=np.int64)
    for j in range(targets.shape[1]):
        x = linalg.solve_mod(b.T, targets[:, j], ell, 1)
        if x is None:
            raise ValueError("vector not inside the given basis span")
        out[:, j] = x
    return out


def restrict_action(mats, basis: np.ndarray, ell: int) -> list[np.ndarray]:
    """Action matrices on the submodule spanned by the echelon basis rows."""
    return [_solve_columns(basis, (m @ basis.T) % ell, ell) % ell for m in mats]


def quotient_action(mats, basis: np.ndarray, ell: int) -> list[np.ndarray]:
    """Action matrices on the quotient by the submodule spanned by basis rows."""
    dim = mats[0].shape[0]
    pivots = []
    pairs = []
    for row in basis:
        p = int(np.nonzero(row)[0][0])
        pivots.append(p)
        pairs.append((p, row))
    free = [c for c in range(dim) if c not in pivots]
    out = []
    for m in mats:
        qm = np.zeros((len(free), len(free)), dtype=np.int64)
        for jj, c in enumerate(free):
            w = _reduce_against(m[:, c].copy(), pairs, ell)
            qm[:, jj] = w[free]
        out.append(qm % ell)
    return out


def hom_space_dim(mats_a, mats_b, ell: int) -> int:
    """dim over F_ell of {X : X A_t = B_t X for all t}."""
    da = mats_a[0].shape[0]
    db = mats_b[0].shape[0]
    rows = []
    for a, b in zip(mats_a, mats_b):
        rows.append(np.kron(a.T % ell, np.eye(db, dtype=np.int64)) - np.kron(np.eye(da, dtype=np.int64), b % ell))
    stack = np.vstack(rows) % ell
    return len(linalg.kernel_generators(stack, ell, 1))


def fixed_dim(mats_by_element, members, ell: int) -> int:
    """dim of the simultaneous fixed space of the listed group elements."""
    dim = mats_by_element[0].shape[0]
    rows = [mats_by_element[g] - np.eye(dim, dtype=np.int64) for g in members if g != 0]
    if not rows:
        return dim
    return len(linalg.kernel_generators(np.vstack(rows) % ell, ell, 1))


def _find_proper_submodule(gen_mats, ell: int, rng: np.random.Generator):
    """Echelon basis of a proper nonzero submodule, or None if irreducible.

    An 'irreducible' verdict is certified exhaustively when ell^dim is
    within EXHAUSTIVE_SPIN_BOUND, otherwise it rests on the Norton test
    with a nullity-one singular element.
    """
    dim = gen_mats[0].shape[0]
    if dim == 1:
        return None

    def exhaustive():
        # spin every projective vector (first nonzero coordinate = 1)
        for vec in _projective_vectors(dim, ell):
            w = spin([vec], gen_mats, ell)
            if 0 < w.shape[0] < dim:
                return w
        return None

    certified = ell**dim <= EXHAUSTIVE_SPIN_BOUND
    for _ in range(200):
        theta = _random_algebra_element(gen_mats, ell, rng)
        ker = linalg.nullspace_mod_prime(theta, ell)
        if ker.shape[0] in (0, dim):
            continue
        for v in ker:
            w = spin([v], gen_mats, ell)
            if w.shape[0] < dim:
                return w
        if ker.shape[0] == 1:
            kert = linalg.nullspace_mod_prime(theta.T, ell)
            dual = spin([kert[0]], [m.T % ell for m in gen_mats], ell)
            if dual.shape[0] < dim:
                perp = linalg.nullspace_mod_prime(dual, ell)
                return spin(list(perp), gen_mats, ell)
            if certified:
                return exhaustive()
            return None
    if certified:
        return exhaustive()
    raise RuntimeError("meataxe failed to reach a verdict within the trial budget")


def _projective_vectors(dim: int, ell: int):
    for lead in range(dim):
        tail = dim - lead - 1
        for idx in range(ell**tail):
            v = np.zeros(dim, dtype=np.int64)
            v[lead] = 1
            rest, x = [], idx
            for _ in range(tail):
                rest.append(x % ell)
                x //= ell
            v[lead + 1 :] = rest
            yield v


def _random_algebra_element(gen_mats, ell: int, rng: np.random.Generator) -> np.ndarray:
    dim = gen_mats[0].shape[0]
    theta = int(rng.integers(0, ell)) * np.eye(dim, dtype=np.int64)
    for _ in range(3):
        word = np.eye(dim, dtype=np.int64)
        for _ in range(int(rng.integers(1, 4))):
            word = (word @ gen_mats[int(rng.integers(0, len(gen_mats)))]) % ell
        theta = (theta + int(rng.integers(0, ell)) * word) % ell
    return theta


@dataclass(frozen=True)
class IrreducibleModule:
    """An irreducible F_ell[Gamma]-module with per-element action matrices."""

    name: str
    ell: int
    dim: int
    mats: tuple  # one dim x dim matrix per group element, table order
    endo_order: int  # number of equivariant endomorphisms, a power of ell
    trivial: bool
    mult_in_regular: int  # multiplicity in F_ell[Gamma] = dim over the endo field

    @property
    def in_quotient_ring(self) -> bool:
        """Whether the module occurs in B/ell (every nontrivial one does)."""
        return not self.trivial

    @property
    def size(self) -> int:
        return self.ell**self.dim


def _element_mats_from_gens(gamma: FiniteGroupTable, gen_idx, gen_mats, ell: int, dim: int):
    """Extend generator matrices to all elements along BFS words."""
    mats: dict[int, np.ndarray] = {0: np.eye(dim, dtype=np.int64)}
    frontier = [0]
    while frontier:
        g = frontier.pop(0)
        for t, h in enumerate(gen_idx):
            prod = int(gamma.mul[h, g])
            if prod not in mats:
                mats[prod] = (gen_mats[t] @ mats[g]) % ell
                frontier.append(prod)
    if len(mats) != gamma.order:
        raise ValueError("generators do not generate the group")
    return [mats[g] for g in range(gamma.order)]


def irreducible_modules(gamma: FiniteGroupTable, ell: int) -> list[IrreducibleModule]:
    """All irreducible F_ell[Gamma]-modules, deterministically ordered.

    Requires ell coprime to |Gamma|; the regular module is split
    recursively and constituents are deduplicated up to isomorphism.
    """
    if gamma.order % ell == 0:
        raise ValueError("ell must not divide |Gamma|")
    gen_idx = list(gamma.generating_set()) or [0]
    # left regular representation, permutation matrices
    reg = []
    for h in gen_idx:
        m = np.zeros((gamma.order, gamma.order), dtype=np.int64)
        for g in range(gamma.order):
            m[int(gamma.mul[h, g]), g] = 1
        reg.append(m)
    rng = np.random.Generator(np.random.Philox(key=(gamma.order * 1000003 + ell)))
    queue = [reg]
    pieces = []
    while queue:
        mats = queue.pop()
        sub = _find_proper_submodule(mats, ell, rng)
        if sub is None:
            pieces.append(mats)
        else:
            queue.append(restrict_action(mats, sub, ell))
            queue.append(quotient_action(mats, sub, ell))
    distinct: list[list[np.ndarray]] = []
    for mats in pieces:
        if not any(
            mats[0].shape == d[0].shape and hom_space_dim(mats, d, ell) > 0 for d in distinct
        ):
            distinct.append(mats)
    built = []
    for mats in distinct:
        dim = mats[0].shape[0]
        e = hom_space_dim(mats, mats, ell)
        full = _element_mats_from_gens(gamma, gen_idx, mats, ell, dim)
        trivial = dim == 1 and all(np.array_equal(m, np.eye(1, dtype=np.int64)) for m in full)
        if dim % e != 0:
            raise RuntimeError("endomorphism field dimension does not divide the module dimension")
        built.append((trivial, dim, ell**e, full, dim // e))
    built.sort(key=lambda t: (not t[0], t[1], t[2]))
    out = []
    for i, (trivial, dim, endo, full, mult) in enumerate(built):
        out.append(
            IrreducibleModule(
                name=f"S{i}",
                ell=ell,
                dim=dim,
                mats=tuple(m.copy() for m in full),
                endo_order=endo,
                trivial=trivial,
                mult_in_regular=mult,
            )
        )
    if sum(m.dim * m.mult_in_regular for m in out) != gamma.order:
        raise RuntimeError("irreducible constituents do not fill the regular module")
    if sum(1 for m in out if m.trivial) != 1:
        raise RuntimeError("expected exactly one trivial constituent")
    return out


def irreducible_fixed_dim(irr: IrreducibleModule, sub: Subgroup) -> int:
    return fixed_dim(irr.mats, sub.members, irr.ell)


def group_algebra_multiply(gamma: FiniteGroupTable, a, b, mod: int) -> np.ndarray:
    """Convolution product in (Z/mod)[Gamma] on coefficient vectors."""
    a = np.asarray(a, dtype=np.int64) % mod
    b = np.asarray(b, dtype=np.int64) % mod
    out = np.zeros(gamma.order, dtype=np.int64)
    for g in np.nonzero(a)[0]:
        for h in np.nonzero(b)[0]:
            out[int(gamma.mul[g, h])] += int(a[g]) * int(b[h]) % mod
    return out % mod


def central_idempotents(gamma: FiniteGroupTable, irreducibles) -> list[np.ndarray]:
    """Coefficient vectors (length |Gamma|, mod ell) of the block idempotents.

    Entry i acts as the identity on irreducible i and as zero on the others.
    """
    ell = irreducibles[0].ell
    classes = gamma.conjugacy_classes()
    # columns: one per conjugacy class; rows: all matrix entries of the
    # class-sum action on every irreducible
    cols = []
    for cls in classes:
        col = []
        for irr in irreducibles:
            s = np.zeros((irr.dim, irr.dim), dtype=np.int64)
            for g in cls:
                s = (s + irr.mats[g]) % ell
            col.append(s.reshape(-1))
        cols.append(np.concatenate(col))
    a = np.stack(cols, axis=1) % ell
    out = []
    for i, irr in enumerate(irreducibles):
        rhs = []
        for j, other in enumerate(irreducibles):
            t = np.eye(other.dim, dtype=np.int64) if j == i else np.zeros((other.dim, other.dim), dtype=np.int64)
            rhs.append(t.reshape(-1))
        x = linalg.solve_mod(a, np.concatenate(rhs), ell, 1)
        if x is None:
            raise RuntimeError("central idempotent system is inconsistent")
        coeffs = np.zeros(gamma.order, dtype=np.int64)
        for cls, c in zip(classes, x):
            for g in cls:
                coeffs[g] = int(c) % ell
        out.append(coeffs)
    return out


def lift_idempotent(gamma: FiniteGroupTable, coeffs, ell: int, k: int) -> np.ndarray:
    """Lift an idempotent of F_ell[Gamma] to an idempotent mod ell^k."""
    e = np.asarray(coeffs, dtype=np.int64) % ell
    m = 1
    while m < k:
        m = min(2 * m, k)
        mod = ell**m
        sq = group_algebra_multiply(gamma, e, e, mod)
        cu = group_algebra_multiply(gamma, sq, e, mod)
        e = (3 * sq - 2 * cu) % mod
    check = group_algebra_multiply(gamma, e, e, ell**k)
    if not np.array_equal(check, e % ell**k):
        raise RuntimeError("idempotent lift failed to stabilize")
    return e % ell**k


def lift_representation(mats_by_element, gamma: FiniteGroupTable, ell: int, k: int) -> list[np.ndarray]:
    """Lift a representation mod ell to a representation mod ell^k.

    Successive quadratic corrections: with rho a homomorphism mod ell^m
    and lifted entrywise, the failure 2-cocycle c is split by averaging,
    b(g) = |Gamma|^-1 sum_e Ad(rho(ge)) c(g, e), and rho(g) (I - ell^m
    Ad(rho(g)^-1) b(g)) is a homomorphism mod ell^2m. The result is
    verified exactly before returning.
    """
    n = gamma.order
    dim = mats_by_element[0].shape[0]
    cur = [m % ell for m in mats_by_element]
    mlev = 1
    while mlev < k:
        big = 2 * mlev
        q2 = ell**big
        qm = ell**mlev
        rho = [r % q2 for r in cur]
        inv = [linalg.invert_unit_matrix(r, ell, big) for r in rho]
        ninv = pow(n % qm, -1, qm)
        bmat = [np.zeros((dim, dim), dtype=np.int64) for _ in range(n)]
        for g in range(n):
            acc = np.zeros((dim, dim), dtype=np.int64)
            for e in range(n):
                ge = int(gamma.mul[g, e])
                defect = ((inv[ge] @ rho[g]) % q2 @ rho[e]) % q2 - np.eye(dim, dtype=np.int64)
                if (defect % qm).any():
                    raise RuntimeError("lift defect is not divisible by ell^m")
                c = (defect // qm) % qm
                acc = (acc + (rho[ge] @ c) % qm @ inv[ge]) % qm
            bmat[g] = (acc * ninv) % qm
        nxt = []
        for g in range(n):
            x = (-((inv[g] @ bmat[g]) % qm @ rho[g])) % qm
            nxt.append((rho[g] @ (np.eye(dim, dtype=np.int64) + qm * x)) % q2)
        cur = nxt
        mlev = big
    q = ell**k
    out = [r % q for r in cur]
    for g in range(n):
        for h in range(n):
            if not np.array_equal((out[g] @ out[h]) % q, out[int(gamma.mul[g, h])]):
                raise RuntimeError("representation lift failed verification")
        if not np.array_equal(out[g] % ell, mats_by_element[g] % ell):
            raise RuntimeError("representation lift does not reduce to the input")
    return out
