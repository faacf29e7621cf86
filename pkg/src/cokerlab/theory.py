"""Exact class probabilities and moments for the random cokernel model.

All finite-size quantities are exact rationals. Limit quantities come with
rigorous two-sided bounds from geometric tail estimates on the infinite
products. Every module class here is a type matrix over an IsotypicContext
and every subgroup tuple lists Gamma_1, ..., Gamma_{u+1} (so u + 1 >= 1
entries; the first one plays the distinguished role in the model).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .groups import Subgroup, full_subgroup
from .invariants import IsotypicContext, TypeMatrix
from . import explicit

TAIL_EPS = Fraction(1, 10**15)


def _fixed_order(ctx: IsotypicContext, c: TypeMatrix, sub: Subgroup) -> int:
    return ctx.ell ** ctx.fixed_order_log(c, sub)


def _irr_sizes(ctx: IsotypicContext, i: int, gammas) -> tuple[int, int, int, list[int]]:
    """(|G|, Q, |G^Gamma|, [|G^Gamma_t|]) for irreducible i."""
    size = ctx.ell ** ctx.dims[i]
    q = ctx.ell ** ctx.e_logs[i]
    full = full_subgroup(ctx.gamma)
    g_full = ctx.ell ** ctx.fixed_dims(full)[i]
    g_subs = [ctx.ell ** ctx.fixed_dims(sub)[i] for sub in gammas]
    return size, q, g_full, g_subs


def finite_probability(ctx: IsotypicContext, n: int, gammas, ch: TypeMatrix) -> Fraction:
    """P(cokernel of the n-generator model with the given subgroup tuple is of type ch)."""
    if not gammas:
        raise ValueError("the subgroup tuple must contain at least one subgroup")
    sur = ctx.sur_from_free(n, ch)
    if sur == 0:
        return Fraction(0)
    full = full_subgroup(ctx.gamma)
    h_order = ctx.order(ch)
    h_fixed_full = _fixed_order(ctx, ch, full)
    denom = ctx.aut_count(ch) * h_order**n
    for sub in gammas:
        denom *= _fixed_order(ctx, ch, sub)
    prob = Fraction(sur * h_fixed_full ** (n + 1), denom)
    for i in range(ctx.count):
        if i == ctx.trivial_index:
            continue
        m = ctx.relation_multiplicity(n, ch, i)
        size, q, g_full, g_subs = _irr_sizes(ctx, i, gammas)
        base = size**n
        for gs in g_subs:
            base *= gs
        for j in range(m):
            factor = 1 - Fraction(q**j * g_full ** (n + 1), base)
            if factor <= 0:
                return Fraction(0)
            prob *= factor
    return prob


def finite_moment(ctx: IsotypicContext, n: int, gammas, ch: TypeMatrix) -> Fraction:
    """Expected number of equivariant surjections onto a module of type ch."""
    if not gammas:
        raise ValueError("the subgroup tuple must contain at least one subgroup")
    full = full_subgroup(ctx.gamma)
    sur = ctx.sur_from_free(n, ch)
    num = sur * _fixed_order(ctx, ch, full) ** (n + 1)
    den = ctx.order(ch) ** n
    for sub in gammas:
        den *= _fixed_order(ctx, ch, sub)
    return Fraction(num, den)


def limit_moment(ctx: IsotypicContext, gammas, ch: TypeMatrix) -> Fraction:
    """Large-n limit of the expected surjection count onto type ch."""
    if not gammas:
        raise ValueError("the subgroup tuple must contain at least one subgroup")
    full = full_subgroup(ctx.gamma)
    den = 1
    for sub in gammas:
        den *= _fixed_order(ctx, ch, sub)
    return Fraction(_fixed_order(ctx, ch, full), den)


def lambda_identity(ctx: IsotypicContext, ch: TypeMatrix, i: int) -> Fraction:
    """lambda for irreducible i against a target of type ch.

    Evaluated through the stable identity lambda = Q^m(n) / |Y(G)|^n, which
    holds at every n large enough that the type is a quotient of B^n; the
    value is independent of that choice of n.
    """
    n = max(ctx.min_generators(ch), 1)
    m = ctx.relation_multiplicity(n, ch, i)
    full = full_subgroup(ctx.gamma)
    q = ctx.ell ** ctx.e_logs[i]
    y_size = ctx.ell ** (ctx.dims[i] - ctx.fixed_dims(full)[i])
    return Fraction(q**m, y_size**n)


def lambda_enumerate(ctx: IsotypicContext, ch: TypeMatrix, i: int) -> Fraction:
    """lambda by direct enumeration of extensions.

    Sums (Q - 1) / |Aut(E)| weighted counts of surjections E -->> H whose
    kernel is the irreducible i in its bottom layer, over all candidate
    extension types E. Exponential; intended for small verification cases.
    """
    if i == ctx.trivial_index:
        raise ValueError("lambda is defined for nontrivial irreducible kernels")
    kernel_type = tuple(
        ((1,) + (0,) * (ctx.k - 1)) if t == i else (0,) * ctx.k for t in range(ctx.count)
    )
    h_mod = ctx.realize(ch)
    target_order_log = ctx.order_log(ch) + ctx.dims[i]
    q = ctx.ell ** ctx.e_logs[i]
    total = Fraction(0)
    for entry in ctx.catalog(ctx.min_generators(ch) + 1):
        if ctx.order_log(entry.c) != target_order_log:
            continue
        e_mod = ctx.realize(entry.c)
        hits = 0
        for phi in _hom_matrices(ctx, e_mod, h_mod):
            cols = [phi[:, s] for s in range(e_mod.rank)]
            if not explicit.generator_images_surjective(h_mod, cols):
                continue
            if _kernel_type(ctx, e_mod, h_mod, phi) == kernel_type:
                hits += 1
        if hits:
            total += Fraction(hits, ctx.aut_count(entry.c))
    return (q - 1) * total


def _hom_matrices(ctx: IsotypicContext, src: explicit.ExplicitModule, dst: explicit.ExplicitModule):
    """All equivariant homomorphisms src -> dst as coordinate matrices."""
    from . import linalg
    import numpy as np

    ell, k = ctx.ell, ctx.k
    q = ell**k
    rs, rd = src.rank, dst.rank
    if rs == 0 or dst.order == 1:
        yield np.zeros((rd, rs), dtype=np.int64)
        return
    # unknown phi[i, s], scaled rows: torsion and equivariance conditions
    rows = []
    for s in range(src.rank):
        for i in range(rd):
            row = np.zeros(rd * rs, dtype=np.int64)
            row[i * rs + s] = (src.moduli[s] * (q // dst.moduli[i])) % q
            rows.append(row)
    for g in range(ctx.gamma.order):
        tg_src = src.action[g]
        tg_dst = dst.action[g]
        for s in range(rs):
            for i in range(rd):
                row = np.zeros(rd * rs, dtype=np.int64)
                # (T_dst phi)[i, s] - (phi T_src)[i, s] = 0 mod dst.moduli[i]
                for t in range(rd):
                    row[t * rs + s] += int(tg_dst[i, t])
                for t in range(rs):
                    row[i * rs + t] -= int(tg_src[t, s])
                rows.append(row * (q // dst.moduli[i]) % q)
    gens = linalg.kernel_generators(np.vstack(rows) % q, ell, k)
    # strip coordinate redundancy: phi[i, s] only matters mod dst.moduli[i]
    reduced = []
    seen = set()
    from itertools import product as iproduct

    ranges = [range(ell**e) for _, e in gens]
    for combo in iproduct(*ranges):
        mat = np.zeros(rd * rs, dtype=np.int64)
        for t, (vec, e) in enumerate(gens):
            mat = mat + combo[t] * vec
        mat = mat.reshape(rd, rs) % np.array(dst.moduli, dtype=np.int64)[:, None]
        key = mat.tobytes()
        if key not in seen:
            seen.add(key)
            reduced.append(mat)
    yield from reduced


def _kernel_type(ctx: IsotypicContext, src: explicit.ExplicitModule, dst: explicit.ExplicitModule, phi) -> TypeMatrix:
    """Type of the kernel of the homomorphism given by the coordinate matrix."""
    from . import linalg
    import numpy as np

    ell, k = ctx.ell, ctx.k
    q = ell**k
    rows = []
    for i in range(dst.rank):
        row = (phi[i, :] * (q // dst.moduli[i])) % q
        rows.append(row)
    if rows:
        sols = linalg.kernel_generators(np.vstack(rows), ell, k)
    else:
        sols = [(np.eye(src.rank, dtype=np.int64)[t], k) for t in range(src.rank)]
    span_rows = np.array([src.scale_in(v) for v, _ in sols], dtype=np.int64)
    mats = src.scaled_action_mats()
    bot = np.zeros((1, src.rank), dtype=np.int64)
    return ctx.fingerprint_of_span(mats, span_rows, bot)


def limit_probability_bounds(ctx: IsotypicContext, gammas, ch: TypeMatrix) -> tuple[Fraction, Fraction]:
    """Rigorous lower and upper bounds for the limit probability of type ch."""
    if not gammas:
        raise ValueError("the subgroup tuple must contain at least one subgroup")
    full = full_subgroup(ctx.gamma)
    den = ctx.aut_count(ch)
    num = _fixed_order(ctx, ch, full)
    for sub in gammas:
        den *= _fixed_order(ctx, ch, sub)
    lead = Fraction(num, den)
    lo, hi = lead, lead
    for i in range(ctx.count):
        if i == ctx.trivial_index:
            continue
        lam = lambda_identity(ctx, ch, i)
        size, q, g_full, g_subs = _irr_sizes(ctx, i, gammas)
        coef = lam * g_full
        for gs in g_subs:
            coef /= gs
        partial = Fraction(1)
        j = 1
        while True:
            factor = 1 - coef / q**j
            if factor <= 0:
                return Fraction(0), Fraction(0)
            partial *= factor
            # remaining products differ from 1 by at most the geometric tail
            tail = coef / (q**j * (q - 1))
            if tail < TAIL_EPS:
                break
            j += 1
        lo *= partial * (1 - tail)
        hi *= partial
    if lo < 0:
        lo = Fraction(0)
    return lo, hi


def limit_probability(ctx: IsotypicContext, gammas, ch: TypeMatrix) -> Fraction:
    """Limit probability of type ch (upper bound of the two-sided bracket)."""
    return limit_probability_bounds(ctx, gammas, ch)[1]


@dataclass(frozen=True)
class MassReport:
    """Accounting of probability mass over a catalog truncation."""

    finite_n: int | None
    total: Fraction  # exact finite-n total, or rigorous lower bound in the limit
    deficit_bound: Fraction  # rigorous upper bound for 1 - (true mass of the truncation)
    per_class: tuple


def finite_mass(ctx: IsotypicContext, n: int, gammas) -> MassReport:
    """Sum of exact class probabilities over all types reachable at size n."""
    entries = ctx.catalog(n)
    rows = []
    total = Fraction(0)
    for e in entries:
        p = finite_probability(ctx, n, gammas, e.c)
        rows.append((e.class_id, p))
        total += p
    return MassReport(finite_n=n, total=total, deficit_bound=1 - total, per_class=tuple(rows))


def limit_mass(ctx: IsotypicContext, gammas, max_rank: int) -> MassReport:
    """Lower bound for the limit mass over types of rank at most max_rank."""
    entries = ctx.catalog(max_rank)
    rows = []
    total_lo = Fraction(0)
    for e in entries:
        lo, hi = limit_probability_bounds(ctx, gammas, e.c)
        rows.append((e.class_id, lo, hi))
        total_lo += lo
    return MassReport(finite_n=None, total=total_lo, deficit_bound=1 - total_lo, per_class=tuple(rows))
