"""Isomorphism types of finite modules and exact counting formulas.

A finite module over (Z/ell^k)[Gamma] (ell coprime to |Gamma|) decomposes
as a direct sum of lifts of irreducibles to Z/ell^j coefficients; its type
is the multiplicity matrix c[i][j]. This module computes types from
presentations (the fingerprint), realizes types explicitly, enumerates the
catalog of types by generator rank, and evaluates closed-form counts:
orders, fixed-point orders, hom/sur/aut counts, and submodule counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import json

import numpy as np

from .groups import FiniteGroupTable, Subgroup
from .gring import GroupRingB
from .explicit import ExplicitModule, module_from_blocks
from . import linalg, meataxe

TypeMatrix = tuple  # tuple of per-irreducible tuples of length k


class IsotypicContext:
    """Bundled data for one (Gamma, ell, k): irreducibles, idempotents, lifts."""

    def __init__(self, ring: GroupRingB) -> None:
        self.ring = ring
        self.gamma = ring.gamma
        self.ell = ring.ell
        self.k = ring.k
        self.irreducibles = meataxe.irreducible_modules(ring.gamma, ring.ell)
        self.count = len(self.irreducibles)
        self.trivial_index = next(i for i, m in enumerate(self.irreducibles) if m.trivial)
        eps = meataxe.central_idempotents(ring.gamma, self.irreducibles)
        self.idempotents = [
            meataxe.lift_idempotent(ring.gamma, e, ring.ell, ring.k) for e in eps
        ]
        self.lifted_reps = [
            meataxe.lift_representation(list(m.mats), ring.gamma, ring.ell, ring.k)
            for m in self.irreducibles
        ]
        self.dims = [m.dim for m in self.irreducibles]
        self.e_logs = [round(_intlog(m.endo_order, ring.ell)) for m in self.irreducibles]
        self.mults = [m.mult_in_regular for m in self.irreducibles]
        self._fixed_cache: dict[tuple, tuple] = {}
        self._cok_cache: dict[int, tuple] = {}

    def fixed_dims(self, sub: Subgroup) -> tuple[int, ...]:
        """Per-irreducible dimension of the fixed subspace of the subgroup."""
        key = sub.members
        if key not in self._fixed_cache:
            self._fixed_cache[key] = tuple(
                meataxe.irreducible_fixed_dim(m, sub) for m in self.irreducibles
            )
        return self._fixed_cache[key]

    def zero_type(self) -> TypeMatrix:
        return tuple((0,) * self.k for _ in range(self.count))

    # --- fingerprints ---

    def _idempotent_mats(self, ambient_mats) -> list[np.ndarray]:
        q = self.ell**self.k
        ncols = ambient_mats[0].shape[0]
        emats = []
        for coeffs in self.idempotents:
            acc = np.zeros((ncols, ncols), dtype=np.int64)
            for g in np.nonzero(coeffs)[0]:
                acc = (acc + int(coeffs[g]) * ambient_mats[g]) % q
            emats.append(acc)
        return emats

    def fingerprint_of_span(self, ambient_mats, top_rows, bottom_rows, emats=None) -> TypeMatrix:
        """Type of span(top_rows)/span(bottom_rows), both Gamma-stable.

        ambient_mats: one matrix per group element acting on column vectors
        of the ambient (Z/ell^k)^N; rows are ambient vectors.
        """
        ell, k = self.ell, self.k
        q = ell**k
        ncols = ambient_mats[0].shape[0]
        top = np.asarray(top_rows, dtype=np.int64).reshape(-1, ncols) % q
        bot = np.asarray(bottom_rows, dtype=np.int64).reshape(-1, ncols) % q
        if emats is None:
            emats = self._idempotent_mats(ambient_mats)
        d = np.zeros((self.count, k + 2), dtype=np.int64)
        for j in range(1, k + 1):
            upper = np.vstack([(ell ** (j - 1)) * top % q, bot])
            lower = np.vstack([(ell**j) * top % q, bot])
            hl = linalg.howell_form(lower, ell, k)
            base = linalg.span_order_log(hl, ell, k)
            hu = linalg.howell_form(upper, ell, k)
            total = linalg.span_order_log(hu, ell, k) - base
            got = 0
            for i, em in enumerate(emats):
                proj = (hu @ em.T) % q
                piece = linalg.howell_form(np.vstack([proj, hl]), ell, k)
                dlog = linalg.span_order_log(piece, ell, k) - base
                if dlog % self.dims[i]:
                    raise RuntimeError("isotypic piece size is not a power of the irreducible size")
                d[i, j] = dlog // self.dims[i]
                got += dlog
            if got != total:
                raise RuntimeError("isotypic pieces do not fill the layer")
        c = []
        for i in range(self.count):
            c.append(tuple(int(d[i, j] - d[i, j + 1]) for j in range(1, k + 1)))
            if any(x < 0 for x in c[-1]):
                raise RuntimeError("layer multiplicities must be nonincreasing")
        return tuple(c)

    def fingerprint_of_cokernel(self, n: int, rel_rows) -> TypeMatrix:
        """Type of B^n / span(rel_rows); rows must span a Gamma-stable subgroup."""
        nn = n * self.ring.dim
        if n not in self._cok_cache:
            mats = []
            for g in range(self.gamma.order):
                a = self.ring.action_matrix(g)
                big = np.zeros((nn, nn), dtype=np.int64)
                for t in range(n):
                    big[t * self.ring.dim : (t + 1) * self.ring.dim, t * self.ring.dim : (t + 1) * self.ring.dim] = a
                mats.append(big)
            self._cok_cache[n] = (mats, self._idempotent_mats(mats), np.eye(nn, dtype=np.int64))
        mats, emats, top = self._cok_cache[n]
        rel = np.asarray(rel_rows, dtype=np.int64).reshape(-1, nn)
        if rel.shape[0] == 0:
            rel = np.zeros((1, nn), dtype=np.int64)
        return self.fingerprint_of_span(mats, top, rel, emats=emats)

    def fingerprint_of_explicit(self, module: ExplicitModule) -> TypeMatrix:
        """Type of an explicit module via its scaled coordinate embedding."""
        if module.rank == 0:
            return self.zero_type()
        mats = module.scaled_action_mats()
        q = self.ell**self.k
        top = np.diag(q // np.array(module.moduli, dtype=np.int64))
        bot = np.zeros((1, module.rank), dtype=np.int64)
        return self.fingerprint_of_span(mats, top, bot)

    # --- realization and catalog ---

    def realize(self, c: TypeMatrix) -> ExplicitModule:
        """Explicit module of the given type, built from lifted blocks."""
        blocks = []
        for i in range(self.count):
            for j in range(1, self.k + 1):
                copies = c[i][j - 1]
                if copies:
                    mats = [m % self.ell**j for m in self.lifted_reps[i]]
                    blocks.append((mats, j, copies))
        return module_from_blocks(self.gamma, self.ell, self.k, blocks)

    def d_vector(self, c: TypeMatrix, i: int) -> tuple[int, ...]:
        """d[j] = sum_{j' >= j} c[i][j'], for j = 1..k."""
        row = c[i]
        return tuple(sum(row[j - 1 :]) for j in range(1, self.k + 1))

    def min_generators(self, c: TypeMatrix) -> int:
        """Minimal size of a module generating set over the quotient ring."""
        best = 0
        for i in range(self.count):
            d1 = sum(c[i])
            if d1:
                best = max(best, -(-d1 // self.mults[i]))
        return best

    def order_log(self, c: TypeMatrix) -> int:
        return sum(
            self.dims[i] * sum(j * c[i][j - 1] for j in range(1, self.k + 1))
            for i in range(self.count)
        )

    def order(self, c: TypeMatrix) -> int:
        return self.ell ** self.order_log(c)

    def fixed_order_log(self, c: TypeMatrix, sub: Subgroup) -> int:
        f = self.fixed_dims(sub)
        return sum(
            f[i] * sum(j * c[i][j - 1] for j in range(1, self.k + 1))
            for i in range(self.count)
        )

    def is_admissible(self, c: TypeMatrix) -> bool:
        """No trivial constituent; for these modules that means trivial fixed points."""
        return not any(c[self.trivial_index])

    def class_id(self, c: TypeMatrix) -> str:
        parts = []
        for i in range(self.count):
            for j in range(1, self.k + 1):
                if c[i][j - 1]:
                    parts.append(f"{self.irreducibles[i].name}@{j}^{c[i][j - 1]}")
        return "+".join(parts) if parts else "1"

    def catalog(self, max_rank: int) -> list["CatalogEntry"]:
        """All types over the quotient ring needing at most max_rank generators."""
        slots = []
        for i in range(self.count):
            if i == self.trivial_index:
                continue
            for j in range(1, self.k + 1):
                slots.append((i, j, max_rank * self.mults[i]))
        found: list[TypeMatrix] = []

        def rec(idx: int, current: dict) -> None:
            if idx == len(slots):
                c = tuple(
                    tuple(current.get((i, j), 0) for j in range(1, self.k + 1))
                    for i in range(self.count)
                )
                if self.min_generators(c) <= max_rank:
                    found.append(c)
                return
            i, j, cap = slots[idx]
            for v in range(cap + 1):
                if v:
                    current[(i, j)] = v
                used = sum(current.get((i, jj), 0) for jj in range(1, self.k + 1))
                if -(-used // self.mults[i]) <= max_rank:
                    rec(idx + 1, current)
                current.pop((i, j), None)

        rec(0, {})
        found.sort(key=lambda c: (self.order_log(c), c))
        return [
            CatalogEntry(c=c, class_id=self.class_id(c), rank=self.min_generators(c),
                         order=self.order(c))
            for c in found
        ]

    # --- closed-form counting ---

    def end_count(self, c: TypeMatrix) -> int:
        out = 1
        for i in range(self.count):
            expo = 0
            for a in range(1, self.k + 1):
                for b in range(1, self.k + 1):
                    expo += c[i][a - 1] * c[i][b - 1] * min(a, b)
            out *= (self.ell ** self.e_logs[i]) ** expo
        return out

    def aut_count(self, c: TypeMatrix) -> int:
        out = self.end_count(c)
        for i in range(self.count):
            q = self.ell ** self.e_logs[i]
            for j in range(1, self.k + 1):
                m = c[i][j - 1]
                num = _gl_order(m, q)
                if (out * num) % q ** (m * m):
                    raise RuntimeError("automorphism count is not integral")
                out = out * num // q ** (m * m)
        return out

    def hom_count(self, cx: TypeMatrix, ch: TypeMatrix) -> int:
        out = 1
        for i in range(self.count):
            expo = 0
            for a in range(1, self.k + 1):
                for b in range(1, self.k + 1):
                    expo += cx[i][a - 1] * ch[i][b - 1] * min(a, b)
            out *= (self.ell ** self.e_logs[i]) ** expo
        return out

    def submodule_type_count(self, ch: TypeMatrix, cs: TypeMatrix) -> int:
        """Number of submodules of type cs inside a module of type ch."""
        out = 1
        for i in range(self.count):
            lam = self.d_vector(ch, i) + (0,)
            mu = self.d_vector(cs, i) + (0,)
            if any(mu[t] > lam[t] for t in range(self.k)):
                return 0
            q = self.ell ** self.e_logs[i]
            for t in range(self.k):
                out *= q ** (mu[t + 1] * (lam[t] - mu[t]))
                out *= _gaussian_binomial(lam[t] - mu[t + 1], mu[t] - mu[t + 1], q)
        return out

    def subtypes(self, ch: TypeMatrix) -> list[TypeMatrix]:
        """All types that occur as submodules of a module of type ch."""
        per_block = []
        for i in range(self.count):
            lam = self.d_vector(ch, i)
            rows = []
            for dvec in _monotone_vectors(lam):
                rows.append(tuple(dvec[j] - (dvec[j + 1] if j + 1 < self.k else 0) for j in range(self.k)))
            per_block.append(rows)
        out = []

        def rec(i: int, acc: list) -> None:
            if i == self.count:
                out.append(tuple(acc))
                return
            for row in per_block[i]:
                acc.append(row)
                rec(i + 1, acc)
                acc.pop()

        rec(0, [])
        return out

    def sur_count(self, cx: TypeMatrix, ch: TypeMatrix) -> int:
        """|Sur_B(X, H)| for modules of the given types."""
        out = 1
        for i in range(self.count):
            out *= self._sur_block(cx[i], ch[i], i)
        return out

    def _sur_block(self, x_row, h_row, i: int) -> int:
        return self._sur_block_cached(tuple(x_row), tuple(h_row), i)

    @lru_cache(maxsize=None)  # noqa: B019 - context objects are long-lived
    def _sur_block_cached(self, x_row, h_row, i: int) -> int:
        q = self.ell ** self.e_logs[i]
        expo = 0
        for a in range(1, self.k + 1):
            for b in range(1, self.k + 1):
                expo += x_row[a - 1] * h_row[b - 1] * min(a, b)
        total = q**expo
        lam = tuple(sum(h_row[j:]) for j in range(self.k)) + (0,)
        for dvec in _monotone_vectors(lam[: self.k]):
            mu = dvec + (0,)
            if mu == lam:
                continue
            mu_row = tuple(mu[j] - mu[j + 1] for j in range(self.k))
            cnt = 1
            for t in range(self.k):
                cnt *= q ** (mu[t + 1] * (lam[t] - mu[t]))
                cnt *= _gaussian_binomial(lam[t] - mu[t + 1], mu[t] - mu[t + 1], q)
            total -= cnt * self._sur_block_cached(x_row, mu_row, i)
        return total

    def sur_from_free(self, n: int, ch: TypeMatrix) -> int:
        """|Sur_B(B^n, H)| in product form (no recursion)."""
        out = 1
        for i in range(self.count):
            if i == self.trivial_index and any(ch[i]):
                return 0
            q = self.ell ** self.e_logs[i]
            di = sum(ch[i])
            hi = q ** sum(j * ch[i][j - 1] for j in range(1, self.k + 1))
            if di > n * self.mults[i]:
                return 0
            num = hi ** (n * self.mults[i])
            for t in range(di):
                num *= q ** (n * self.mults[i]) - q**t
            den = q ** (n * self.mults[i] * di)
            if num % den:
                raise RuntimeError("surjection count from the free module is not integral")
            out *= num // den
        return out

    def free_type(self, n: int) -> TypeMatrix:
        """Type of B^n itself (top layer only, trivial part absent)."""
        return tuple(
            ((0,) * (self.k - 1) + (n * self.mults[i],)) if i != self.trivial_index else (0,) * self.k
            for i in range(self.count)
        )

    def relation_multiplicity(self, n: int, ch: TypeMatrix, i: int) -> int:
        """Multiplicity of irreducible i in N/ell N, N the relation module of B^n -> H.

        Requires H to admit a surjection from B^n.
        """
        if self.sur_from_free(n, ch) == 0:
            raise ValueError("the module is not a quotient of the free module of this rank")
        return n * self.mults[i] - ch[i][self.k - 1]

    # --- serialization ---

    def catalog_to_json(self, entries) -> str:
        payload = {
            "ell": self.ell,
            "k": self.k,
            "group_order": self.gamma.order,
            "irreducibles": [
                {"name": m.name, "dim": m.dim, "endo_order": m.endo_order, "trivial": m.trivial}
                for m in self.irreducibles
            ],
            "classes": [
                {"id": e.class_id, "c": [list(r) for r in e.c], "rank": e.rank, "order": e.order}
                for e in entries
            ],
        }
        return json.dumps(payload, indent=2)

    def catalog_from_json(self, text: str) -> list["CatalogEntry"]:
        payload = json.loads(text)
        if payload["ell"] != self.ell or payload["k"] != self.k or payload["group_order"] != self.gamma.order:
            raise ValueError("catalog parameters do not match this context")
        out = []
        for rec in payload["classes"]:
            c = tuple(tuple(r) for r in rec["c"])
            out.append(CatalogEntry(c=c, class_id=rec["id"], rank=rec["rank"], order=rec["order"]))
        return out


@dataclass(frozen=True)
class CatalogEntry:
    """One isomorphism class over the quotient ring."""

    c: TypeMatrix
    class_id: str
    rank: int
    order: int


def _intlog(value: int, base: int) -> int:
    out = 0
    while value > 1:
        if value % base:
            raise ValueError("value is not a power of the base")
        value //= base
        out += 1
    return out


def _gl_order(m: int, q: int) -> int:
    out = 1
    for t in range(m):
        out *= q**m - q**t
    return out


def _gaussian_binomial(n: int, m: int, q: int) -> int:
    if m < 0 or m > n:
        return 0
    num, den = 1, 1
    for t in range(m):
        num *= q ** (n - t) - 1
        den *= q ** (t + 1) - 1
    if num % den:
        raise RuntimeError("binomial coefficient is not integral")
    return num // den


def _monotone_vectors(bounds):
    """Nonincreasing nonnegative integer vectors below the given bounds."""
    k = len(bounds)
    out = []

    def rec(j: int, prev: int, acc: list) -> None:
        if j == k:
            out.append(tuple(acc))
            return
        for v in range(min(bounds[j], prev), -1, -1):
            acc.append(v)
            rec(j + 1, v, acc)
            acc.pop()

    rec(0, 10**9, [])
    return out
