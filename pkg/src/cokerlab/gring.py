"""The quotient group ring B = (Z/ell^k)[Gamma]/(N) and its fixed submodules.

N is the sum of all group elements; ell must not divide |Gamma|, so B is
free over Z/ell^k of rank |Gamma|-1 with basis {gamma - 1 : gamma != 1}.
Killing N is structural in this basis: the images of the group elements
sum to the zero vector.
"""

from __future__ import annotations

import numpy as np

from .groups import FiniteGroupTable, Subgroup
from . import linalg

# int64 safety: matrix products accumulate dim * (q-1)^2 per entry
MAX_Q = 32768


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class GroupRingB:
    """(Z/ell^k)[Gamma]/(N_Gamma) with basis {gamma_i - 1 : gamma_i != 1}.

    Coordinate i of an element corresponds to group element i+1 in the
    table ordering. Vectors in the free module B^n are laid out as n
    consecutive blocks of dim coordinates each.
    """

    def __init__(self, gamma: FiniteGroupTable, ell: int, k: int):
        if not _is_prime(ell):
            raise ValueError(f"ell = {ell} is not prime")
        if k < 1:
            raise ValueError("k must be >= 1")
        if gamma.order % ell == 0:
            raise ValueError(f"ell = {ell} divides |Gamma| = {gamma.order}")
        if ell**k > MAX_Q:
            raise ValueError(f"ell^k = {ell**k} exceeds the coefficient bound {MAX_Q}")
        self.gamma = gamma
        self.ell = ell
        self.k = k
        self.q = ell**k
        self.dim = gamma.order - 1
        self._action: dict[int, np.ndarray] = {}
        self._fixed: dict[tuple[int, ...], list[tuple[np.ndarray, int]]] = {}

    @property
    def is_degenerate(self) -> bool:
        """Trivial Gamma collapses B to the zero ring."""
        return self.dim == 0

    def action_matrix(self, g: int) -> np.ndarray:
        """Matrix of left multiplication by group element g on the basis."""
        if g in self._action:
            return self._action[g]
        d, q = self.dim, self.q
        mul = self.gamma.mul
        m = np.zeros((d, d), dtype=np.int64)
        for j in range(d):
            # g * (gamma_{j+1} - 1) = (g*gamma_{j+1} - 1) - (g - 1)
            t = int(mul[g, j + 1])
            if t != 0:
                m[t - 1, j] += 1
            if g != 0:
                m[g - 1, j] -= 1
        m %= q
        m.setflags(write=False)
        self._action[g] = m
        return m

    def algebra_element_matrix(self, coeffs) -> np.ndarray:
        """Action on B of sum(coeffs[g] * g) for a length-|Gamma| coefficient vector."""
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for g, c in enumerate(np.asarray(coeffs, dtype=np.int64) % self.q):
            if c:
                out += int(c) * self.action_matrix(g)
        return out % self.q

    def element_image(self, g: int) -> np.ndarray:
        """Coordinates of the ring image of group element g.

        Uses 1 = -|Gamma|^(-1) * sum(gamma_i - 1), which encodes N = 0.
        """
        q = self.q
        base = np.full(self.dim, (-pow(self.gamma.order % q, -1, q)) % q, dtype=np.int64)
        if g != 0:
            base[g - 1] = (base[g - 1] + 1) % q
        return base

    def multiply(self, a, b) -> np.ndarray:
        """Ring product of two coordinate vectors."""
        a = np.asarray(a, dtype=np.int64) % self.q
        b = np.asarray(b, dtype=np.int64) % self.q
        out = np.zeros(self.dim, dtype=np.int64)
        mul = self.gamma.mul
        for i in np.nonzero(a)[0]:
            gi = i + 1
            for j in np.nonzero(b)[0]:
                # (g_i - 1)(g_j - 1) = (g_i g_j - 1) - (g_i - 1) - (g_j - 1)
                c = int(a[i]) * int(b[j]) % self.q
                t = int(mul[gi, j + 1])
                if t != 0:
                    out[t - 1] += c
                out[i] -= c
                out[j] -= c
        return out % self.q

    def fixed_generators(self, sub: Subgroup) -> list[tuple[np.ndarray, int]]:
        """Cyclic generators [(vector, e)] of the fixed submodule B^{Gamma_0}."""
        key = sub.members
        if key in self._fixed:
            return self._fixed[key]
        if self.dim == 0:
            self._fixed[key] = []
            return []
        rows = [self.action_matrix(g) - np.eye(self.dim, dtype=np.int64) for g in sub.members if g != 0]
        if rows:
            stack = np.vstack(rows) % self.q
        else:
            stack = np.zeros((0, self.dim), dtype=np.int64)
        gens = linalg.kernel_generators(stack, self.ell, self.k)
        self._fixed[key] = gens
        return gens

    def fixed_order_log(self, sub: Subgroup) -> int:
        """log_ell |B^{Gamma_0}|."""
        return sum(e for _, e in self.fixed_generators(sub))


def build_ring(gamma: FiniteGroupTable, ell: int, k: int) -> GroupRingB:
    """Validated constructor for GroupRingB."""
    return GroupRingB(gamma, ell, k)
