"""Root-system data for the supported Cartan types.

Weights are integer tuples in fundamental-weight coordinates, so the i-th
coordinate of a weight is its pairing with the i-th simple coroot and a
weight is dominant iff every coordinate is non-negative. Roots are stored in
simple-root coordinates and converted on demand. All arithmetic here is exact
(:class:`fractions.Fraction`).

Generator indices are 0-based throughout the package: ``w0_word`` for A2 is
``(0, 1, 0)``.

The bilinear form is normalized so that short roots have squared length 2.
For B2 the first simple root is long: ``d = (2, 1)``, ``omega_1`` is the
5-dimensional vector representation and ``omega_2`` the 4-dimensional spin
representation.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .errors import UnsupportedTypeError, WeightError

__all__ = [
    "RootSystem",
    "Weight",
    "SUPPORTED_TYPES",
    "build_root_system",
    "weight_inner",
    "is_dominant",
    "weyl_dim",
    "weight_multiplicities",
    "casimir_exponent",
    "reflect",
    "roots_from_word",
]

Weight = tuple[int, ...]

SUPPORTED_TYPES = ("A1", "A2", "B2")

_CARTAN = {
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
    "B2": ((2, -1), (-2, 2)),
}
_SYMMETRIZERS = {"A1": (1,), "A2": (1, 1), "B2": (2, 1)}
_W0_WORD = {"A1": (0,), "A2": (0, 1, 0), "B2": (0, 1, 0, 1)}
# listed in the order the reduced word for w0 produces them
_POSITIVE_ROOTS = {
    "A1": ((1,),),
    "A2": ((1, 0), (1, 1), (0, 1)),
    "B2": ((1, 0), (1, 1), (1, 2), (0, 1)),
}


def _inverse(mat: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(mat)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@dataclass(frozen=True, eq=False)
class RootSystem:
    """Cartan data of one supported type.

    ``fw_gram[i][j]`` is ``(omega_i | omega_j)``; ``positive_roots`` are in
    simple-root coordinates, ordered by ``w0_word``; ``rho`` is in
    fundamental-weight coordinates.
    """

    cartan_type: str
    cartan_matrix: tuple[tuple[int, ...], ...]
    symmetrizers: tuple[int, ...]
    fw_gram: tuple[tuple[Fraction, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]
    w0_word: tuple[int, ...]
    rho: Weight

    @property
    def rank(self) -> int:
        return len(self.cartan_matrix)

    @cached_property
    def gram_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.fw_gram])

    @cached_property
    def cartan_array(self) -> np.ndarray:
        return np.array(self.cartan_matrix, dtype=np.int64)

    def simple_root(self, i: int) -> Weight:
        """alpha_i in fundamental-weight coordinates (column i of the Cartan matrix)."""
        return tuple(self.cartan_matrix[k][i] for k in range(self.rank))

    def root_to_weight(self, root: Sequence[int]) -> Weight:
        return tuple(
            sum(self.cartan_matrix[k][j] * root[j] for j in range(self.rank))
            for k in range(self.rank)
        )

    @cached_property
    def positive_root_weights(self) -> tuple[Weight, ...]:
        return tuple(self.root_to_weight(b) for b in self.positive_roots)

    def fundamental(self, i: int) -> Weight:
        return tuple(int(k == i) for k in range(self.rank))

    def braid_order(self, i: int, j: int) -> int:
        """m_ij: number of letters on each side of the braid relation."""
        prod = self.cartan_matrix[i][j] * self.cartan_matrix[j][i]
        return {0: 2, 1: 3, 2: 4, 3: 6}[prod]

    def check(self, weight: Sequence[int]) -> Weight:
        w = tuple(int(x) for x in weight)
        if len(w) != self.rank:
            raise WeightError(
                f"{self.cartan_type} weights have {self.rank} coordinates, got {len(w)}"
            )
        return w


@lru_cache(maxsize=None)
def build_root_system(cartan_type: str) -> RootSystem:
    if cartan_type not in _CARTAN:
        raise UnsupportedTypeError(
            f"unsupported Cartan type {cartan_type!r}; supported: {', '.join(SUPPORTED_TYPES)}"
        )
    cartan = _CARTAN[cartan_type]
    d = _SYMMETRIZERS[cartan_type]
    n = len(cartan)
    inv = _inverse(cartan)
    # G A = diag(d), i.e. (omega_i | alpha_j) = delta_ij d_j
    gram = tuple(tuple(d[i] * inv[i][j] for j in range(n)) for i in range(n))
    roots = _POSITIVE_ROOTS[cartan_type]
    half_sum = [Fraction(0)] * n
    for b in roots:
        for k in range(n):
            half_sum[k] += Fraction(sum(cartan[k][j] * b[j] for j in range(n)), 2)
    rho = tuple(int(x) for x in half_sum)
    return RootSystem(
        cartan_type=cartan_type,
        cartan_matrix=cartan,
        symmetrizers=d,
        fw_gram=gram,
        positive_roots=roots,
        w0_word=_W0_WORD[cartan_type],
        rho=rho,
    )


def weight_inner(rs: RootSystem, mu: Sequence[int], nu: Sequence[int]) -> Fraction:
    mu, nu = rs.check(mu), rs.check(nu)
    return sum(
        (rs.fw_gram[i][j] * mu[i] * nu[j] for i in range(rs.rank) for j in range(rs.rank)),
        Fraction(0),
    )


def is_dominant(weight: Sequence[int]) -> bool:
    return all(x >= 0 for x in weight)


def _require_dominant(rs: RootSystem, lam: Sequence[int]) -> Weight:
    lam = rs.check(lam)
    if not is_dominant(lam):
        raise WeightError(f"weight {lam} is not dominant")
    return lam


def reflect(rs: RootSystem, i: int, weight: Sequence[int]) -> Weight:
    """Simple reflection s_i on a weight in fundamental coordinates."""
    alpha = rs.simple_root(i)
    c = weight[i]
    return tuple(w - c * a for w, a in zip(weight, alpha))


def roots_from_word(rs: RootSystem) -> list[Weight]:
    """beta_k = w_{i_1} ... w_{i_{k-1}}(alpha_{i_k}), in fundamental coordinates."""
    out = []
    for k, ik in enumerate(rs.w0_word):
        beta = rs.simple_root(ik)
        for j in reversed(rs.w0_word[:k]):
            beta = reflect(rs, j, beta)
        out.append(beta)
    return out


def casimir_exponent(rs: RootSystem, lam: Sequence[int]) -> Fraction:
    """(lam | lam + 2 rho)."""
    lam = rs.check(lam)
    shifted = tuple(a + 2 * r for a, r in zip(lam, rs.rho))
    return weight_inner(rs, lam, shifted)


def weyl_dim(rs: RootSystem, lam: Sequence[int]) -> int:
    lam = _require_dominant(rs, lam)
    shifted = tuple(a + r for a, r in zip(lam, rs.rho))
    num = Fraction(1)
    for beta in rs.positive_root_weights:
        num *= weight_inner(rs, shifted, beta) / weight_inner(rs, rs.rho, beta)
    assert num.denominator == 1
    return int(num)


@lru_cache(maxsize=None)
def _multiplicities(cartan_type: str, lam: Weight) -> tuple[tuple[Weight, int], ...]:
    rs = build_root_system(cartan_type)
    r = rs.rank
    rho = rs.rho

    def norm(w):
        return weight_inner(rs, w, w)

    def plus(a, b, k=1):
        return tuple(x + k * y for x, y in zip(a, b))

    top = norm(plus(lam, rho))
    # key: depth vector n with mu = lam - sum n_i alpha_i
    mult: dict[tuple[int, ...], int] = {(0,) * r: 1}
    pos = [(b, rs.root_to_weight(b)) for b in rs.positive_roots]
    simple = [rs.simple_root(i) for i in range(r)]

    def weight_of(depth):
        w = lam
        for i, n in enumerate(depth):
            w = plus(w, simple[i], -n)
        return w

    level = [(0,) * r]
    while level:
        cand = sorted({tuple(n + (k == i) for k, n in enumerate(depth))
                       for depth in level for i in range(r)})
        nxt = []
        for depth in cand:
            mu = weight_of(depth)
            denom = top - norm(plus(mu, rho))
            if denom <= 0:
                continue
            acc = Fraction(0)
            for b, bw in pos:
                k = 1
                while True:
                    up = tuple(n - k * c for n, c in zip(depth, b))
                    if min(up) < 0:
                        break
                    m = mult.get(up, 0)
                    if m:
                        acc += m * weight_inner(rs, plus(mu, bw, k), bw)
                    k += 1
            m = 2 * acc / denom
            assert m.denominator == 1, (lam, mu, m)
            if m > 0:
                mult[depth] = int(m)
                nxt.append(depth)
        level = nxt
    return tuple((weight_of(dp), m) for dp, m in mult.items())


def weight_multiplicities(rs: RootSystem, lam: Sequence[int]) -> Counter:
    """Weight multiplicities of V_lam by Freudenthal's recursion (exact).

    Independent of any module construction; used as the oracle for character
    peeling and for cross-checking constructed modules.
    """
    lam = _require_dominant(rs, lam)
    return Counter(dict(_multiplicities(rs.cartan_type, lam)))
