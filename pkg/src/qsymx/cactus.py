"""Cactus group actions on tensor products.

Positions are 1-based as in the usual notation: ``sigma_prt(factors, p, r, t)``
swaps the blocks (A_p..A_r) and (A_{r+1}..A_t) with the coboundary operator of
the grouped blocks, and the generators are

    s_{p,p+1} = sigma_{p,p,p+1},   s_{p,t} = sigma_{p,p,t} o s_{p+1,t}.

With ``odd`` parities the coboundary between blocks of parities i and j picks
up the sign (-1)^{ij}.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .braiding import coboundary, module_map_residual
from .errors import RelationError
from .uqg import ModuleRep, tensor, tensor_power

__all__ = [
    "Parity",
    "CactusWord",
    "sigma_prt",
    "cactus_generator",
    "cactus_action",
    "generators",
    "relation_residuals",
    "hexagon_residual",
    "super_coboundary",
    "j3_special_elements",
    "j3_relation_residuals",
    "interval_reversal",
    "generator_module_map_residual",
    "eigenspace_pairing_residual",
    "RELATION_TOL",
]

RELATION_TOL = 1e-8


class Parity(enum.Enum):
    EVEN = 0
    ODD = 1


@dataclass(frozen=True)
class CactusWord:
    """A word in the generators s_{p,t} of J_n, read as a product left to right."""

    n: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("cactus groups need n >= 2")
        for p, t in self.letters:
            if not 1 <= p < t <= self.n:
                raise ValueError(f"generator s_{{{p},{t}}} out of range for n = {self.n}")

    def __mul__(self, other: "CactusWord") -> "CactusWord":
        if other.n != self.n:
            raise ValueError("words live in different cactus groups")
        return CactusWord(self.n, self.letters + other.letters)


def generators(n: int) -> list[tuple[int, int]]:
    return [(p, t) for p in range(1, n) for t in range(p + 1, n + 1)]


def _parity_of(pars: Sequence[Parity]) -> int:
    return sum(p.value for p in pars) % 2


def super_coboundary(V: ModuleRep, par_v: Parity, W: ModuleRep, par_w: Parity,
                     path: str = "scalar") -> np.ndarray:
    """(-1)^{ij} sigma_{V,W} for homogeneous V, W of parities i, j."""
    return (-1) ** (par_v.value * par_w.value) * coboundary(V, W, path)


@lru_cache(maxsize=512)
def _sigma_prt(factors: tuple[ModuleRep, ...], parities: tuple[Parity, ...],
               p: int, r: int, t: int) -> np.ndarray:
    n = len(factors)
    if not 1 <= p <= r < t <= n:
        raise ValueError(f"need 1 <= p <= r < t <= n, got p={p}, r={r}, t={t}, n={n}")
    X = tensor(*factors[p - 1:r])
    Y = tensor(*factors[r:t])
    sigma = super_coboundary(X, Parity(_parity_of(parities[p - 1:r])),
                             Y, Parity(_parity_of(parities[r:t])))
    left = int(np.prod([f.dim for f in factors[:p - 1]], dtype=int))
    right = int(np.prod([f.dim for f in factors[t:]], dtype=int))
    return np.kron(np.kron(np.eye(left), sigma), np.eye(right))


def _normalize(factors: Sequence[ModuleRep],
               parities: Sequence[Parity] | None) -> tuple[tuple, tuple]:
    factors = tuple(factors)
    if parities is None:
        parities = (Parity.EVEN,) * len(factors)
    parities = tuple(parities)
    if len(parities) != len(factors):
        raise ValueError("one parity per factor is required")
    return factors, parities


def sigma_prt(factors: Sequence[ModuleRep], p: int, r: int, t: int,
              parities: Sequence[Parity] | None = None) -> np.ndarray:
    """id (x) sigma_{A_p..A_r, A_{r+1}..A_t} (x) id on the tensor of ``factors``."""
    f, par = _normalize(factors, parities)
    return _sigma_prt(f, par, p, r, t)


@lru_cache(maxsize=512)
def _generator(factors: tuple[ModuleRep, ...], parities: tuple[Parity, ...],
               p: int, t: int) -> np.ndarray:
    if t == p + 1:
        return _sigma_prt(factors, parities, p, p, t)
    # the block A_{p+1}..A_t is reversed first, which permutes the factor
    # list; with equal factors (the only case used) the list is unchanged
    return _sigma_prt(factors, parities, p, p, t) @ _generator(factors, parities, p + 1, t)


def _require_equal(factors: Sequence[ModuleRep]) -> None:
    if any(f is not factors[0] for f in factors):
        raise ValueError("cactus actions are defined on tensor powers V^(x)n")


def cactus_generator(V: ModuleRep, n: int, p: int, t: int, odd: bool = False) -> np.ndarray:
    """rho_q(s_{p,t}) on V^(x)n."""
    if not 1 <= p < t <= n:
        raise ValueError(f"generator s_{{{p},{t}}} out of range for n = {n}")
    par = (Parity.ODD if odd else Parity.EVEN,) * n
    return _generator((V,) * n, par, p, t)


def cactus_action(V: ModuleRep, word: CactusWord, odd: bool = False) -> np.ndarray:
    out = np.eye(V.dim ** word.n)
    for p, t in word.letters:
        out = out @ cactus_generator(V, word.n, p, t, odd)
    return out


def relation_residuals(V: ModuleRep, n: int, odd: bool = False) -> dict[str, float]:
    """Maximal residuals of the three defining relation families of J_n:
    involutions, commuting disjoint intervals, and nested conjugation."""
    gens = {pt: cactus_generator(V, n, *pt, odd) for pt in generators(n)}
    eye = np.eye(V.dim ** n)
    out = {"involution": 0.0, "disjoint": 0.0, "nested": 0.0}
    for (p, t), s in gens.items():
        out["involution"] = max(out["involution"], float(np.linalg.norm(s @ s - eye)))
    for (p, t), (k, l) in itertools.permutations(gens, 2):
        s, u = gens[(p, t)], gens[(k, l)]
        if t < k:
            out["disjoint"] = max(out["disjoint"], float(np.linalg.norm(s @ u - u @ s)))
        elif p <= k and l <= t:
            i, j = p + t - l, p + t - k
            res = float(np.linalg.norm(s @ u - gens[(i, j)] @ s))
            out["nested"] = max(out["nested"], res)
    return out


def hexagon_residual(X: ModuleRep, Y: ModuleRep, Z: ModuleRep) -> float:
    """|| (sigma_{Y,Z} (x) 1_X) sigma_{X,YZ} - (1_Z (x) sigma_{X,Y}) sigma_{XY,Z} ||."""
    lhs = np.kron(coboundary(Y, Z), np.eye(X.dim)) @ coboundary(X, tensor(Y, Z))
    rhs = np.kron(np.eye(Z.dim), coboundary(X, Y)) @ coboundary(tensor(X, Y), Z)
    return float(np.linalg.norm(lhs - rhs))


def j3_special_elements(V: ModuleRep, odd: bool = False,
                        tol: float = RELATION_TOL) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(a, b, psi) = (s_12, s_23, s_13 s_12) acting on V^(x)3.

    Raises RelationError if a^2 = b^2 = 1, psi a = b psi or a psi a = psi^-1
    fails beyond ``tol``.
    """
    a = cactus_generator(V, 3, 1, 2, odd)
    b = cactus_generator(V, 3, 2, 3, odd)
    psi = cactus_generator(V, 3, 1, 3, odd) @ a
    res = j3_relation_residuals(a, b, psi)
    bad = {k: v for k, v in res.items() if v > tol}
    if bad:
        raise RelationError(f"J_3 relations fail: {bad}")
    return a, b, psi


def j3_relation_residuals(a: np.ndarray, b: np.ndarray, psi: np.ndarray) -> dict[str, float]:
    eye = np.eye(a.shape[0])
    return {
        "a^2": float(np.linalg.norm(a @ a - eye)),
        "b^2": float(np.linalg.norm(b @ b - eye)),
        "psi a = b psi": float(np.linalg.norm(psi @ a - b @ psi)),
        "a psi a = psi^-1": float(np.linalg.norm(a @ psi @ a @ psi - eye)),
    }


def interval_reversal(dims: Sequence[int], p: int, t: int) -> np.ndarray:
    """Permutation matrix reversing tensor factors p..t (1-based)."""
    n = len(dims)
    order = list(range(p - 1)) + list(range(t - 1, p - 2, -1)) + list(range(t, n))
    size = int(np.prod(dims, dtype=int))
    src = np.arange(size).reshape(dims).transpose(order).ravel()
    out = np.zeros((size, size))
    out[np.arange(size), src] = 1.0
    return out


def generator_module_map_residual(V: ModuleRep, n: int, odd: bool = False) -> float:
    T = tensor_power(V, n)
    return max(module_map_residual(cactus_generator(V, n, p, t, odd), T, T)
               for p, t in generators(n))


def _real_eigenvalues(op: np.ndarray, tol: float) -> list[float]:
    vals = np.linalg.eigvals(op)
    real = sorted(v.real for v in vals if abs(v.imag) <= tol)
    clusters: list[float] = []
    for v in real:
        if not clusters or v - clusters[-1] > tol:
            clusters.append(v)
    return clusters


def eigenspace_pairing_residual(a: np.ndarray, psi: np.ndarray, form: np.ndarray,
                                cluster_tol: float = linalg.CLUSTER_TOL) -> float:
    """max over real eigenvalues t of psi of ||(psi - 1/t) a K_t||, where K_t is
    a form-orthonormal basis of ker(psi - t).

    ``a`` and ``psi`` must be unitary for ``form``; working in a
    form-orthonormal frame makes them orthogonal, so the kernels are
    well conditioned.
    """
    chol = np.linalg.cholesky(form)
    to_frame = chol.T
    back = np.linalg.inv(to_frame)
    pt = to_frame @ psi @ back
    at = to_frame @ a @ back
    eye = np.eye(psi.shape[0])
    worst = 0.0
    for t in _real_eigenvalues(pt, cluster_tol):
        ker = linalg.kernel(pt - t * eye, tol=cluster_tol, scale=1.0 + np.linalg.norm(pt, 2))
        if ker.shape[1]:
            worst = max(worst, float(np.linalg.norm((pt - eye / t) @ at @ ker)))
    return worst


def words_up_to(n: int, length: int) -> Iterable[CactusWord]:
    gens = generators(n)
    for k in range(length + 1):
        for letters in itertools.product(gens, repeat=k):
            yield CactusWord(n, letters)
