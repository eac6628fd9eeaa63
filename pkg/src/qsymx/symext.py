"""Quantum symmetric and exterior powers in degree n.

S^n_q V is the common fixed space of the adjacent coboundary operators
sigma_{i,i,i+1} on V^(x)n and Lambda^n_q V their common (-1)-eigenspace. The
quotient description takes the degree-n part J^n of the ideal generated by
the opposite degree-2 space. Passing ``odd=True`` uses the sign-twisted
operators of an odd module, which swaps the roles of S and Lambda.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .errors import ClosureError
from .cactus import cactus_generator, generators
from .uqg import ModuleRep, tensor_power

__all__ = [
    "GradedDims",
    "QuotientData",
    "CommutativityResult",
    "classical_dim",
    "sym_subspace",
    "ext_subspace",
    "power_subspace",
    "quotient_component",
    "flatness",
    "commutativity_check",
    "hilbert_and_koszul",
    "COUNTEREXAMPLE_TOL",
]

COUNTEREXAMPLE_TOL = 1e-6
KINDS = ("sym", "ext")


def _kind(kind: str) -> str:
    if kind not in KINDS:
        raise ValueError(f"kind must be 'sym' or 'ext', got {kind!r}")
    return kind


def classical_dim(d: int, n: int, kind: str) -> int:
    return math.comb(d + n - 1, n) if _kind(kind) == "sym" else math.comb(d, n)


@dataclass(frozen=True)
class GradedDims:
    dims: tuple[int, ...]

    def __post_init__(self):
        if self.dims and self.dims[0] != 1:
            raise ValueError("degree-0 component must be one-dimensional")

    def __getitem__(self, n: int) -> int:
        return self.dims[n]


@lru_cache(maxsize=256)
def power_subspace(V: ModuleRep, n: int, kind: str, odd: bool = False,
                   tol: float = linalg.DEFAULT_TOL) -> np.ndarray:
    """Form-orthonormal basis of S^n_q V (kind='sym') or Lambda^n_q V (kind='ext')."""
    sign = -1.0 if _kind(kind) == "sym" else 1.0
    if n < 0:
        raise ValueError("degree must be non-negative")
    if n == 0:
        return np.ones((1, 1))
    T = tensor_power(V, n)
    if n == 1:
        return linalg.form_orthonormalize(np.eye(V.dim), T.gram)
    eye = np.eye(T.dim)
    sigmas = [cactus_generator(V, n, i, i + 1, odd) for i in range(1, n)]
    scale = 1.0 + max(np.linalg.norm(x, 2) for x in sigmas)
    stacked = np.vstack([x + sign * eye for x in sigmas])
    basis = linalg.kernel(stacked, tol, gap=linalg.AMBIGUITY_GAP, scale=scale)
    return linalg.form_orthonormalize(basis, T.gram)


def sym_subspace(V: ModuleRep, n: int, odd: bool = False,
                 tol: float = linalg.DEFAULT_TOL) -> np.ndarray:
    return power_subspace(V, n, "sym", odd, tol)


def ext_subspace(V: ModuleRep, n: int, odd: bool = False,
                 tol: float = linalg.DEFAULT_TOL) -> np.ndarray:
    return power_subspace(V, n, "ext", odd, tol)


@dataclass(frozen=True)
class QuotientData:
    kind: str
    n: int
    total: int
    dim_ideal: int
    dim_quotient: int
    dim_subspace: int
    dim_intersection: int
    ideal_basis: np.ndarray

    @property
    def embedding_ok(self) -> bool:
        return (self.dim_intersection == 0
                and self.dim_ideal + self.dim_subspace == self.total
                and self.dim_quotient == self.dim_subspace)


def _ideal(V: ModuleRep, n: int, kind: str, odd: bool, tol: float) -> np.ndarray:
    other = "ext" if kind == "sym" else "sym"
    if n < 2:
        return np.zeros((V.dim ** max(n, 0), 0))
    rel = power_subspace(V, 2, other, odd, tol)
    pieces = [np.kron(np.kron(np.eye(V.dim ** i), rel), np.eye(V.dim ** (n - i - 2)))
              for i in range(n - 1)]
    return linalg.range_basis(np.hstack(pieces), tol, gap=linalg.AMBIGUITY_GAP)


@lru_cache(maxsize=128)
def quotient_component(V: ModuleRep, n: int, kind: str, odd: bool = False,
                       tol: float = linalg.DEFAULT_TOL) -> QuotientData:
    """Degree-n part of T(V)/<R>, R the opposite degree-2 space, compared with
    the subspace of the same kind."""
    kind = _kind(kind)
    ideal = _ideal(V, n, kind, odd, tol)
    sub = power_subspace(V, n, kind, odd, tol)
    total = V.dim ** n
    joint = linalg.rank(np.hstack([ideal, linalg.range_basis(sub)]), tol, gap=linalg.AMBIGUITY_GAP)
    return QuotientData(
        kind=kind, n=n, total=total,
        dim_ideal=ideal.shape[1],
        dim_quotient=total - ideal.shape[1],
        dim_subspace=sub.shape[1],
        dim_intersection=ideal.shape[1] + sub.shape[1] - joint,
        ideal_basis=ideal,
    )


def flatness(V: ModuleRep, n_max: int, odd: bool = False) -> list[dict]:
    """Per degree 1..n_max, quantum vs classical dimensions of S^n and Lambda^n."""
    out = []
    for n in range(1, n_max + 1):
        row = {"n": n}
        for kind in KINDS:
            qd = power_subspace(V, n, kind, odd).shape[1]
            cd = classical_dim(V.dim, n, kind)
            row[kind] = qd
            row[f"{kind}_classical"] = cd
            row[f"{kind}_flat"] = qd == cd
        out.append(row)
    return out


@dataclass(frozen=True)
class CommutativityResult:
    residual: float
    worst_generator: tuple[int, int] | None
    per_generator: dict

    @property
    def counterexample(self) -> bool:
        return self.residual >= COUNTEREXAMPLE_TOL


def commutativity_check(V: ModuleRep, n: int, odd: bool = False,
                        tol: float = linalg.DEFAULT_TOL) -> CommutativityResult:
    """max over J_n generators g of ||pi g - pi|| and ||g B - B||, with pi the
    projection onto S^n_q V along J^n and B a basis of S^n_q V.

    With ``odd`` the sign-twisted action is used, whose symmetric power is the
    exterior power of the underlying module.
    """
    sub = sym_subspace(V, n, odd, tol)
    ideal = _ideal(V, n, "sym", odd, tol)
    frame = np.hstack([sub, ideal])
    if frame.shape[0] != frame.shape[1]:
        raise ClosureError(
            f"S^{n}_q and J^{n} have dims {sub.shape[1]} + {ideal.shape[1]} != {frame.shape[0]}"
        )
    keep = np.zeros(frame.shape[1])
    keep[: sub.shape[1]] = 1.0
    pi = (frame * keep) @ np.linalg.inv(frame)
    per = {}
    for p, t in generators(n):
        g = cactus_generator(V, n, p, t, odd)
        per[(p, t)] = max(float(np.linalg.norm(pi @ g - pi)),
                          float(np.linalg.norm(g @ sub - sub)))
    worst = max(per, key=per.get) if per else None
    return CommutativityResult(per[worst] if worst else 0.0, worst, per)


def hilbert_and_koszul(V: ModuleRep, n_max: int = 3) -> tuple[GradedDims, GradedDims, bool]:
    """Graded dimensions of S_q V and Lambda_q V through degree ``n_max`` and the
    verdict of dim S^3_q - dim Lambda^3_q = (dim V)^2."""
    sym = GradedDims(tuple(power_subspace(V, n, "sym").shape[1] for n in range(n_max + 1)))
    ext = GradedDims(tuple(power_subspace(V, n, "ext").shape[1] for n in range(n_max + 1)))
    verdict = n_max >= 3 and sym[3] - ext[3] == V.dim ** 2
    return sym, ext, verdict
