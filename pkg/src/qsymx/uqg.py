"""Concrete finite-dimensional U_q(g)-modules at real q > 0.

A :class:`ModuleRep` is a weight basis plus matrices for E_i and F_i; K_i is
diagonal and derived from the weights. Tensor products use the coproduct
Delta(E) = E (x) 1 + K (x) E, Delta(F) = F (x) K^-1 + 1 (x) F, iterated left to
right. Every module carries the invariant inner product for the compact real
form (E* = K F, F* = E K^-1, K* = K): solved per simple block for direct sums,
and the tensor product of factor forms for tensor products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from . import linalg
from .cartan import RootSystem, Weight, is_dominant, weight_inner, weyl_dim
from .errors import ClosureError, FormError, RelationError, WeightError

__all__ = [
    "ModuleRep",
    "DEFAULT_Q",
    "quantum_integer",
    "quantum_factorial",
    "build_fundamental",
    "build_simple",
    "build_module",
    "direct_sum",
    "tensor",
    "tensor_power",
    "gram_form",
    "relation_residuals",
    "gram_residual",
    "highest_weight_vectors",
    "lowering_closure",
    "braid_operator",
    "root_vector_operators",
    "delta_action",
]

DEFAULT_Q = 1.2
RELATION_TOL = 1e-9
SERRE_TOL = 1e-8


def quantum_integer(n: int, qi: float) -> float:
    """[n]_qi, continuously extended to n at qi = 1. Odd in n."""
    if qi <= 0:
        raise ValueError("q must be positive")
    if qi == 1.0:
        return float(n)
    return (qi ** n - qi ** (-n)) / (qi - 1.0 / qi)


def quantum_factorial(n: int, qi: float) -> float:
    out = 1.0
    for k in range(1, n + 1):
        out *= quantum_integer(k, qi)
    return out


@dataclass(frozen=True, eq=False)
class ModuleRep:
    """A U_q(g)-module on a weight basis.

    ``blocks`` lists simple summands ``(highest weight, start, stop)`` for
    modules built as direct sums of simples (basis vector ``start`` is the
    chosen highest weight vector); it is ``None`` for tensor products, which
    instead record their ``factors``. Instances are immutable and hash by
    identity, so they can key caches.
    """

    rs: RootSystem
    q: float
    weights: np.ndarray
    E: tuple[np.ndarray, ...]
    F: tuple[np.ndarray, ...]
    gram: np.ndarray | None = None
    factor_dims: tuple[int, ...] = ()
    blocks: tuple[tuple[Weight, int, int], ...] | None = None
    factors: tuple["ModuleRep", ...] = ()
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.weights.shape[0]

    @property
    def rank(self) -> int:
        return self.rs.rank

    @property
    def summands(self) -> tuple[Weight, ...] | None:
        return None if self.blocks is None else tuple(b[0] for b in self.blocks)

    @property
    def basis_weights(self) -> list[Weight]:
        return [tuple(int(x) for x in w) for w in self.weights]

    def k_diag(self, i: int) -> np.ndarray:
        """Diagonal of K_i: q^{(alpha_i | wt)} = q_i^{<wt, alpha_i^vee>}."""
        qi = self.q ** self.rs.symmetrizers[i]
        return qi ** self.weights[:, i].astype(float)

    def h_diag(self, i: int) -> np.ndarray:
        """Diagonal of (K_i - K_i^-1)/(q_i - q_i^-1), finite at q = 1."""
        qi = self.q ** self.rs.symmetrizers[i]
        return np.array([quantum_integer(int(m), qi) for m in self.weights[:, i]])

    def weight_index(self) -> dict[Weight, np.ndarray]:
        idx = self._cache.get("weight_index")
        if idx is None:
            groups: dict[Weight, list[int]] = {}
            for k, w in enumerate(self.basis_weights):
                groups.setdefault(w, []).append(k)
            idx = {w: np.array(v) for w, v in groups.items()}
            self._cache["weight_index"] = idx
        return idx

    def dominant_weights(self) -> list[Weight]:
        return sorted((w for w in self.weight_index() if is_dominant(w)), reverse=True)


def _check_q(q: float) -> float:
    q = float(q)
    if not q > 0:
        raise ValueError(f"q must be a positive real number, got {q}")
    return q


# --- fundamental seeds -------------------------------------------------------
# (weights, edges): an edge (i, src, dst, f, e) means F_i v_src = f v_dst and
# E_i v_dst = e v_src, with f and e functions of q_i.

def _one(qi: float) -> float:
    return 1.0


def _two(qi: float) -> float:
    return quantum_integer(2, qi)


_Seed = tuple[list[Weight], list[tuple[int, int, int, Callable, Callable]]]

_SEEDS: dict[tuple[str, int], _Seed] = {
    ("A1", 0): ([(1,), (-1,)], [(0, 0, 1, _one, _one)]),
    ("A2", 0): ([(1, 0), (-1, 1), (0, -1)],
                [(0, 0, 1, _one, _one), (1, 1, 2, _one, _one)]),
    ("A2", 1): ([(0, 1), (1, -1), (-1, 0)],
                [(1, 0, 1, _one, _one), (0, 1, 2, _one, _one)]),
    ("B2", 0): ([(1, 0), (-1, 2), (0, 0), (1, -2), (-1, 0)],
                [(0, 0, 1, _one, _one), (1, 1, 2, _one, _two),
                 (1, 2, 3, _two, _one), (0, 3, 4, _one, _one)]),
    ("B2", 1): ([(0, 1), (1, -1), (-1, 1), (0, -1)],
                [(1, 0, 1, _one, _one), (0, 1, 2, _one, _one), (1, 2, 3, _one, _one)]),
}


@lru_cache(maxsize=None)
def build_fundamental(rs: RootSystem, i: int, q: float = DEFAULT_Q) -> ModuleRep:
    """V_{omega_i} from hardcoded seed matrices, validated against the relations."""
    q = _check_q(q)
    if not 0 <= i < rs.rank:
        raise WeightError(f"fundamental index {i} out of range for rank {rs.rank}")
    weights, edges = _SEEDS[(rs.cartan_type, i)]
    n = len(weights)
    E = [np.zeros((n, n)) for _ in range(rs.rank)]
    F = [np.zeros((n, n)) for _ in range(rs.rank)]
    for gen, src, dst, f, e in edges:
        qi = q ** rs.symmetrizers[gen]
        F[gen][dst, src] = f(qi)
        E[gen][src, dst] = e(qi)
    lam = rs.fundamental(i)
    m = ModuleRep(rs, q, np.array(weights, dtype=np.int64), tuple(E), tuple(F),
                  factor_dims=(n,), blocks=((lam, 0, n),))
    _validate(m)
    if n != weyl_dim(rs, lam):
        raise RelationError(f"seed for omega_{i} has dim {n}, expected {weyl_dim(rs, lam)}")
    return replace(m, gram=gram_form(m), _cache={})


def _validate(m: ModuleRep) -> None:
    res = relation_residuals(m)
    bad = {k: v for k, v in res.items()
           if v > (SERRE_TOL if k.startswith("serre") else RELATION_TOL)}
    if bad:
        raise RelationError(f"relation residuals above tolerance: {bad}")


def relation_residuals(m: ModuleRep) -> dict[str, float]:
    """Frobenius residuals of the defining relations, maximized over generators."""
    rs, q = m.rs, m.q
    out = {"KEK": 0.0, "KFK": 0.0, "EF": 0.0, "serre_E": 0.0, "serre_F": 0.0}
    for i in range(rs.rank):
        qi = q ** rs.symmetrizers[i]
        k = m.k_diag(i)
        for j in range(rs.rank):
            aij = rs.cartan_matrix[i][j]
            kek = (k[:, None] * m.E[j]) / k[None, :] - qi ** aij * m.E[j]
            kfk = (k[:, None] * m.F[j]) / k[None, :] - qi ** (-aij) * m.F[j]
            comm = m.E[i] @ m.F[j] - m.F[j] @ m.E[i]
            if i == j:
                comm = comm - np.diag(m.h_diag(i))
            out["KEK"] = max(out["KEK"], float(np.linalg.norm(kek)))
            out["KFK"] = max(out["KFK"], float(np.linalg.norm(kfk)))
            out["EF"] = max(out["EF"], float(np.linalg.norm(comm)))
            if i != j:
                for key, X in (("serre_E", m.E), ("serre_F", m.F)):
                    top = 1 - aij
                    acc = np.zeros((m.dim, m.dim))
                    for N in range(top + 1):
                        left = np.linalg.matrix_power(X[i], top - N) / quantum_factorial(top - N, qi)
                        right = np.linalg.matrix_power(X[i], N) / quantum_factorial(N, qi)
                        acc += (-1) ** N * left @ X[j] @ right
                    out[key] = max(out[key], float(np.linalg.norm(acc)))
    return out


def _star_pairs(E: Sequence[np.ndarray], F: Sequence[np.ndarray], K: Sequence[np.ndarray]):
    """(rho(a), rho(a*)) for a in {E_i, F_i, K_i} under the compact real form."""
    for e, f, k in zip(E, F, K):
        yield e, k[:, None] * f
        yield f, e / k[None, :]
        yield np.diag(k), np.diag(k)


def _invariant_form_block(E, F, K, weights: np.ndarray) -> np.ndarray:
    n = weights.shape[0]
    # K_i* = K_i forces distinct weight spaces to be orthogonal
    pairs = [(a, b) for a in range(n) for b in range(a, n)
             if np.array_equal(weights[a], weights[b])]
    columns = []
    gens = list(_star_pairs(E, F, K))
    for a, b in pairs:
        x = np.zeros((n, n))
        x[a, b] = x[b, a] = 1.0
        columns.append(np.concatenate([(x @ A - B.T @ x).ravel() for A, B in gens]))
    system = np.array(columns).T
    null = scipy.linalg.null_space(system, rcond=1e-9)
    if null.shape[1] != 1:
        raise FormError(f"invariant form on a simple block is not unique (dim {null.shape[1]})")
    g = np.zeros((n, n))
    for (a, b), c in zip(pairs, null[:, 0]):
        g[a, b] = g[b, a] = c
    if g[0, 0] == 0:
        raise FormError("highest weight vector is null for the invariant form")
    return g / g[0, 0]


def gram_form(m: ModuleRep) -> np.ndarray:
    """Invariant inner product on a direct sum of simples.

    Solves G rho(a) = rho(a*)^T G blockwise, normalizes each block so its
    highest weight vector has norm 1, and makes blocks mutually orthogonal.
    """
    if m.blocks is None:
        raise FormError("gram_form needs a direct sum of simples; tensor products use the product form")
    g = np.zeros((m.dim, m.dim))
    for lam, start, stop in m.blocks:
        sl = slice(start, stop)
        E = [e[sl, sl] for e in m.E]
        F = [f[sl, sl] for f in m.F]
        K = [m.k_diag(i)[sl] for i in range(m.rank)]
        g[sl, sl] = _invariant_form_block(E, F, K, m.weights[sl])
    try:
        return linalg.check_form(g, sym_tol=1e-10)
    except FormError as exc:
        raise FormError(f"invariant form is not positive definite: {exc}") from None


def gram_residual(m: ModuleRep) -> float:
    """max over a in {E_i, F_i, K_i} of ||G rho(a) - rho(a*)^T G||."""
    K = [m.k_diag(i) for i in range(m.rank)]
    return max(float(np.linalg.norm(m.gram @ A - B.T @ m.gram))
               for A, B in _star_pairs(m.E, m.F, K))


# --- tensor products and sums ------------------------------------------------

def _compatible(mods: Sequence[ModuleRep]) -> None:
    rs, q = mods[0].rs, mods[0].q
    for m in mods[1:]:
        if m.rs is not rs or m.q != q:
            raise ValueError("modules must share the root system and q")


@lru_cache(maxsize=512)
def _tensor2(a: ModuleRep, b: ModuleRep) -> ModuleRep:
    ia, ib = np.eye(a.dim), np.eye(b.dim)
    E, F = [], []
    for i in range(a.rank):
        E.append(np.kron(a.E[i], ib) + np.kron(np.diag(a.k_diag(i)), b.E[i]))
        F.append(np.kron(a.F[i], np.diag(1.0 / b.k_diag(i))) + np.kron(ia, b.F[i]))
    weights = (a.weights[:, None, :] + b.weights[None, :, :]).reshape(-1, a.rank)
    fa = a.factors or (a,)
    fb = b.factors or (b,)
    return ModuleRep(a.rs, a.q, weights, tuple(E), tuple(F),
                     gram=np.kron(a.gram, b.gram),
                     factor_dims=a.factor_dims + b.factor_dims,
                     factors=fa + fb)


def tensor(*mods: ModuleRep) -> ModuleRep:
    """Tensor product with the iterated coproduct; cached on factor identity."""
    if not mods:
        raise ValueError("tensor needs at least one module")
    _compatible(mods)
    out = mods[0]
    for m in mods[1:]:
        out = _tensor2(out, m)
    return out


def tensor_power(m: ModuleRep, n: int) -> ModuleRep:
    return tensor(*([m] * n))


def direct_sum(*mods: ModuleRep) -> ModuleRep:
    _compatible(mods)
    if len(mods) == 1:
        return mods[0]
    n = sum(m.dim for m in mods)
    blocks, start = [], 0
    for m in mods:
        if m.blocks is None:
            raise ValueError("direct_sum expects direct sums of simples")
        blocks.extend((lam, s + start, t + start) for lam, s, t in m.blocks)
        start += m.dim
    return ModuleRep(
        mods[0].rs, mods[0].q,
        np.vstack([m.weights for m in mods]),
        tuple(scipy.linalg.block_diag(*[m.E[i] for m in mods]) for i in range(mods[0].rank)),
        tuple(scipy.linalg.block_diag(*[m.F[i] for m in mods]) for i in range(mods[0].rank)),
        gram=scipy.linalg.block_diag(*[m.gram for m in mods]),
        factor_dims=(n,),
        blocks=tuple(blocks),
    )


# --- highest weight vectors and cyclic closures ------------------------------

def _e_scale(m: ModuleRep) -> float:
    if "e_scale" not in m._cache:
        m._cache["e_scale"] = max([1.0] + [float(np.linalg.norm(e, 2)) for e in m.E])
    return m._cache["e_scale"]


def highest_weight_vectors(m: ModuleRep, lam: Weight, tol: float = linalg.DEFAULT_TOL,
                           gap: float | None = None) -> np.ndarray:
    """Euclidean-orthonormal basis (columns, full length) of vectors of weight
    ``lam`` killed by every E_i."""
    idx = m.weight_index().get(tuple(lam))
    out = np.zeros((m.dim, 0))
    if idx is None:
        return out
    stacked = np.vstack([e[:, idx] for e in m.E])
    ker = linalg.kernel(stacked, tol, gap=gap, scale=_e_scale(m))
    out = np.zeros((m.dim, ker.shape[1]))
    out[idx] = ker
    return out


def lowering_closure(m: ModuleRep, start: np.ndarray, lam: Weight,
                     drop_tol: float = linalg.DEFAULT_TOL) -> tuple[np.ndarray, list[Weight]]:
    """Span of all F-monomials applied to ``start`` (columns of weight ``lam``).

    Weight spaces are filled level by level (depth below ``lam``) with
    modified Gram-Schmidt, so the result is a Euclidean-orthonormal weight
    basis, ordered by depth, varying continuously with q.
    """
    rs = m.rs
    alphas = [np.array(rs.simple_root(i)) for i in range(rs.rank)]
    floor = drop_tol * max(1.0, max(np.abs(f).sum(axis=0).max(initial=0.0) for f in m.F))
    q0 = linalg.extend_orthonormal(np.zeros((m.dim, 0)), start, drop_tol)
    by_weight = {tuple(lam): q0}
    cols, wts = [q0], [tuple(lam)] * q0.shape[1]
    level = {tuple(lam): q0}
    while level:
        cands: dict[Weight, list[np.ndarray]] = {}
        for wt in sorted(level, reverse=True):
            basis = level[wt]
            for i in range(rs.rank):
                fb = m.F[i] @ basis
                keep = np.linalg.norm(fb, axis=0) > floor
                if keep.any():
                    tgt = tuple(int(x) for x in np.array(wt) - alphas[i])
                    cands.setdefault(tgt, []).append(fb[:, keep])
        level = {}
        for tgt in sorted(cands, reverse=True):
            have = by_weight.get(tgt, np.zeros((m.dim, 0)))
            new = linalg.extend_orthonormal(have, np.hstack(cands[tgt]), drop_tol)
            if new.shape[1]:
                by_weight[tgt] = np.hstack([have, new])
                level[tgt] = new
                cols.append(new)
                wts.extend([tgt] * new.shape[1])
    return np.hstack(cols), wts


@lru_cache(maxsize=None)
def build_simple(rs: RootSystem, lam: Weight, q: float = DEFAULT_Q) -> ModuleRep:
    """V_lam as the cyclic submodule generated by the tensor of highest weight
    vectors inside (x)_i V_{omega_i}^{(x) lam_i}."""
    q = _check_q(q)
    lam = rs.check(lam)
    if not is_dominant(lam):
        raise WeightError(f"weight {lam} is not dominant")
    if sum(lam) == 0:
        zero = np.zeros((1, 1))
        return ModuleRep(rs, q, np.zeros((1, rs.rank), dtype=np.int64),
                         (zero,) * rs.rank, (zero,) * rs.rank, gram=np.eye(1),
                         factor_dims=(1,), blocks=((lam, 0, 1),))
    fund = [f for i, k in enumerate(lam) for f in [build_fundamental(rs, i, q)] * k]
    if len(fund) == 1:
        return fund[0]
    big = tensor(*fund)
    start = np.zeros((big.dim, 1))
    start[0, 0] = 1.0
    basis, wts = lowering_closure(big, start, lam)
    expected = weyl_dim(rs, lam)
    if basis.shape[1] != expected:
        raise ClosureError(
            f"closure for {lam} at q={q} has dim {basis.shape[1]}, expected {expected}"
        )
    E, F = [], []
    for i in range(rs.rank):
        for src, dst in ((big.E[i], E), (big.F[i], F)):
            img = src @ basis
            small = basis.T @ img
            if np.linalg.norm(img - basis @ small) > 1e-9 * max(1.0, np.linalg.norm(img)):
                raise ClosureError(f"closure for {lam} is not invariant")
            dst.append(small)
    m = ModuleRep(rs, q, np.array(wts, dtype=np.int64), tuple(E), tuple(F),
                  factor_dims=(expected,), blocks=((lam, 0, expected),))
    _validate(m)
    return replace(m, gram=gram_form(m), _cache={})


def build_module(rs: RootSystem, summands: Sequence[Sequence[int]], q: float = DEFAULT_Q) -> ModuleRep:
    """Direct sum of simple modules with the given highest weights."""
    return direct_sum(*[build_simple(rs, rs.check(lam), q) for lam in summands])


def delta_action(m: ModuleRep) -> list[np.ndarray]:
    """All generator images E_i, F_i, K_i on ``m`` (for module-map checks)."""
    out = []
    for i in range(m.rank):
        out.extend([m.E[i], m.F[i], np.diag(m.k_diag(i))])
    return out


# --- braid group and root vectors --------------------------------------------

def _divided_powers(x: np.ndarray, qi: float) -> list[np.ndarray]:
    out = [np.eye(x.shape[0])]
    k = 1
    while True:
        nxt = out[-1] @ x * (1.0 / quantum_integer(k, qi))
        if not np.any(np.abs(nxt) > 1e-14 * max(1.0, np.abs(out[-1]).max())):
            break
        out.append(nxt)
        k += 1
    return out


def braid_operator(m: ModuleRep, i: int) -> np.ndarray:
    """Lusztig's symmetry T''_{i,1} on an integrable module.

    On a vector v of weight mu with m = <mu, alpha_i^vee>:
        T v = sum_{-a+b-c=m} (-1)^b q_i^{b-ac} E^(a) F^(b) E^(c) v.
    It maps the mu-weight space onto the s_i(mu)-weight space.
    """
    key = ("braid", i)
    if key in m._cache:
        return m._cache[key]
    qi = m.q ** m.rs.symmetrizers[i]
    ed = _divided_powers(m.E[i], qi)
    fd = _divided_powers(m.F[i], qi)
    out = np.zeros((m.dim, m.dim))
    coords = m.weights[:, i]
    for mm in np.unique(coords):
        cols = np.flatnonzero(coords == mm)
        acc = np.zeros((m.dim, cols.size))
        for c in range(len(ed)):
            ec = ed[c][:, cols]
            if not ec.any():
                continue
            for a in range(len(ed)):
                b = int(mm) + a + c
                if b < 0 or b >= len(fd):
                    continue
                acc += (-1) ** b * qi ** (b - a * c) * (ed[a] @ (fd[b] @ ec))
        out[:, cols] = acc
    m._cache[key] = out
    return out


def root_vector_operators(m: ModuleRep) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """E_beta_k, F_beta_k as T_{i_1}..T_{i_{k-1}} X_{i_k} (T_{i_1}..T_{i_{k-1}})^-1."""
    if "root_vectors" in m._cache:
        return m._cache["root_vectors"]
    word = m.rs.w0_word
    es, fs = [], []
    prefix = np.eye(m.dim)
    for k, ik in enumerate(word):
        if k:
            prefix = prefix @ braid_operator(m, word[k - 1])
        es.append(np.linalg.solve(prefix.T, (prefix @ m.E[ik]).T).T)
        fs.append(np.linalg.solve(prefix.T, (prefix @ m.F[ik]).T).T)
    m._cache["root_vectors"] = (es, fs)
    return es, fs


def root_q(rs: RootSystem, beta: Weight, q: float) -> float:
    """q_beta = q^{(beta|beta)/2}."""
    return q ** (float(weight_inner(rs, beta, beta)) / 2)


def nilpotency_index(x: np.ndarray, tol: float = 1e-12) -> int:
    """Smallest k with x^k = 0 (numerically)."""
    p = np.eye(x.shape[0])
    scale = max(1.0, np.abs(x).max())
    for k in range(1, x.shape[0] + 2):
        p = p @ x
        if np.abs(p).max() <= tol * scale ** k:
            return k
    return math.inf
