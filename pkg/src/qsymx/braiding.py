"""R-matrices, isotypic decompositions and the coboundary operator.

For modules V, W the R-matrix on V (x) W is R = D o r_1 r_2 ... r_n with one
factor per positive root beta_k (k following the reduced word for w0),

    r_k = sum_t (1 - q_b^-2)^t / [t]_{q_b}! * q_b^{t(t+1)/2} * F_bk^t (x) E_bk^t,

q_b = q^{(b|b)/2}, and D(v (x) w) = q^{(wt v | wt w)} v (x) w. It satisfies
R Delta(a) = Delta^op(a) R, which is checked every time R is built.

The coboundary operator sigma_{V,W} = tau R (R_21 R)^{-1/2} is computed from
the Casimir scalars on isotypic components ("scalar" path) or from a
form-self-adjoint inverse square root ("spectral" path).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .cartan import Weight, casimir_exponent, roots_from_word, weyl_dim
from .errors import ClosureError, ConventionError, PathDisagreementError
from .uqg import (
    ModuleRep,
    delta_action,
    highest_weight_vectors,
    lowering_closure,
    quantum_factorial,
    root_q,
    root_vector_operators,
    tensor,
)

__all__ = [
    "IsotypicDecomposition",
    "flip",
    "d_operator",
    "r_matrix",
    "r_matrix_info",
    "intertwiner_residual",
    "isotypic",
    "casimir_power",
    "coboundary",
    "coboundary_paths",
    "module_map_residual",
    "INTERTWINER_REJECT",
    "PATH_REJECT",
]

INTERTWINER_REJECT = 1e-6
PATH_REJECT = 1e-7


def flip(V: ModuleRep, W: ModuleRep) -> np.ndarray:
    """tau: V (x) W -> W (x) V as a permutation matrix."""
    dv, dw = V.dim, W.dim
    out = np.zeros((dw * dv, dv * dw))
    for a in range(dv):
        for b in range(dw):
            out[b * dv + a, a * dw + b] = 1.0
    return out


def d_operator(V: ModuleRep, W: ModuleRep) -> np.ndarray:
    expo = V.weights @ V.rs.gram_float @ W.weights.T
    return np.diag(V.q ** expo.ravel())


def _root_factor(V: ModuleRep, W: ModuleRep, k: int, beta: Weight) -> np.ndarray:
    fv = root_vector_operators(V)[1][k]
    ew = root_vector_operators(W)[0][k]
    qb = root_q(V.rs, beta, V.q)
    out = np.eye(V.dim * W.dim)
    pf, pe = np.eye(V.dim), np.eye(W.dim)
    t = 0
    while True:
        t += 1
        pf, pe = pf @ fv, pe @ ew
        if not (np.any(pf) and np.any(pe)):
            return out
        c = (1 - qb ** -2) ** t / quantum_factorial(t, qb) * qb ** (t * (t + 1) / 2)
        if c == 0.0:
            return out
        out += c * np.kron(pf, pe)


def _assemble(V: ModuleRep, W: ModuleRep, reverse: bool) -> np.ndarray:
    betas = roots_from_word(V.rs)
    order = range(len(betas) - 1, -1, -1) if reverse else range(len(betas))
    prod = np.eye(V.dim * W.dim)
    for k in order:
        prod = prod @ _root_factor(V, W, k, betas[k])
    return d_operator(V, W) @ prod


def intertwiner_residual(R: np.ndarray, V: ModuleRep, W: ModuleRep) -> float:
    """max_a ||R Delta(a) - Delta^op(a) R|| over a in {E_i, F_i, K_i}."""
    vw, wv = tensor(V, W), tensor(W, V)
    tau, tau_back = flip(V, W), flip(W, V)
    res = 0.0
    for a, b in zip(delta_action(vw), delta_action(wv)):
        op = tau_back @ b @ tau
        res = max(res, float(np.linalg.norm(R @ a - op @ R)))
    return res


@lru_cache(maxsize=256)
def r_matrix_info(V: ModuleRep, W: ModuleRep) -> tuple[np.ndarray, str, float]:
    """(R, product order used, intertwiner residual).

    The forward order k = 1..n is tried first and the reversed order once; a
    residual above ``INTERTWINER_REJECT`` in both raises ConventionError.
    """
    if V.rs is not W.rs or V.q != W.q:
        raise ValueError("modules must share the root system and q")
    tried = {}
    for name, rev in (("forward", False), ("reversed", True)):
        R = _assemble(V, W, rev)
        res = intertwiner_residual(R, V, W)
        if res < INTERTWINER_REJECT:
            return R, name, res
        tried[name] = res
    raise ConventionError(f"R-matrix fails the intertwiner test: {tried}")


def r_matrix(V: ModuleRep, W: ModuleRep) -> np.ndarray:
    return r_matrix_info(V, W)[0]


@dataclass(frozen=True)
class IsotypicDecomposition:
    """Isotypic components (highest weight, form projector, multiplicity),
    listed by decreasing highest weight."""

    components: tuple[tuple[Weight, np.ndarray, int], ...]

    def multiplicities(self) -> dict[Weight, int]:
        return {lam: m for lam, _, m in self.components}


@lru_cache(maxsize=256)
def isotypic(M: ModuleRep, tol: float = linalg.DEFAULT_TOL) -> IsotypicDecomposition:
    """Split M by generating each highest-weight space to its submodule."""
    comps = []
    total = 0
    for lam in M.dominant_weights():
        hw = highest_weight_vectors(M, lam, tol, gap=linalg.AMBIGUITY_GAP)
        mult = hw.shape[1]
        if not mult:
            continue
        span, _ = lowering_closure(M, hw, lam)
        if span.shape[1] != mult * weyl_dim(M.rs, lam):
            raise ClosureError(
                f"isotypic component {lam} has dim {span.shape[1]}, "
                f"expected {mult} x {weyl_dim(M.rs, lam)}"
            )
        comps.append((lam, linalg.form_projector(span, M.gram), mult))
        total += span.shape[1]
    if total != M.dim:
        raise ClosureError(f"isotypic components cover {total} of {M.dim} dimensions")
    return IsotypicDecomposition(tuple(comps))


def casimir_power(M: ModuleRep, s: float) -> np.ndarray:
    """Operator acting as q^{s (lam | lam + 2 rho)} on the lam-isotypic part."""
    q = M.q
    if q == 1.0:
        # the projectors sum to the identity; avoid their roundoff
        return np.eye(M.dim)
    if M.blocks is not None:
        diag = np.empty(M.dim)
        for lam, start, stop in M.blocks:
            diag[start:stop] = q ** (s * float(casimir_exponent(M.rs, lam)))
        return np.diag(diag)
    out = np.zeros((M.dim, M.dim))
    for lam, proj, _ in isotypic(M).components:
        out += q ** (s * float(casimir_exponent(M.rs, lam))) * proj
    return out


def _inv_sqrt_scalar(V: ModuleRep, W: ModuleRep) -> np.ndarray:
    # R_21 R = Q_{VW} (Q_V (x) Q_W)^-1 with Q = q^{(lam|lam+2rho)} per isotypic part
    return casimir_power(tensor(V, W), -0.5) @ np.kron(casimir_power(V, 0.5), casimir_power(W, 0.5))


def _inv_sqrt_spectral(V: ModuleRep, W: ModuleRep) -> np.ndarray:
    r21 = flip(W, V) @ r_matrix(W, V) @ flip(V, W)
    return linalg.inv_sqrt_psd(r21 @ r_matrix(V, W), tensor(V, W).gram)


@lru_cache(maxsize=256)
def coboundary(V: ModuleRep, W: ModuleRep, path: str = "scalar") -> np.ndarray:
    """sigma_{V,W}: V (x) W -> W (x) V."""
    if path == "scalar":
        root = _inv_sqrt_scalar(V, W)
    elif path == "spectral":
        root = _inv_sqrt_spectral(V, W)
    else:
        raise ValueError(f"unknown path {path!r}; expected 'scalar' or 'spectral'")
    return flip(V, W) @ r_matrix(V, W) @ root


def coboundary_paths(V: ModuleRep, W: ModuleRep) -> tuple[np.ndarray, float]:
    """Scalar-path sigma plus its max-entry distance to the spectral path."""
    a = coboundary(V, W, "scalar")
    diff = float(np.abs(a - coboundary(V, W, "spectral")).max())
    if diff > PATH_REJECT:
        raise PathDisagreementError(f"scalar and spectral coboundaries differ by {diff:.3e}")
    return a, diff


def module_map_residual(op: np.ndarray, src: ModuleRep, dst: ModuleRep) -> float:
    """max_a ||op rho_src(a) - rho_dst(a) op||."""
    return max(float(np.linalg.norm(op @ a - b @ op))
               for a, b in zip(delta_action(src), delta_action(dst)))
