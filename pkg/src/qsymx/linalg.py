"""Dense real linear algebra with explicit tolerances.

Every operator in the package is a real ``float64`` ndarray; a Gram form is
a symmetric positive-definite ndarray ``G`` with ``(v, w) = v.T @ G @ w``.
Rank decisions are relative: a singular value counts as zero when it is below
``tol`` times a scale, by default the largest singular value. Callers whose
matrix can be entirely roundoff (``X - 1`` for an X that is the identity on a
small block) pass the scale of X instead.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import FormError, RankAmbiguityError

__all__ = [
    "DEFAULT_TOL",
    "CLUSTER_TOL",
    "AMBIGUITY_GAP",
    "kernel",
    "range_basis",
    "rank",
    "adjoint",
    "inv_sqrt_psd",
    "check_form",
    "form_orthonormalize",
    "form_projector",
    "orthonormal_complement",
    "extend_orthonormal",
    "restrict",
    "principal_angles",
    "sign_fix",
]

DEFAULT_TOL = 1e-9
CLUSTER_TOL = 1e-8
AMBIGUITY_GAP = 1e-6


def sign_fix(basis: np.ndarray, eps: float = 1e-12) -> np.ndarray:
    """Flip columns so the first entry of magnitude > eps is positive."""
    out = basis.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        nz = np.flatnonzero(np.abs(col) > eps * max(1.0, np.abs(col).max()))
        if nz.size and col[nz[0]] < 0:
            out[:, k] = -col
    return out


def _singular(a: np.ndarray):
    a = np.atleast_2d(np.asarray(a, dtype=float))
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    full = np.zeros(a.shape[1])
    full[: s.size] = s
    return full, vh


def _check_gap(rel: np.ndarray, tol: float, gap: float) -> None:
    grey = rel[(rel >= tol) & (rel < gap)]
    if grey.size:
        raise RankAmbiguityError(
            f"singular value {grey.min():.3e} (relative) lies between the rank cutoff "
            f"{tol:.0e} and {gap:.0e}; raise precision or change q"
        )


def _relative(s: np.ndarray, scale: float | None) -> np.ndarray:
    ref = s.max() if scale is None else max(scale, s.max() if s.size else 0.0)
    return s / ref if ref > 0 else s


def kernel(a: np.ndarray, tol: float = DEFAULT_TOL, gap: float | None = None,
           scale: float | None = None) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical kernel of ``a``.

    Columns come ordered by increasing singular value, each sign-fixed. With
    ``gap`` set, a relative singular value in ``[tol, gap)`` raises
    :class:`RankAmbiguityError` instead of being silently classified.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    n = a.shape[1]
    if a.size == 0 or not np.any(a):
        return np.eye(n)
    s, vh = _singular(a)
    rel = _relative(s, scale)
    if gap is not None:
        _check_gap(rel, tol, gap)
    order = np.argsort(rel, kind="stable")
    keep = [k for k in order if rel[k] < tol]
    return sign_fix(vh[keep].T.copy())


def range_basis(a: np.ndarray, tol: float = DEFAULT_TOL, gap: float | None = None,
                scale: float | None = None) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical column space of ``a``."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.size == 0 or not np.any(a):
        return np.zeros((a.shape[0], 0))
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    rel = _relative(s, scale)
    if gap is not None:
        _check_gap(rel, tol, gap)
    return u[:, rel >= tol]


def rank(a: np.ndarray, tol: float = DEFAULT_TOL, gap: float | None = None,
         scale: float | None = None) -> int:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.size == 0 or not np.any(a):
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    rel = _relative(s, scale)
    if gap is not None:
        _check_gap(rel, tol, gap)
    return int(np.count_nonzero(rel >= tol))


def check_form(g: np.ndarray, sym_tol: float = 1e-12) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise FormError("Gram form must be a square matrix")
    scale = max(np.abs(g).max(), 1.0)
    if np.abs(g - g.T).max() > sym_tol * scale:
        raise FormError("Gram form is not symmetric")
    ev = np.linalg.eigvalsh(g)
    if ev.min() <= 0:
        raise FormError(f"Gram form is not positive definite (eigenvalue {ev.min():.3e})")
    return g


def adjoint(a: np.ndarray, form: np.ndarray, target_form: np.ndarray | None = None) -> np.ndarray:
    """Adjoint with respect to Gram forms: ``(a v, w)_target = (v, a* w)_source``.

    For an operator on one space pass only ``form``; then a* = G^-1 a^T G.
    """
    target = form if target_form is None else target_form
    return np.linalg.solve(form, a.T @ target)


def inv_sqrt_psd(a: np.ndarray, form: np.ndarray, eig_tol: float = CLUSTER_TOL,
                 adj_tol: float = 1e-8) -> np.ndarray:
    """T with T @ T = a^-1, for ``a`` form-self-adjoint with positive spectrum.

    Diagonalizes ``a`` in a form-orthonormal frame (Cholesky of the form), so
    the returned T is itself form-self-adjoint.
    """
    a = np.asarray(a, dtype=float)
    ga = form @ a
    res = np.linalg.norm(ga - a.T @ form)
    if res > adj_tol * max(np.linalg.norm(ga), 1e-300):
        raise FormError(f"operator is not self-adjoint for the form (residual {res:.3e})")
    chol = np.linalg.cholesky(form)
    # B = L^T a L^-T is symmetric when G a = a^T G
    b = scipy.linalg.solve_triangular(chol, (chol.T @ a).T, lower=True).T
    b = 0.5 * (b + b.T)
    ev, u = np.linalg.eigh(b)
    if ev.min() <= eig_tol * max(abs(ev).max(), 1e-300):
        raise FormError(f"non-positive eigenvalue {ev.min():.3e} in inverse square root")
    core = (u * ev ** -0.5) @ u.T
    left = scipy.linalg.solve_triangular(chol.T, core, lower=False)
    return left @ chol.T


def form_orthonormalize(basis: np.ndarray, form: np.ndarray) -> np.ndarray:
    """Columns spanning the same space, orthonormal for ``form``."""
    if basis.shape[1] == 0:
        return basis
    m = basis.T @ form @ basis
    chol = np.linalg.cholesky(0.5 * (m + m.T))
    return scipy.linalg.solve_triangular(chol, basis.T, lower=True).T


def form_projector(basis: np.ndarray, form: np.ndarray) -> np.ndarray:
    """Form-orthogonal projector onto the column span of ``basis``."""
    n = form.shape[0]
    if basis.shape[1] == 0:
        return np.zeros((n, n))
    m = basis.T @ form @ basis
    return basis @ np.linalg.solve(m, basis.T @ form)


def orthonormal_complement(basis: np.ndarray, form: np.ndarray | None = None) -> np.ndarray:
    """Basis of the (form-)orthogonal complement of the column span."""
    n = basis.shape[0]
    if basis.shape[1] == 0:
        return np.eye(n)
    constraint = basis.T if form is None else basis.T @ form
    return kernel(constraint)


def extend_orthonormal(q: np.ndarray, cands: np.ndarray, drop_tol: float = DEFAULT_TOL) -> np.ndarray:
    """Modified Gram-Schmidt with one re-orthogonalization pass.

    Appends to the orthonormal columns ``q`` each candidate column whose part
    orthogonal to the current span exceeds ``drop_tol`` times its norm.
    Returns only the new columns.
    """
    n = cands.shape[0]
    cols = [q[:, k] for k in range(q.shape[1])]
    new = []
    for k in range(cands.shape[1]):
        v = cands[:, k].astype(float, copy=True)
        norm0 = np.linalg.norm(v)
        if norm0 == 0:
            continue
        for _ in range(2):
            for c in cols:
                v -= (c @ v) * c
        nv = np.linalg.norm(v)
        if nv > drop_tol * norm0:
            v /= nv
            cols.append(v)
            new.append(v)
    return np.array(new).T if new else np.zeros((n, 0))


def restrict(op: np.ndarray, basis: np.ndarray, form: np.ndarray) -> np.ndarray:
    """Matrix of ``op`` on an invariant subspace with form-orthonormal basis."""
    return basis.T @ form @ op @ basis


def principal_angles(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] == 0 and b.shape[1] == 0:
        return np.zeros(0)
    return scipy.linalg.subspace_angles(a, b)
