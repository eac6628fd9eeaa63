"""Grothendieck-ring bookkeeping and the cube identity.

Elements of K are finitely supported maps from dominant weights to integers.
Two independent routes produce them from a module: counting highest weight
vectors (joint kernel of the E_i on each dominant weight space) and peeling
characters off the full weight multiset using Freudenthal multiplicities.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .cactus import eigenspace_pairing_residual, j3_special_elements
from .cartan import RootSystem, Weight, is_dominant, weight_inner, weight_multiplicities, weyl_dim
from .errors import ClosureError, PeelingError
from .symext import power_subspace
from .uqg import ModuleRep, build_module, highest_weight_vectors, tensor_power

__all__ = [
    "GrothElement",
    "character",
    "peel",
    "groth_product",
    "decompose",
    "decompose_by_character",
    "classical_power",
    "classical_cube",
    "CubeResult",
    "quantum_cube",
    "verify_cube_identity",
    "psi_spectrum_check",
    "grassmann_continuity",
    "PSI_GAP",
]

PSI_GAP = 0.05


class GrothElement:
    """Integer combination of simple modules, keyed by dominant highest weight."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Weight, int] | Iterable[tuple[Weight, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: Counter = Counter()
        for lam, m in items:
            lam = tuple(int(x) for x in lam)
            if not is_dominant(lam):
                raise ValueError(f"Grothendieck ring keys must be dominant, got {lam}")
            acc[lam] += int(m)
        self._terms = {k: v for k, v in sorted(acc.items(), reverse=True) if v}

    @property
    def terms(self) -> dict[Weight, int]:
        return dict(self._terms)

    def __getitem__(self, lam: Weight) -> int:
        return self._terms.get(tuple(lam), 0)

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, GrothElement) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __add__(self, other: "GrothElement") -> "GrothElement":
        return GrothElement(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> "GrothElement":
        return GrothElement({k: -v for k, v in self._terms.items()})

    def __sub__(self, other: "GrothElement") -> "GrothElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "GrothElement":
        return GrothElement({lam: k * v for lam, v in self._terms.items()})

    def is_effective(self) -> bool:
        return all(v > 0 for v in self._terms.values())

    def dimension(self, rs: RootSystem) -> int:
        return sum(m * weyl_dim(rs, lam) for lam, m in self._terms.items())

    def minimum(self, other: "GrothElement") -> "GrothElement":
        keys = set(self._terms) | set(other._terms)
        return GrothElement({k: min(self[k], other[k]) for k in keys})

    def __repr__(self) -> str:
        inner = ", ".join(f"{lam}: {m}" for lam, m in self._terms.items())
        return f"GrothElement({{{inner}}})"


def character(rs: RootSystem, elem: GrothElement) -> Counter:
    out: Counter = Counter()
    for lam, m in elem:
        for mu, k in weight_multiplicities(rs, lam).items():
            out[mu] += m * k
    return out


def peel(rs: RootSystem, weights: Mapping[Weight, int] | Iterable[Weight]) -> GrothElement:
    """Split a weight multiset into simple characters by repeatedly removing
    the character of its highest remaining weight."""
    rest = Counter(weights) if not isinstance(weights, Mapping) else Counter(dict(weights))
    rest = Counter({tuple(k): v for k, v in rest.items() if v})
    out: dict[Weight, int] = {}
    while rest:
        if min(rest.values()) < 0:
            mu = min(rest, key=rest.get)
            raise PeelingError(f"negative multiplicity {rest[mu]} at weight {mu}")
        top = max(rest, key=lambda w: (weight_inner(rs, w, rs.rho), w))
        if not is_dominant(top):
            raise PeelingError(f"highest remaining weight {top} is not dominant")
        m = rest[top]
        out[top] = m
        for mu, k in weight_multiplicities(rs, top).items():
            rest[mu] -= m * k
        rest = Counter({k: v for k, v in rest.items() if v})
    return GrothElement(out)


def groth_product(rs: RootSystem, a: GrothElement, b: GrothElement) -> GrothElement:
    ca, cb = character(rs, a), character(rs, b)
    prod: Counter = Counter()
    for mu, x in ca.items():
        for nu, y in cb.items():
            prod[tuple(i + j for i, j in zip(mu, nu))] += x * y
    return peel(rs, prod)


def decompose(M: ModuleRep, tol: float = linalg.DEFAULT_TOL) -> GrothElement:
    """Multiplicities from highest-weight-vector counts."""
    out = {}
    for lam in M.dominant_weights():
        k = highest_weight_vectors(M, lam, tol, gap=linalg.AMBIGUITY_GAP).shape[1]
        if k:
            out[lam] = k
    elem = GrothElement(out)
    if elem.dimension(M.rs) != M.dim:
        raise ClosureError(f"decomposition {elem} accounts for {elem.dimension(M.rs)} of {M.dim} dimensions")
    return elem


def decompose_by_character(M: ModuleRep) -> GrothElement:
    return peel(M.rs, Counter(M.basis_weights))


def classical_power(rs: RootSystem, weights: Sequence[Weight], n: int, kind: str) -> GrothElement:
    """S^n or Lambda^n of a classical module from its weight multiset."""
    if kind == "sym":
        combos = itertools.combinations_with_replacement(range(len(weights)), n)
    elif kind == "ext":
        combos = itertools.combinations(range(len(weights)), n)
    else:
        raise ValueError(f"kind must be 'sym' or 'ext', got {kind!r}")
    ws = [tuple(w) for w in weights]
    multiset = Counter(tuple(map(sum, zip(*(ws[i] for i in c)))) for c in combos)
    if n == 0:
        multiset = Counter({(0,) * rs.rank: 1})
    return peel(rs, multiset)


def classical_cube(rs: RootSystem, weights: Sequence[Weight], kind: str) -> GrothElement:
    return classical_power(rs, weights, 3, kind)


@dataclass(frozen=True)
class CubeResult:
    kind: str
    element: GrothElement
    alternative: GrothElement
    subspace_dim: int
    alternative_subspace_dim: int

    @property
    def routes_agree(self) -> bool:
        return self.element == self.alternative and self.subspace_dim == self.alternative_subspace_dim


def _hw_frames(T: ModuleRep, tol: float) -> dict[Weight, np.ndarray]:
    out = {}
    for lam in T.dominant_weights():
        hw = highest_weight_vectors(T, lam, tol, gap=linalg.AMBIGUITY_GAP)
        if hw.shape[1]:
            out[lam] = linalg.form_orthonormalize(hw, T.gram)
    return out


def _joint_fixed_dim(ops: Sequence[tuple[np.ndarray, float]], tol: float) -> int:
    eye = np.eye(ops[0][0].shape[0])
    scale = 1.0 + max(np.linalg.norm(m, 2) for m, _ in ops)
    return linalg.kernel(np.vstack([m - s * eye for m, s in ops]), tol,
                         gap=linalg.AMBIGUITY_GAP, scale=scale).shape[1]


def quantum_cube(V: ModuleRep, kind: str, tol: float = linalg.DEFAULT_TOL) -> CubeResult:
    """S^3_q V (kind='sym') or Lambda^3_q V in K, by two routes.

    Route one uses the defining conditions a v = b v = +-v restricted to each
    highest weight space of V^(x)3; route two uses a v = +-v, psi v = v.
    The subspace dimensions are compared the same way on the full space.
    """
    s = 1.0 if kind == "sym" else -1.0
    if kind not in ("sym", "ext"):
        raise ValueError(f"kind must be 'sym' or 'ext', got {kind!r}")
    T = tensor_power(V, 3)
    a, b, psi = j3_special_elements(V)
    first, second = {}, {}
    for lam, H in _hw_frames(T, tol).items():
        ma, mb, mp = (linalg.restrict(x, H, T.gram) for x in (a, b, psi))
        k1 = _joint_fixed_dim([(ma, s), (mb, s)], tol)
        k2 = _joint_fixed_dim([(ma, s), (mp, 1.0)], tol)
        if k1:
            first[lam] = k1
        if k2:
            second[lam] = k2
    sub = power_subspace(V, 3, kind, False, tol).shape[1]
    alt = _joint_fixed_dim([(a, s), (psi, 1.0)], tol)
    elem = GrothElement(first)
    if elem.dimension(V.rs) != sub:
        raise ClosureError(f"cube decomposition {elem} does not match subspace dim {sub}")
    return CubeResult(kind, elem, GrothElement(second), sub, alt)


def verify_cube_identity(rs: RootSystem, summands: Sequence[Weight], q: float,
                         tol: float = linalg.DEFAULT_TOL) -> dict:
    """Compare S^3_q V - Lambda^3_q V with S^3 V - Lambda^3 V in K."""
    V = build_module(rs, summands, q)
    sq, lq = quantum_cube(V, "sym", tol), quantum_cube(V, "ext", tol)
    weights = V.basis_weights
    s3, l3 = classical_cube(rs, weights, "sym"), classical_cube(rs, weights, "ext")
    lhs = sq.element - lq.element
    rhs = s3 - l3
    diff = lhs - rhs
    # S^3 and Lambda^3 with the largest common submodule of S^2 V.V and
    # Lambda^2 V.V removed from each
    v_elem = peel(rs, Counter(weights))
    s2v = groth_product(rs, classical_power(rs, weights, 2, "sym"), v_elem)
    l2v = groth_product(rs, classical_power(rs, weights, 2, "ext"), v_elem)
    common = s2v.minimum(l2v)
    s3l, l3l = s2v - common, l2v - common
    return {
        "module": V,
        "quantum_sym": sq,
        "quantum_ext": lq,
        "classical_sym": s3,
        "classical_ext": l3,
        "difference": diff,
        "identity_holds": len(diff) == 0,
        "lifted_holds": sq.element + l3 == s3 + lq.element,
        "routes_agree": sq.routes_agree and lq.routes_agree,
        "reduced_sym": s3l,
        "reduced_ext": l3l,
        "reduced_identity_holds": s3l - l3l == rhs,
        "reduced_matches_quantum": s3l == sq.element and l3l == lq.element,
    }


def psi_spectrum_check(V: ModuleRep, tol: float = linalg.DEFAULT_TOL) -> dict:
    """Smallest singular value of psi + 1 on every highest weight space of V^(x)3
    and the t <-> 1/t eigenspace pairing under a; at q = 1 also psi^3 = 1."""
    T = tensor_power(V, 3)
    a, _, psi = j3_special_elements(V)
    per = {}
    for lam, H in _hw_frames(T, tol).items():
        ma, mp = linalg.restrict(a, H, T.gram), linalg.restrict(psi, H, T.gram)
        smin = float(np.linalg.svd(mp + np.eye(mp.shape[0]), compute_uv=False).min())
        pairing = eigenspace_pairing_residual(ma, mp, np.eye(mp.shape[0]))
        per[lam] = {"min_singular": smin, "pairing_residual": pairing}
    out = {
        "per_weight": per,
        "min_singular": min(v["min_singular"] for v in per.values()),
        "pairing_residual": max(v["pairing_residual"] for v in per.values()),
    }
    if V.q == 1.0:
        out["psi_cubed_identity"] = bool(np.array_equal(psi @ psi @ psi, np.eye(T.dim)))
    return out


def _fixed_hw_spaces(V: ModuleRep, kind: str, tol: float) -> dict[Weight, np.ndarray]:
    s = 1.0 if kind == "sym" else -1.0
    T = tensor_power(V, 3)
    a, b, _ = j3_special_elements(V)
    out = {}
    for lam, H in _hw_frames(T, tol).items():
        ma, mb = linalg.restrict(a, H, T.gram), linalg.restrict(b, H, T.gram)
        eye = np.eye(ma.shape[0])
        scale = 1.0 + max(np.linalg.norm(ma, 2), np.linalg.norm(mb, 2))
        ker = linalg.kernel(np.vstack([ma - s * eye, mb - s * eye]), tol, scale=scale)
        out[lam] = H @ ker
    return out


def grassmann_continuity(rs: RootSystem, summands: Sequence[Weight], kind: str = "sym",
                         eps: float = 1e-6, tol: float = linalg.DEFAULT_TOL) -> dict[Weight, dict]:
    """Per lam, the lam-highest-weight part of S^3_q V (or Lambda^3_q V) at
    q = 1 + eps against q = 1: dimensions and largest principal angle."""
    at_one = _fixed_hw_spaces(build_module(rs, summands, 1.0), kind, tol)
    near = _fixed_hw_spaces(build_module(rs, summands, 1.0 + eps), kind, tol)
    out = {}
    for lam in sorted(set(at_one) | set(near), reverse=True):
        x = at_one.get(lam)
        y = near.get(lam)
        dx = 0 if x is None else x.shape[1]
        dy = 0 if y is None else y.shape[1]
        angle = 0.0
        if dx and dy and dx == dy:
            angle = float(linalg.principal_angles(x, y).max())
        out[lam] = {"dim_q1": dx, "dim_q": dy, "max_angle": angle if dx == dy else float("inf")}
    return out
