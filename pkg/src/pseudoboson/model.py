"""The two-boson model Hamiltonian and its pseudo-boson diagonalization.

The model on two bosonic modes (a, b) with real parameters (beta, gamma):

    H = a'a + b b' + beta (a'a - b'b) + gamma (a'b' - a b)

where a prime denotes the adjoint. H is not self-adjoint for gamma != 0, yet
its spectrum is real:

    E(m, n) = rho + m (beta + rho) + n (rho - beta),    rho = sqrt(1 + gamma^2).

The diagonalizing structure is a pair of pseudo-boson ladder operators (c, c")
and (d, d"): each pair satisfies the canonical commutation relation but the
raising partner is not the adjoint of the lowering one. Eigenvectors of H are
built by raising the c/d vacuum, eigenvectors of the adjoint H' by raising a
second vacuum with the adjoints of c and d; the two families are biorthogonal.

Conventions. The basis here is orthonormal (unit-norm number states), not the
unnormalized polynomial basis sometimes used for the same model; with raw
operator powers (no 1/sqrt(m! n!)) the biorthogonality constant is
m! n! <vacuum', vacuum>, which is what `biorthogonality_matrix` reports.
The matrix of H is assembled as the finite section of the full-space operator,
using the exact reordering b b' = b'b + 1: a literal product of truncated
factors would zero the (n = n_max_b) boundary diagonal and pollute the
spectrum with spurious eigenvalues. The additive constant from the reordering
is part of the model and is kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .fock import (
    FockVector,
    Operator,
    TruncationSpec,
    apply,
    build_ladder_ops,
    commutator,
    identity_op,
    inner_product,
    interior_deviation,
)

__all__ = [
    "ModelParams",
    "PseudoBosonSet",
    "BiorthReport",
    "build_hamiltonian",
    "build_pseudoboson_ops",
    "commutation_report",
    "diagonal_form_check",
    "eigen_residuals",
    "build_vacua",
    "eigenstate",
    "adjoint_eigenstate",
    "energy",
    "biorthogonality_matrix",
    "phase_similarity",
    "similarity_check",
    "energy_grid",
    "block_layout",
]

#: exact phase table for (-i)^p, indexed by p mod 4
_PHASES = np.array([1.0 + 0.0j, -1.0j, -1.0 + 0.0j, 1.0j])


@dataclass(frozen=True)
class ModelParams:
    """Model parameters (beta, gamma) with derived quantities.

    rho = sqrt(1 + gamma^2) >= 1, alpha = gamma / (1 + rho) in [0, 1), and the
    pseudo-boson normalization norm_scale = (2 gamma rho)^(-1/2), defined only
    for gamma > 0. Negative gamma is rejected: the normalization would be
    imaginary, and the model at -gamma is unitarily equivalent anyway (negate
    gamma and conjugate by the diagonal phase used in `similarity_check`).
    """

    beta: float
    gamma: float

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError(
                "gamma must be nonnegative; for a negative coupling negate gamma "
                "and conjugate states by the diagonal phase similarity")

    @property
    def rho(self) -> float:
        return math.sqrt(1.0 + self.gamma ** 2)

    @property
    def alpha(self) -> float:
        return self.gamma / (1.0 + self.rho)

    @property
    def norm_scale(self) -> float:
        if self.gamma == 0:
            raise ValueError("normalization undefined at gamma = 0 (degenerate case)")
        return (2.0 * self.gamma * self.rho) ** -0.5


@dataclass(frozen=True)
class PseudoBosonSet:
    """Two pseudo-boson pairs: lowering (c, d) and raising (c_ddag, d_ddag).

    The raising partners are not adjoints of the lowering ones whenever
    gamma != 0. degenerate marks the gamma = 0 fallback to ordinary bosons.
    """

    c: Operator
    d: Operator
    c_ddag: Operator
    d_ddag: Operator
    degenerate: bool = False


@dataclass(frozen=True)
class BiorthReport:
    """Gram matrix of the two eigenvector families against each other.

    gram[(m,n) row, (p,q) column] = <adjoint-family (p,q), family (m,n)>,
    flattened row-major over the (m, n) grid. The expected value is
    m! n! delta_mp delta_nq times scale, scale = <vacuum', vacuum>.
    """

    gram: NDArray[np.complex128]
    scale: complex
    max_offdiag: float
    max_diag_error: float
    labels: list = field(default_factory=list)


def build_hamiltonian(p: ModelParams, trunc: TruncationSpec) -> tuple[Operator, Operator]:
    """The model Hamiltonian and its adjoint on the truncated space.

    Assembled as the finite section of the full-space operator,
    H = (1+beta) a'a + (1-beta) b'b + 1 + gamma (a'b' - a b); see the module
    docstring for why the reordered form is used.
    """
    a, b, a_dag, b_dag = build_ladder_ops(trunc)
    H = ((1.0 + p.beta) * (a_dag @ a)
         + (1.0 - p.beta) * (b_dag @ b)
         + identity_op(trunc)
         + p.gamma * ((a_dag @ b_dag) - (a @ b)))
    return H, H.adjoint()


def build_pseudoboson_ops(p: ModelParams, trunc: TruncationSpec) -> PseudoBosonSet:
    """The pseudo-boson ladder set for the model.

    c = N ((rho-1) b' + gamma a),  d = N ((rho-1) a' + gamma b),
    d" = N ((rho+1) b' - gamma a),  c" = N ((rho+1) a' - gamma b),
    with N = (2 gamma rho)^(-1/2). At gamma = 0 the construction degenerates
    (N diverges); the ordinary bosons are returned with the degenerate flag.
    """
    a, b, a_dag, b_dag = build_ladder_ops(trunc)
    if p.gamma == 0:
        return PseudoBosonSet(c=a, d=b, c_ddag=a_dag, d_ddag=b_dag, degenerate=True)
    N = p.norm_scale
    rho = p.rho
    g = p.gamma
    c = N * ((-1.0 + rho) * b_dag + g * a)
    d = N * ((-1.0 + rho) * a_dag + g * b)
    d_ddag = N * ((1.0 + rho) * b_dag - g * a)
    c_ddag = N * ((1.0 + rho) * a_dag - g * b)
    return PseudoBosonSet(c=c, d=d, c_ddag=c_ddag, d_ddag=d_ddag)


def commutation_report(p: ModelParams, trunc: TruncationSpec) -> dict:
    """Named interior deviations (margin 1) of the pseudo-boson algebra.

    All ten pairwise commutators among {c, d, c", d"} against the
    Weyl-Heisenberg pattern ([c, c"] = [d, d"] = identity, the rest zero),
    then the adjoint action of H on each ladder operator against its
    closed-form multiple: [H, c"] = (beta+rho) c", [H, d"] = (rho-beta) d",
    [H, c] = -(beta+rho) c, [H, d] = -(rho-beta) d.
    """
    ops = build_pseudoboson_ops(p, trunc)
    ident = identity_op(trunc)
    named = [("c", ops.c), ("d", ops.d), ("c_ddag", ops.c_ddag),
             ("d_ddag", ops.d_ddag)]
    unit_pairs = {("c", "c_ddag"), ("d", "d_ddag")}
    report = {}
    for i, (ni, xi) in enumerate(named):
        for nj, xj in named[i:]:
            target = ident if (ni, nj) in unit_pairs else None
            comm = commutator(xi, xj)
            diff = comm - target if target is not None else comm
            report[f"[{ni},{nj}]"] = interior_deviation(diff, margin=1)
    H, _ = build_hamiltonian(p, trunc)
    up = p.beta + p.rho
    down = p.rho - p.beta
    for name, op, coeff in [("c_ddag", ops.c_ddag, up), ("d_ddag", ops.d_ddag, down),
                            ("c", ops.c, -up), ("d", ops.d, -down)]:
        diff = commutator(H, op) - coeff * op
        report[f"[H,{name}]"] = interior_deviation(diff, margin=1)
    return report


def diagonal_form_check(p: ModelParams, trunc: TruncationSpec) -> float:
    """Interior deviation of H from beta (c"c - d"d) + rho (c"c + d d").

    The identity is exact on the full space; truncated operator products
    corrupt only boundary occupations, so the deviation is measured on the
    margin-1 interior and should sit at rounding level.
    """
    H, _ = build_hamiltonian(p, trunc)
    ops = build_pseudoboson_ops(p, trunc)
    cc = ops.c_ddag @ ops.c
    dd = ops.d_ddag @ ops.d
    ddd = ops.d @ ops.d_ddag
    expr = p.beta * (cc - dd) + p.rho * (cc + ddd)
    return interior_deviation(H - expr, margin=1)


def build_vacua(p: ModelParams, trunc: TruncationSpec) -> tuple[FockVector, FockVector]:
    """The pseudo-boson vacuum and the adjoint-family vacuum.

    In the orthonormal basis, exp(-alpha a'b')|0,0> = sum_n (-alpha)^n |n,n>
    and the adjoint-family vacuum carries (+alpha)^n. The first is annihilated
    by c and d (exactly, in truncation, up to the projected tail), the second
    by the adjoints of c" and d".
    """
    coeffs = np.zeros(trunc.dim, dtype=complex)
    coeffs_p = np.zeros(trunc.dim, dtype=complex)
    for n in range(min(trunc.n_max_a, trunc.n_max_b) + 1):
        idx = trunc.index(n, n)
        coeffs[idx] = (-p.alpha) ** n
        coeffs_p[idx] = (+p.alpha) ** n
    return FockVector(trunc, coeffs), FockVector(trunc, coeffs_p)


def _check_state_depth(p: ModelParams, m: int, n: int, trunc: TruncationSpec):
    if m < 0 or n < 0:
        raise ValueError("quantum numbers must be nonnegative")
    if m > trunc.n_max_a or n > trunc.n_max_b:
        raise ValueError(
            f"truncation too shallow for state ({m},{n}): "
            f"need n_max_a >= {m} and n_max_b >= {n}")


def eigenstate(p: ModelParams, m: int, n: int, trunc: TruncationSpec) -> FockVector:
    """Eigenvector of H with eigenvalue energy(p, m, n): raw raising powers
    applied to the vacuum (no factorial normalization)."""
    _check_state_depth(p, m, n, trunc)
    ops = build_pseudoboson_ops(p, trunc)
    v, _ = build_vacua(p, trunc)
    for _ in range(n):
        v = apply(ops.d_ddag, v)
    for _ in range(m):
        v = apply(ops.c_ddag, v)
    return v


def adjoint_eigenstate(p: ModelParams, m: int, n: int, trunc: TruncationSpec) -> FockVector:
    """Eigenvector of the adjoint Hamiltonian, built with the adjoints of the
    lowering operators applied to the adjoint-family vacuum."""
    _check_state_depth(p, m, n, trunc)
    ops = build_pseudoboson_ops(p, trunc)
    _, vp = build_vacua(p, trunc)
    c_star = ops.c.adjoint()
    d_star = ops.d.adjoint()
    for _ in range(n):
        vp = apply(d_star, vp)
    for _ in range(m):
        vp = apply(c_star, vp)
    return vp


def energy(p: ModelParams, m: int, n: int) -> float:
    """Closed-form eigenvalue E(m, n) = rho + m (beta + rho) + n (rho - beta)."""
    if m < 0 or n < 0:
        raise ValueError("quantum numbers must be nonnegative")
    return p.rho + m * (p.beta + p.rho) + n * (p.rho - p.beta)


def eigen_residuals(p: ModelParams, trunc: TruncationSpec,
                    m_max: int, n_max: int) -> list:
    """Relative eigen-residuals of both families over the (m, n) grid.

    Rows {"m", "n", "energy", "residual", "adjoint_residual"} where residual
    is ||H psi - E psi|| / ||psi|| for the raising-power eigenvector and
    adjoint_residual the same for the adjoint family under H'. Both decay
    with the geometric truncation tail, so a deep enough truncation is the
    caller's responsibility (see `biorthogonality_matrix` for the heuristic).
    """
    H, H_adj = build_hamiltonian(p, trunc)
    rows = []
    for m in range(m_max + 1):
        for n in range(n_max + 1):
            e = energy(p, m, n)
            v = eigenstate(p, m, n, trunc)
            w = adjoint_eigenstate(p, m, n, trunc)
            rv = apply(H, v).coeffs - e * v.coeffs
            rw = apply(H_adj, w).coeffs - e * w.coeffs
            res = float(np.sqrt((np.abs(rv) ** 2).sum())) / v.norm()
            res_adj = float(np.sqrt((np.abs(rw) ** 2).sum())) / w.norm()
            rows.append({"m": m, "n": n, "energy": e,
                         "residual": res, "adjoint_residual": res_adj})
    return rows


def biorthogonality_matrix(p: ModelParams, m_max: int, n_max: int,
                           trunc: TruncationSpec) -> BiorthReport:
    """Mutual Gram matrix of the eigenvector families up to (m_max, n_max).

    Precondition: the geometric tail alpha^(min cutoff - m_max - n_max) must be
    below 1e-12, otherwise truncation error would contaminate the grid and a
    ValueError asks for a deeper truncation.
    """
    depth_budget = min(trunc.n_max_a, trunc.n_max_b) - m_max - n_max
    if p.alpha > 0:
        if depth_budget <= 0 or p.alpha ** depth_budget >= 1e-12:
            need = m_max + n_max + max(1, math.ceil(-12.0 / math.log10(p.alpha)))
            raise ValueError(
                f"truncation too shallow for a ({m_max},{n_max}) grid: "
                f"need both cutoffs >= {need}")
    labels = [(m, n) for m in range(m_max + 1) for n in range(n_max + 1)]
    states = [eigenstate(p, m, n, trunc) for (m, n) in labels]
    adj_states = [adjoint_eigenstate(p, m, n, trunc) for (m, n) in labels]
    size = len(labels)
    gram = np.zeros((size, size), dtype=complex)
    for row, st in enumerate(states):
        for col, ad in enumerate(adj_states):
            gram[row, col] = inner_product(ad, st)
    vac, vac_p = build_vacua(p, trunc)
    scale = inner_product(vac_p, vac)
    max_off = 0.0
    max_diag = 0.0
    for row, (m, n) in enumerate(labels):
        for col in range(size):
            if col == row:
                expected = math.factorial(m) * math.factorial(n) * scale
                max_diag = max(max_diag, abs(gram[row, col] - expected))
            else:
                max_off = max(max_off, abs(gram[row, col]))
    return BiorthReport(gram=gram, scale=scale, max_offdiag=max_off,
                        max_diag_error=max_diag, labels=labels)


def phase_similarity(trunc: TruncationSpec) -> Operator:
    """Diagonal phase operator with (-i)^(m+n) on |m, n>; unitary, and it
    conjugates H into its adjoint by flipping the sign of the coupling."""
    phases = np.array([_PHASES[(m + n) % 4] for m, n in trunc.states()])
    return Operator(trunc, np.diag(phases))


def similarity_check(p: ModelParams, trunc: TruncationSpec) -> float:
    """Max entrywise |H_adj - S H S^-1| for the diagonal phase S.

    Diagonal conjugation commutes with the finite section, so this is exact
    (rounding level) at any truncation.
    """
    H, H_adj = build_hamiltonian(p, trunc)
    phases = np.array([_PHASES[(m + n) % 4] for m, n in trunc.states()])
    conjugated = np.outer(phases, phases.conj()) * H.entries
    return float(np.abs(H_adj.entries - conjugated).max())


def energy_grid(p: ModelParams, m_max: int, n_max: int) -> list[tuple[int, int, float]]:
    """The closed-form eigenvalue grid as (m, n, E) rows in row-major order."""
    return [(m, n, energy(p, m, n))
            for m in range(m_max + 1) for n in range(n_max + 1)]


def block_layout(p: ModelParams, m_max: int, n_max: int) -> list[list[float]]:
    """Kronecker-sum layout of the diagonal representation: block m holds the
    diagonal entries E(m, 0..n_max), starting at m (beta + rho) + rho with
    step rho - beta."""
    return [[energy(p, m, n) for n in range(n_max + 1)] for m in range(m_max + 1)]
