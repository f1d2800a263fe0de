"""Symmetry sectors of the model and their su(1,1) structure.

The occupation difference a'a - b'b commutes with the Hamiltonian, so the
model splits into sectors of fixed difference k. Inside sector k the states
are |j + max(k,0), j + max(-k,0)> for j = 0, 1, ..., and three bilinear
combinations of the ladder operators close an su(1,1) algebra:

    raising  a'b'   ->  subdiagonal  sqrt(j (|k| + j))
    lowering a b    ->  its transpose
    diagonal a'a + b'b + 1  ->  diag(|k| + 1 + 2j)

with [lowering, raising] = diagonal and [diagonal, raising] = 2 raising. The
sector Hamiltonian is then a real tridiagonal matrix (a pseudo-Jacobi matrix:
sub- and superdiagonal carry opposite signs, so it is non-self-adjoint but
similar to its transpose by a diagonal phase). A gamma-dependent tilt of the
su(1,1) triple produces a second, non-self-adjoint representation whose
diagonal generator is the shifted sector Hamiltonian divided by rho; its
lowest-weight vector is the sector slice of the pseudo-boson vacuum and the
Casimir element reduces to the same (k^2 - 1) scalar as for the self-adjoint
triple.

Truncation at depth D corrupts the last row and column of operator products
(the large-j tail), never the j = 0 end, so interior checks here trim trailing
indices. A Hermitian cousin of the sector matrix (same diagonal, symmetric
off-diagonal lam sqrt((j+1)(|k|+j+1))) is included as a stability contrast:
for |lam| < 1 its spectrum is bounded below with lowest point
beta k + sqrt(1-lam^2) (|k|+1), while for |lam| > 1 the finite sections sink
without bound as the depth grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .fock import Operator, TruncationSpec, build_ladder_ops, identity_op
from .linalg import eig_dense, eig_sym_tridiag, multiset_distance
from .model import ModelParams, build_hamiltonian

__all__ = [
    "SectorSpec",
    "Su11Generators",
    "PseudoSu11Generators",
    "SectorSpectrum",
    "SectorConvergence",
    "FullSectorComparison",
    "HermitianScan",
    "sector_basis",
    "sector_indices",
    "number_difference",
    "casimir_full",
    "sector_sizes",
    "casimir_reduction_check",
    "su11_generators",
    "su11_commutation_check",
    "casimir_matrix",
    "casimir_check",
    "pseudo_jacobi",
    "sector_phase_vector",
    "transpose_similarity_check",
    "pseudo_su11_generators",
    "lowest_weight_vector",
    "lowest_weight_residuals",
    "sector_spectrum",
    "converged_sector_spectrum",
    "full_vs_sector_check",
    "hermitian_sector_tridiag",
    "hermitian_lowest",
    "predicted_hermitian_lowest",
    "hermitian_variant_scan",
]

_PHASES = np.array([1.0 + 0.0j, -1.0j, -1.0 + 0.0j, 1.0j])


@dataclass(frozen=True)
class SectorSpec:
    """One symmetry sector: occupation difference k, kept at `depth` levels."""

    k: int
    depth: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("sector depth must be at least 1")


@dataclass(frozen=True)
class Su11Generators:
    """An su(1,1) triple as depth x depth matrices.

    variant "lowest" is the self-adjoint sector representation (raising is the
    transpose of lowering, diagonal positive, annihilated from below);
    variant "highest" swaps raising with lowering and negates the diagonal,
    giving the mirrored representation whose raising operator kills the j = 0
    state. Both satisfy [lowering, raising] = diagonal and
    [diagonal, raising] = 2 raising.
    """

    plus: NDArray[np.float64]
    minus: NDArray[np.float64]
    zero: NDArray[np.float64]
    variant: str = "lowest"


@dataclass(frozen=True)
class PseudoSu11Generators:
    """The tilted (non-self-adjoint) su(1,1) triple of sector k.

    Same commutation relations and Casimir value as the self-adjoint triple,
    but raising and lowering are no longer transposes of each other and the
    diagonal generator is full tridiagonal: zero = (sector Hamiltonian at
    beta = 0) / rho.
    """

    plus: NDArray[np.float64]
    minus: NDArray[np.float64]
    zero: NDArray[np.float64]


def sector_basis(spec: SectorSpec) -> list[tuple[int, int]]:
    """Occupation pairs (n_a, n_b) spanning the sector, j = 0 first."""
    up = max(spec.k, 0)
    down = max(-spec.k, 0)
    return [(j + up, j + down) for j in range(spec.depth)]


def sector_indices(spec: SectorSpec, trunc: TruncationSpec) -> list[int]:
    """Full-space basis indices of the sector chain inside a box truncation,
    j = 0 first. Errors if the box cannot hold `depth` chain states."""
    indices = []
    for na, nb in sector_basis(spec):
        if na > trunc.n_max_a or nb > trunc.n_max_b:
            raise ValueError(
                f"truncation too shallow for sector k={spec.k} at depth "
                f"{spec.depth}: state ({na},{nb}) falls outside the box")
        indices.append(trunc.index(na, nb))
    return indices


def number_difference(trunc: TruncationSpec) -> Operator:
    """The conserved occupation difference a'a - b'b; commutes with the model
    Hamiltonian exactly, truncation included (the box keeps sectors intact)."""
    a, b, a_dag, b_dag = build_ladder_ops(trunc)
    return (a_dag @ a) - (b_dag @ b)


def casimir_full(trunc: TruncationSpec) -> Operator:
    """The quadratic invariant (a'a - b'b - 1)(a'a - b'b + 1): diagonal with
    value k^2 - 1 on a sector-k state. Distinct from the bare occupation
    difference (`number_difference`), which is sometimes used as the sector
    label for short; both commute with the Hamiltonian exactly.
    """
    diff = number_difference(trunc)
    return (diff @ diff) - identity_op(trunc)


def sector_sizes(trunc: TruncationSpec) -> dict:
    """Depth of each sector inside a box truncation, keyed by k."""
    sizes = {}
    for k in range(-trunc.n_max_b, trunc.n_max_a + 1):
        depth = min(trunc.n_max_a - max(k, 0), trunc.n_max_b - max(-k, 0)) + 1
        sizes[k] = depth
    return sizes


def _interior_max(x: NDArray, margin: int) -> float:
    """Max magnitude over the matrix with `margin` trailing rows/cols dropped
    (truncation damage lives at the large-j end)."""
    n = x.shape[0]
    if margin < 0 or margin >= n:
        raise ValueError("margin must satisfy 0 <= margin < depth")
    limit = n - margin
    return float(np.abs(x[:limit, :limit]).max()) if limit > 0 else 0.0


def su11_generators(spec: SectorSpec, variant: str = "lowest") -> Su11Generators:
    """The sector su(1,1) triple; see the class docstring for the variants."""
    j = np.arange(1, spec.depth, dtype=float)
    coeff = np.sqrt(j * (abs(spec.k) + j))
    raising = np.diag(coeff, -1)
    lowering = raising.T.copy()
    diagonal = np.diag(abs(spec.k) + 1.0 + 2.0 * np.arange(spec.depth, dtype=float))
    if variant == "lowest":
        return Su11Generators(plus=raising, minus=lowering, zero=diagonal,
                              variant=variant)
    if variant == "highest":
        return Su11Generators(plus=lowering, minus=raising, zero=-diagonal,
                              variant=variant)
    raise ValueError(f"unknown variant {variant!r}; expected 'lowest' or 'highest'")


def su11_commutation_check(gens, margin: int = 1) -> float:
    """Max interior deviation of the three su(1,1) commutation relations
    [zero, plus] - 2 plus, [zero, minus] + 2 minus, [minus, plus] - zero.

    Works for the self-adjoint, mirrored, and tilted triples alike. The
    default margin of 1 hides the single boundary row where the truncated
    product [minus, plus] is cut short.
    """
    dev = 0.0
    dev = max(dev, _interior_max(gens.zero @ gens.plus - gens.plus @ gens.zero
                                 - 2.0 * gens.plus, margin))
    dev = max(dev, _interior_max(gens.zero @ gens.minus - gens.minus @ gens.zero
                                 + 2.0 * gens.minus, margin))
    dev = max(dev, _interior_max(gens.minus @ gens.plus - gens.plus @ gens.minus
                                 - gens.zero, margin))
    return dev


def casimir_matrix(gens) -> NDArray:
    """The quadratic Casimir element zero^2 - 2 zero - 4 plus minus."""
    return gens.zero @ gens.zero - 2.0 * gens.zero - 4.0 * (gens.plus @ gens.minus)


def casimir_check(gens, k: int, margin: int = 0) -> float:
    """Max interior deviation of the Casimir element from (k^2 - 1) times the
    identity. Exact for the self-adjoint triple (margin 0); the tilted triple
    needs margin 2 because plus and zero each reach one step off-diagonal."""
    c = casimir_matrix(gens)
    target = (k * k - 1.0) * np.eye(c.shape[0])
    return _interior_max(c - target, margin)


def casimir_reduction_check(spec: SectorSpec, gamma: float) -> tuple[float, float]:
    """Casimir deviations from (k^2 - 1) for the tilted triple (margin 2, the
    products widen the corrupted boundary) and the self-adjoint triple
    (margin 2 as well, for a like-for-like comparison; it is exact even at
    margin 0). Returned as (tilted, self_adjoint)."""
    tilted = casimir_check(pseudo_su11_generators(spec, gamma), spec.k, margin=2)
    plain = casimir_check(su11_generators(spec), spec.k, margin=2)
    return tilted, plain


def pseudo_jacobi(spec: SectorSpec, p: ModelParams) -> NDArray[np.float64]:
    """The sector Hamiltonian: a real tridiagonal pseudo-Jacobi matrix.

    diag_j = beta k + |k| + 1 + 2j, superdiag_j = -gamma sqrt((j+1)(|k|+j+1)),
    subdiag_j = +gamma sqrt((j+1)(|k|+j+1)). Built entrywise; the identity
    with diagonal + beta k + gamma (raising - lowering) from the su(1,1)
    triple is checked in tests rather than assumed.
    """
    d = spec.depth
    j = np.arange(d, dtype=float)
    diag = p.beta * spec.k + abs(spec.k) + 1.0 + 2.0 * j
    off = np.sqrt((j[:-1] + 1.0) * (abs(spec.k) + j[:-1] + 1.0))
    m = np.diag(diag)
    m += np.diag(-p.gamma * off, 1)
    m += np.diag(+p.gamma * off, -1)
    return m


def sector_phase_vector(spec: SectorSpec) -> NDArray[np.complex128]:
    """Diagonal phases (-i)^(n_a + n_b) restricted to the sector: the sector
    slice of the full-space phase similarity."""
    return np.array([_PHASES[(na + nb) % 4] for na, nb in sector_basis(spec)])


def transpose_similarity_check(spec: SectorSpec, p: ModelParams) -> float:
    """Max entrywise |J^T - D J D^-1| for the sector phase diagonal D; exact
    at any depth since diagonal conjugation respects the finite section."""
    m = pseudo_jacobi(spec, p)
    phases = sector_phase_vector(spec)
    conjugated = np.outer(phases, phases.conj()) * m
    return float(np.abs(m.T - conjugated).max())


def pseudo_su11_generators(spec: SectorSpec, gamma: float) -> PseudoSu11Generators:
    """The tilted su(1,1) triple of sector k at coupling gamma.

    With rho = sqrt(1 + gamma^2) and the self-adjoint triple (R, L, Z):

        plus  = (gamma / 2 rho) ( ((1+rho)/gamma) R + (gamma/(1+rho)) L - Z )
        minus = (gamma / 2 rho) ( ((rho-1)/gamma) R + (gamma/(rho-1)) L + Z )
        zero  = (1/rho) ( Z + gamma (R - L) )

    The coefficient triples of plus and minus are the +-2 rho eigenvectors of
    the sector secular matrix (see `emm.su11_secular`). Undefined at
    gamma = 0, where the tilt degenerates to the self-adjoint triple.
    """
    if gamma == 0:
        raise ValueError("tilted triple undefined at gamma = 0; "
                         "use su11_generators for the self-adjoint triple")
    base = su11_generators(spec)
    rho = math.sqrt(1.0 + gamma ** 2)
    r, el, z = base.plus, base.minus, base.zero
    front = gamma / (2.0 * rho)
    plus = front * (((1.0 + rho) / gamma) * r + (gamma / (1.0 + rho)) * el - z)
    minus = front * (((-1.0 + rho) / gamma) * r + (gamma / (-1.0 + rho)) * el + z)
    zero = (z + gamma * (r - el)) / rho
    return PseudoSu11Generators(plus=plus, minus=minus, zero=zero)


def lowest_weight_vector(spec: SectorSpec, gamma: float) -> NDArray[np.float64]:
    """Sector slice of the pseudo-boson vacuum: components
    (-alpha)^j sqrt(binom(|k|+j, j)) with alpha = gamma / (1 + rho).

    Annihilated by the tilted `minus` and an eigenvector of the tilted `zero`
    with eigenvalue |k| + 1, up to the geometric truncation tail.
    """
    rho = math.sqrt(1.0 + gamma ** 2)
    alpha = gamma / (1.0 + rho)
    a = abs(spec.k)
    return np.array([(-alpha) ** j * math.sqrt(math.comb(a + j, j))
                     for j in range(spec.depth)])


def lowest_weight_residuals(spec: SectorSpec, gamma: float) -> tuple[float, float]:
    """Relative residuals (|minus v| / |v|, |zero v - (|k|+1) v| / |v|) for the
    lowest-weight vector of the tilted triple."""
    gens = pseudo_su11_generators(spec, gamma)
    v = lowest_weight_vector(spec, gamma)
    scale = float(np.sqrt(np.sum(v * v)))
    lower = float(np.sqrt(np.sum((gens.minus @ v) ** 2))) / scale
    shifted = gens.zero @ v - (abs(spec.k) + 1.0) * v
    zero_res = float(np.sqrt(np.sum(shifted * shifted))) / scale
    return lower, zero_res


@dataclass(frozen=True)
class SectorSpectrum:
    """Lowest eigenvalues of one sector finite section against closed form.

    residuals are the eigensolver's per-pair relative residuals for the kept
    eigenvalues, aligned with `values`.
    """

    k: int
    depth: int
    values: NDArray[np.complex128]
    targets: NDArray[np.float64]
    errors: NDArray[np.float64]
    residuals: NDArray[np.float64]

    @property
    def max_error(self) -> float:
        return float(self.errors.max()) if self.errors.size else 0.0


def sector_spectrum(spec: SectorSpec, p: ModelParams, n_eigs: int = 3) -> SectorSpectrum:
    """Lowest n_eigs eigenvalues of the sector matrix (by real part) next to
    the closed-form targets beta k + rho (|k| + 1 + 2j).

    Finite-section eigenvalues converge to the closed form from within as the
    depth grows; shallow sections can also show complex artifact pairs, which
    land at large real part and stay clear of the lowest levels.
    """
    if n_eigs < 1 or n_eigs > spec.depth:
        raise ValueError("n_eigs must be between 1 and the sector depth")
    m = pseudo_jacobi(spec, p)
    report = eig_dense(m, want_vectors=True)
    if not report.converged:
        raise RuntimeError(
            f"eigensolver did not converge on sector k={spec.k} depth "
            f"{spec.depth} after {report.iterations} sweeps")
    values = report.values[:n_eigs]
    norm = float(np.sqrt(np.sum(np.abs(m) ** 2)))
    residuals = report.residuals[:n_eigs] / max(norm, 1.0)
    j = np.arange(n_eigs, dtype=float)
    targets = p.beta * spec.k + p.rho * (abs(spec.k) + 1.0 + 2.0 * j)
    errors = np.abs(values - targets)
    return SectorSpectrum(k=spec.k, depth=spec.depth, values=values,
                          targets=targets, errors=errors, residuals=residuals)


@dataclass(frozen=True)
class SectorConvergence:
    """Depth-doubling record for one sector's lowest eigenvalues."""

    k: int
    depths: list = field(default_factory=list)
    history: list = field(default_factory=list)
    values: NDArray[np.complex128] = None
    targets: NDArray[np.float64] = None
    max_step: float = float("inf")
    converged: bool = False


def converged_sector_spectrum(k: int, p: ModelParams, n_eigs: int = 3,
                              start_depth: int = 30, doublings: int = 2,
                              tol: float = 1e-8) -> SectorConvergence:
    """Compute the sector's lowest eigenvalues at start_depth, then double the
    depth `doublings` times; converged means the last two depths agree to tol
    on every kept eigenvalue."""
    depths = [start_depth * (2 ** i) for i in range(doublings + 1)]
    history = []
    targets = None
    for depth in depths:
        spec = SectorSpec(k=k, depth=depth)
        result = sector_spectrum(spec, p, n_eigs=n_eigs)
        history.append(result.values)
        targets = result.targets
    if len(history) > 1:
        max_step = float(np.abs(history[-1] - history[-2]).max())
    else:
        max_step = 0.0
    return SectorConvergence(k=k, depths=depths, history=history,
                             values=history[-1], targets=targets,
                             max_step=max_step, converged=max_step < tol)


@dataclass(frozen=True)
class FullSectorComparison:
    """Multiset comparison of the full-space spectrum with the union of
    sector finite-section spectra at matching depths."""

    distance: float
    full_values: NDArray[np.complex128]
    sector_values: NDArray[np.complex128]


def full_vs_sector_check(p: ModelParams, trunc: TruncationSpec) -> FullSectorComparison:
    """Diagonalize the full truncated Hamiltonian and, independently, every
    sector finite section it contains; the two eigenvalue multisets agree
    exactly (the box truncation is permutation-similar to the direct sum of
    sector sections), so the greedy matching distance sits at solver accuracy.
    """
    H, _ = build_hamiltonian(p, trunc)
    full_vals = eig_dense(H.entries).values
    pieces = []
    for k, depth in sorted(sector_sizes(trunc).items()):
        spec = SectorSpec(k=k, depth=depth)
        pieces.append(eig_dense(pseudo_jacobi(spec, p)).values)
    sector_vals = np.concatenate(pieces)
    idx = np.lexsort((sector_vals.imag, sector_vals.real))
    sector_vals = sector_vals[idx]
    distance = multiset_distance(full_vals, sector_vals)
    return FullSectorComparison(distance=distance, full_values=full_vals,
                                sector_values=sector_vals)


def hermitian_sector_tridiag(spec: SectorSpec, beta: float,
                             lam: float) -> tuple[NDArray, NDArray]:
    """Diagonal and off-diagonal of the Hermitian cousin: same diagonal as the
    sector matrix, symmetric off-diagonal lam sqrt((j+1)(|k|+j+1))."""
    j = np.arange(spec.depth, dtype=float)
    diag = beta * spec.k + abs(spec.k) + 1.0 + 2.0 * j
    off = lam * np.sqrt((j[:-1] + 1.0) * (abs(spec.k) + j[:-1] + 1.0))
    return diag, off


def hermitian_lowest(spec: SectorSpec, beta: float, lam: float) -> float:
    """Lowest eigenvalue of the Hermitian cousin at this depth."""
    diag, off = hermitian_sector_tridiag(spec, beta, lam)
    report = eig_sym_tridiag(diag, off)
    return float(report.values[0].real)


def predicted_hermitian_lowest(k: int, beta: float, lam: float):
    """Infinite-depth lowest point beta k + sqrt(1 - lam^2) (|k| + 1) for
    |lam| < 1; None for |lam| >= 1, where the operator is unbounded below."""
    if abs(lam) >= 1.0:
        return None
    return beta * k + math.sqrt(1.0 - lam * lam) * (abs(k) + 1.0)


@dataclass(frozen=True)
class HermitianScan:
    """Lowest eigenvalue of the Hermitian cousin across depths."""

    k: int
    lam: float
    depths: list
    lowest: list
    predicted: object
    final_drop: float

    @property
    def bounded(self) -> bool:
        return self.predicted is not None


def hermitian_variant_scan(k: int, beta: float, lam: float,
                           depths) -> HermitianScan:
    """Track the lowest eigenvalue over a list of depths. In the bounded
    regime it settles onto the predicted value; in the unbounded regime the
    final_drop (last decrease between consecutive depths) stays large."""
    depths = list(depths)
    if len(depths) < 2:
        raise ValueError("need at least two depths to track a trend")
    lowest = [hermitian_lowest(SectorSpec(k=k, depth=d), beta, lam)
              for d in depths]
    final_drop = lowest[-2] - lowest[-1]
    return HermitianScan(k=k, lam=lam, depths=depths, lowest=lowest,
                         predicted=predicted_hermitian_lowest(k, beta, lam),
                         final_drop=final_drop)
