"""Constructive check that a matrix with real simple spectrum is similar to
its adjoint.

Any square matrix whose eigenvalues are real and distinct satisfies
M^H = S M S^-1 for an invertible S built from eigenvectors: if phi_i are
eigenvectors of M and psi_i eigenvectors of M^H for the same eigenvalue,
normalized to be biorthonormal (<psi_i, phi_j> = delta_ij), then S maps
phi_i to psi_i. S is self-adjoint and generally far from unitary; the
distance of S^H S from the identity is reported, never asserted, because it
measures the non-normality of M rather than any error.

`verify_similarity` carries this out numerically with a deterministic
eigenvector convention (largest-magnitude component scaled to exactly 1, then
the adjoint family rescaled for biorthonormality), so the returned transform
is reproducible and hand-checkable on small examples. Preconditions (real
spectrum, simple spectrum) are enforced up front with named errors: feeding a
matrix with a complex eigenvalue pair - a shallow strongly-coupled sector
matrix, say - fails loudly instead of returning a meaningless transform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .linalg import eig_dense, multiset_distance, solve_matrix

__all__ = ["SimilarityReport", "verify_similarity"]


@dataclass(frozen=True)
class SimilarityReport:
    """Outcome of the similarity construction.

    similarity_error is ||M^H - S M S^-1||_F / ||M||_F, scale invariant;
    biorth_error the largest off-diagonal |<psi_i, phi_j>| after
    normalization; spectrum_match the greedy matching distance between the
    spectrum of M and the conjugated spectrum of M^H; unitarity_defect the
    Frobenius distance of S^H S from the identity (informational only).
    """

    spectrum_real: bool
    max_imag: float
    spectrum_match: float
    biorth_error: float
    similarity_error: float
    unitarity_defect: float
    transform: NDArray[np.complex128]


def _largest_component_one(v: NDArray[np.complex128]) -> NDArray[np.complex128]:
    idx = int(np.argmax(np.abs(v)))
    pivot = v[idx]
    if pivot == 0:
        raise ValueError("eigenvector is numerically zero")
    return v / pivot


def verify_similarity(m: NDArray, real_tol: float = 1e-8) -> SimilarityReport:
    """Build S with M^H = S M S^-1 from the two eigenvector families.

    Preconditions, checked in order with ValueError on failure: the spectrum
    must be real within real_tol (absolute imaginary parts), and simple with
    minimum gap above 1e-8 ||M||_F. Eigenvectors are scaled so the
    largest-magnitude component is exactly 1; the adjoint family is then
    divided by the conjugate of the mutual inner product, making the pairing
    exactly biorthonormal. S = Psi Phi^-1 follows from one LU factorization.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    n = m.shape[0]
    if n == 0:
        raise ValueError("matrix must be nonempty")
    norm = float(np.sqrt(np.sum(np.abs(m) ** 2)))

    direct = eig_dense(m, want_vectors=True)
    adjoint = eig_dense(m.conj().T, want_vectors=True)

    max_imag = float(np.abs(direct.values.imag).max())
    if max_imag > real_tol:
        raise ValueError(
            f"precondition failed: spectrum not real (max |imag| = {max_imag:.3e} "
            f"> {real_tol:.1e}); the similarity construction needs a real spectrum")
    if n > 1:
        gaps = np.abs(np.diff(np.sort(direct.values.real)))
        min_gap = float(gaps.min())
        if min_gap <= 1e-8 * max(norm, 1e-300):
            raise ValueError(
                f"precondition failed: spectrum not simple (min gap = {min_gap:.3e} "
                f"relative to matrix norm {norm:.3e}); eigenvalues must be distinct")

    # Both solvers sort by (real, imag); with a real simple spectrum the i-th
    # adjoint eigenvalue is the conjugate of the i-th direct one.
    spectrum_match = multiset_distance(direct.values, adjoint.values.conj())

    phi = np.empty((n, n), dtype=complex)
    psi = np.empty((n, n), dtype=complex)
    for i in range(n):
        phi[:, i] = _largest_component_one(direct.vectors[:, i])
        psi[:, i] = _largest_component_one(adjoint.vectors[:, i])
        g = np.vdot(psi[:, i], phi[:, i])
        if abs(g) <= 1e-12 * float(np.sqrt(np.sum(np.abs(psi[:, i]) ** 2))
                                   * np.sqrt(np.sum(np.abs(phi[:, i]) ** 2))):
            raise ValueError(
                f"eigenvector pair {i} is numerically orthogonal; "
                "the two families cannot be paired (matrix too non-normal "
                "for this tolerance or eigenvalues misordered)")
        psi[:, i] = psi[:, i] / np.conj(g)

    gram = psi.conj().T @ phi
    off = gram - np.diag(np.diag(gram))
    biorth_error = float(np.abs(off).max())

    transform = psi @ solve_matrix(phi, np.eye(n, dtype=complex))
    # S M S^-1 without forming S^-1: solve S^T X^T = (S M)^T for X.
    conjugated = solve_matrix(transform.T, (transform @ m).T).T
    defect = m.conj().T - conjugated
    similarity_error = float(np.sqrt(np.sum(np.abs(defect) ** 2)))
    similarity_error /= max(norm, 1e-300)
    unitarity = transform.conj().T @ transform - np.eye(n)
    unitarity_defect = float(np.sqrt(np.sum(np.abs(unitarity) ** 2)))

    return SimilarityReport(spectrum_real=True, max_imag=max_imag,
                            spectrum_match=spectrum_match,
                            biorth_error=biorth_error,
                            similarity_error=similarity_error,
                            unitarity_defect=unitarity_defect,
                            transform=transform)
