"""Model assembly, pseudo-boson algebra, vacua, eigenstates, biorthogonality,
and the diagonal phase similarity."""

import numpy as np
import pytest

from pseudoboson.fock import TruncationSpec, apply, basis_state, inner_product
from pseudoboson.linalg import eig_dense
from pseudoboson.model import (
    ModelParams,
    biorthogonality_matrix,
    block_layout,
    build_hamiltonian,
    build_pseudoboson_ops,
    build_vacua,
    commutation_report,
    diagonal_form_check,
    eigen_residuals,
    eigenstate,
    energy,
    energy_grid,
    phase_similarity,
    similarity_check,
)

P = ModelParams(beta=0.5, gamma=0.75)


def test_params_derived_quantities():
    assert P.rho == pytest.approx(1.25)
    assert P.alpha == pytest.approx(1.0 / 3.0)
    assert P.norm_scale == pytest.approx(0.7302967433402214)
    # the two closed forms for alpha agree
    assert P.alpha == pytest.approx((P.rho - 1.0) / P.gamma)


def test_params_reject_negative_coupling():
    with pytest.raises(ValueError, match="nonnegative"):
        ModelParams(beta=0.5, gamma=-0.1)


def test_decoupled_hamiltonian_is_diagonal():
    trunc = TruncationSpec(4, 4)
    h, h_adj = build_hamiltonian(ModelParams(0.0, 0.0), trunc)
    assert np.abs(h.entries - np.diag(np.diag(h.entries))).max() == 0.0
    assert np.array_equal(h.entries, h_adj.entries)
    for m, n in trunc.states():
        v = basis_state(trunc, m, n)
        assert inner_product(v, apply(h, v)) == pytest.approx(m + n + 1)


def test_decoupled_level_splitting():
    # beta shifts the two modes oppositely: H|1,0> = (1 + beta + 1)|1,0>
    trunc = TruncationSpec(3, 3)
    h, _ = build_hamiltonian(ModelParams(0.5, 0.0), trunc)
    v = basis_state(trunc, 1, 0)
    assert inner_product(v, apply(h, v)) == pytest.approx(2.5)
    w = basis_state(trunc, 0, 1)
    assert inner_product(w, apply(h, w)) == pytest.approx(1.5)


def test_pair_coupling_matrix_element():
    trunc = TruncationSpec(3, 3)
    h, _ = build_hamiltonian(P, trunc)
    bra = basis_state(trunc, 2, 1)
    ket = basis_state(trunc, 1, 0)
    assert inner_product(bra, apply(h, ket)) == pytest.approx(P.gamma * np.sqrt(2))


def test_hamiltonian_not_normal():
    trunc = TruncationSpec(4, 4)
    h, h_adj = build_hamiltonian(P, trunc)
    assert np.abs(h.entries - h_adj.entries).max() > 0.5


def test_pseudoboson_ops_differ_from_adjoints():
    # c_ddag is NOT the adjoint of c once gamma is on; that gap is the point
    trunc = TruncationSpec(4, 4)
    ops = build_pseudoboson_ops(ModelParams(0.5, 1.0), trunc)
    gap = np.abs(ops.c_ddag.entries - ops.c.adjoint().entries).max()
    assert gap > 0.4
    assert not ops.degenerate


def test_pseudoboson_ops_collapse_at_zero_coupling():
    trunc = TruncationSpec(3, 3)
    ops = build_pseudoboson_ops(ModelParams(0.5, 0.0), trunc)
    assert ops.degenerate
    assert np.abs(ops.c_ddag.entries - ops.c.adjoint().entries).max() == 0.0


def test_commutation_report_interior_clean():
    report = commutation_report(P, TruncationSpec(8, 8))
    for name, dev in report.items():
        tol = 1e-9 if name.startswith("[H,") else 1e-10
        assert dev < tol, name


def test_diagonal_form_parameter_sweep():
    for beta, gamma, trunc in ((0.5, 0.75, TruncationSpec(8, 8)),
                               (0.0, 0.0, TruncationSpec(6, 6)),
                               (2.0, 1.0, TruncationSpec(6, 6))):
        assert diagonal_form_check(ModelParams(beta, gamma), trunc) < 1e-10


def test_vacua_geometric_profiles():
    trunc = TruncationSpec(20, 20)
    vac, vac_adj = build_vacua(P, trunc)
    for n, expected in ((0, 1.0), (1, -1.0 / 3.0), (2, 1.0 / 9.0), (3, -1.0 / 27.0)):
        idx = trunc.index(n, n)
        ratio = vac.coeffs[idx] / vac.coeffs[0]
        assert ratio == pytest.approx(expected)
        assert vac_adj.coeffs[idx] / vac_adj.coeffs[0] == pytest.approx(abs(expected))
    # off-diagonal occupations never appear
    for m, n in trunc.states():
        if m != n:
            assert vac.coeffs[trunc.index(m, n)] == 0.0


def test_vacua_mutual_overlap():
    trunc = TruncationSpec(40, 40)
    vac, vac_adj = build_vacua(P, trunc)
    overlap = inner_product(vac_adj, vac)
    assert overlap == pytest.approx(0.9, abs=1e-12)
    assert overlap == pytest.approx(1.0 / (1.0 + P.alpha ** 2), abs=1e-12)


def test_vacua_annihilated_by_lowering_pair():
    trunc = TruncationSpec(40, 40)
    ops = build_pseudoboson_ops(P, trunc)
    vac, vac_adj = build_vacua(P, trunc)
    assert apply(ops.c, vac).norm() < 1e-12
    assert apply(ops.d, vac).norm() < 1e-12
    assert apply(ops.d_ddag.adjoint(), vac_adj).norm() < 1e-12
    assert apply(ops.c_ddag.adjoint(), vac_adj).norm() < 1e-12


def test_eigen_residuals_deep_truncation():
    rows = eigen_residuals(P, TruncationSpec(40, 40), 3, 3)
    assert len(rows) == 16
    for row in rows:
        assert row["residual"] < 1e-8
        assert row["adjoint_residual"] < 1e-8
        assert row["energy"] == pytest.approx(energy(P, row["m"], row["n"]))


def test_eigenstate_rejects_occupation_beyond_cutoff():
    with pytest.raises(ValueError, match="too shallow"):
        eigenstate(P, 5, 3, TruncationSpec(4, 4))


def test_biorthogonality_gram_values():
    report = biorthogonality_matrix(P, 2, 2, TruncationSpec(40, 40))
    labels = {lbl: i for i, lbl in enumerate(report.labels)}
    g = report.gram
    assert g[labels[(0, 0)], labels[(0, 0)]] == pytest.approx(0.9, abs=1e-10)
    assert g[labels[(1, 1)], labels[(1, 1)]] == pytest.approx(0.9, abs=1e-10)
    assert g[labels[(2, 0)], labels[(2, 0)]] == pytest.approx(1.8, abs=1e-10)
    assert g[labels[(2, 2)], labels[(2, 2)]] == pytest.approx(3.6, abs=1e-9)
    assert report.max_offdiag < 1e-10
    assert report.scale == pytest.approx(0.9, abs=1e-12)


def test_biorthogonality_needs_depth():
    with pytest.raises(ValueError, match="truncation too shallow"):
        biorthogonality_matrix(P, 4, 4, TruncationSpec(12, 12))


def test_phase_similarity_exact():
    trunc = TruncationSpec(6, 6)
    assert similarity_check(P, trunc) == 0.0
    s = phase_similarity(trunc).entries
    assert np.abs(s.conj().T @ s - np.eye(trunc.dim)).max() == 0.0
    # period-four phase pattern along the diagonal states
    assert s[0, 0] == 1.0
    assert s[trunc.index(0, 1), trunc.index(0, 1)] == -1.0j
    assert s[trunc.index(1, 1), trunc.index(1, 1)] == -1.0
    assert s[trunc.index(2, 1), trunc.index(2, 1)] == 1.0j


def test_phase_similarity_trivial_when_self_adjoint():
    assert similarity_check(ModelParams(0.5, 0.0), TruncationSpec(5, 5)) == 0.0


def test_energy_closed_form():
    assert energy(P, 0, 0) == pytest.approx(1.25)
    assert energy(P, 1, 0) == pytest.approx(3.0)
    assert energy(P, 0, 1) == pytest.approx(2.0)
    assert energy(P, 2, 3) == pytest.approx(7.0)
    p0 = ModelParams(0.0, 0.0)
    for m in range(4):
        for n in range(4):
            assert energy(p0, m, n) == pytest.approx(1 + m + n)


def test_energy_grid_and_blocks():
    grid = energy_grid(P, 1, 1)
    assert grid == [(0, 0, 1.25), (0, 1, 2.0), (1, 0, 3.0), (1, 1, 3.75)]
    blocks = block_layout(P, 1, 1)
    assert blocks == [[1.25, 2.0], [3.0, 3.75]]


def test_spectrum_matches_adjoint_spectrum():
    trunc = TruncationSpec(12, 12)
    h, h_adj = build_hamiltonian(P, trunc)
    direct = np.sort_complex(eig_dense(h.entries).values)[:10]
    adjoint = np.sort_complex(eig_dense(h_adj.entries).values)[:10]
    assert np.abs(direct - adjoint.conj()).max() < 1e-6


def test_ground_level_is_spectral_minimum():
    # frozen parameter set; the invariant needs the geometric tail alpha^N to
    # be converged at this truncation, which these points satisfy
    trunc = TruncationSpec(12, 12)
    tight = [(0.5, 0.75), (0.9, 0.75), (-0.5, 0.75), (0.0, 0.25),
             (0.3, 0.5), (-0.8, 0.4)]
    loose = [(0.5, 1.0), (0.0, 1.0)]
    for pts, tol in ((tight, 1e-8), (loose, 1e-6)):
        for beta, gamma in pts:
            p = ModelParams(beta, gamma)
            h, _ = build_hamiltonian(p, trunc)
            values = eig_dense(h.entries).values
            assert abs(values.real.min() - p.rho) < tol, (beta, gamma)
