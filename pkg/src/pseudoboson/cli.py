"""Command-line front end: parameter sweeps, verification suites, and
machine-readable reports.

Every numeric in a report comes from a library call; the CLI only assembles
output and compares deviations against tolerances. Reports are deterministic:
fixed key order, floats rounded to 15 significant digits, no timestamps.
JSON reports carry a top-level {"schema": "1"}; CSV column sets are documented
in the README.

Exit codes: 0 when every check in the selected suite passes, 1 on the first
tolerance failure (named on stderr), 2 for unusable flags or inputs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .emm import (
    model_emm_eigenpairs,
    model_emm_matrix,
    su11_secular,
    symplectic_pairing,
)
from .fock import TruncationSpec
from .linalg import eig_dense, multiset_distance, residual, solve_matrix
from .model import (
    ModelParams,
    biorthogonality_matrix,
    block_layout,
    commutation_report,
    diagonal_form_check,
    eigen_residuals,
    energy,
    energy_grid,
    similarity_check,
)
from .sectors import (
    SectorSpec,
    casimir_reduction_check,
    converged_sector_spectrum,
    full_vs_sector_check,
    hermitian_variant_scan,
    lowest_weight_residuals,
    pseudo_su11_generators,
    su11_commutation_check,
    su11_generators,
    transpose_similarity_check,
)
from .similarity import verify_similarity

SCHEMA = "1"
_VERIFY_SEED = 20230817


def _fmt(x) -> float:
    """Round to 15 significant digits so reports are byte-stable."""
    return float(f"{float(x):.15g}")


def _cnum(z) -> dict:
    z = complex(z)
    return {"re": _fmt(z.real), "im": _fmt(z.imag)}


class Check:
    """One named pass/fail comparison: value <= tol, or value >= tol for
    witness-style checks (mode 'ge')."""

    def __init__(self, name: str, value: float, tol: float, mode: str = "le"):
        self.name = name
        self.value = float(value)
        self.tol = float(tol)
        self.mode = mode

    @property
    def passed(self) -> bool:
        if self.mode == "ge":
            return self.value >= self.tol
        return self.value <= self.tol

    def as_json(self) -> dict:
        return {"name": self.name, "value": _fmt(self.value),
                "tolerance": _fmt(self.tol), "mode": self.mode,
                "passed": self.passed}


def _emit(args, payload: dict, csv_header: list, csv_rows: list) -> None:
    if args.format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(csv_header)
        writer.writerows(csv_rows)
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _finish(args, payload: dict, csv_header, csv_rows, checks: list) -> int:
    payload["checks"] = [c.as_json() for c in checks]
    payload["all_passed"] = all(c.passed for c in checks)
    _emit(args, payload, csv_header, csv_rows)
    for c in checks:
        if not c.passed:
            rel = ">" if c.mode == "le" else "<"
            sys.stderr.write(
                f"first failing check: {c.name} "
                f"(value {c.value:.6g} {rel} tolerance {c.tol:.6g})\n")
            return 1
    return 0


def _params(args) -> ModelParams:
    return ModelParams(beta=args.beta, gamma=args.gamma)


# ---------------------------------------------------------------------------
# subcommands


def run_spectrum(args) -> int:
    p = _params(args)
    grid = energy_grid(p, args.m_max, args.n_max)
    blocks = block_layout(p, args.m_max, args.n_max)
    payload = {
        "schema": SCHEMA,
        "command": "spectrum",
        "beta": _fmt(p.beta),
        "gamma": _fmt(p.gamma),
        "rho": _fmt(p.rho),
        "m_max": args.m_max,
        "n_max": args.n_max,
        "entries": [{"m": m, "n": n, "energy": _fmt(e)} for m, n, e in grid],
        "blocks": [[_fmt(e) for e in row] for row in blocks],
    }
    rows = [[m, n, f"{_fmt(e):.15g}"] for m, n, e in grid]
    return _finish(args, payload, ["m", "n", "energy"], rows, [])


def run_sectors(args) -> int:
    p = _params(args)
    if args.depth % 4 or args.depth < 8:
        raise UsageError("--depth must be a multiple of 4 and at least 8 "
                         "(the convergence protocol samples depth/4 and depth/2)")
    k_lo, k_hi = args.k_range
    if k_lo > k_hi:
        raise UsageError("--k-range expects MIN <= MAX")
    checks = []
    sectors_payload = []
    csv_rows = []
    for k in range(k_lo, k_hi + 1):
        conv = converged_sector_spectrum(
            k, p, n_eigs=args.n_eigs, start_depth=args.depth // 4,
            doublings=2, tol=args.step_tol)
        errors = np.abs(conv.values - conv.targets)
        sectors_payload.append({
            "k": k,
            "depths": conv.depths,
            "history": [[_cnum(v) for v in vals] for vals in conv.history],
            "values": [_cnum(v) for v in conv.values],
            "targets": [_fmt(t) for t in conv.targets],
            "abs_errors": [_fmt(e) for e in errors],
            "max_step": _fmt(conv.max_step),
            "converged": conv.converged,
        })
        checks.append(Check(f"sector_k{k}_depth_step", conv.max_step, args.step_tol))
        checks.append(Check(f"sector_k{k}_closed_form", float(errors.max()), args.tol))
        for level in range(args.n_eigs):
            v = complex(conv.values[level])
            csv_rows.append([k, level, conv.depths[-1],
                             f"{_fmt(v.real):.15g}", f"{_fmt(v.imag):.15g}",
                             f"{_fmt(conv.targets[level]):.15g}",
                             f"{_fmt(errors[level]):.15g}"])
    payload = {
        "schema": SCHEMA,
        "command": "sectors",
        "beta": _fmt(p.beta),
        "gamma": _fmt(p.gamma),
        "depth": args.depth,
        "n_eigs": args.n_eigs,
        "sectors": sectors_payload,
    }
    header = ["k", "level", "depth", "value_re", "value_im", "target", "abs_error"]
    return _finish(args, payload, header, csv_rows, checks)


def run_biorth(args) -> int:
    p = _params(args)
    trunc = TruncationSpec(args.trunc, args.trunc)
    report = biorthogonality_matrix(p, args.m_max, args.n_max, trunc)
    checks = [
        Check("biorth_max_offdiag", report.max_offdiag, args.tol),
        Check("biorth_max_diag_error", report.max_diag_error, args.tol),
    ]
    payload = {
        "schema": SCHEMA,
        "command": "biorth",
        "beta": _fmt(p.beta),
        "gamma": _fmt(p.gamma),
        "trunc": args.trunc,
        "m_max": args.m_max,
        "n_max": args.n_max,
        "scale": _cnum(report.scale),
        "max_offdiag": _fmt(report.max_offdiag),
        "max_diag_error": _fmt(report.max_diag_error),
        "labels": [list(lbl) for lbl in report.labels],
        "gram": [[_cnum(z) for z in row] for row in report.gram],
    }
    csv_rows = []
    for row, (m, n) in enumerate(report.labels):
        for col, (q_m, q_n) in enumerate(report.labels):
            z = complex(report.gram[row, col])
            csv_rows.append([m, n, q_m, q_n,
                             f"{_fmt(z.real):.15g}", f"{_fmt(z.imag):.15g}"])
    header = ["m", "n", "p", "q", "re", "im"]
    return _finish(args, payload, header, csv_rows, checks)


def run_commutators(args) -> int:
    p = _params(args)
    trunc = TruncationSpec(args.trunc, args.trunc)
    report = commutation_report(p, trunc)
    checks = []
    for name, dev in report.items():
        tol = args.action_tol if name.startswith("[H,") else args.tol
        checks.append(Check(name, dev, tol))
    diag_dev = diagonal_form_check(p, trunc)
    checks.append(Check("diagonal_form", diag_dev, args.tol))
    payload = {
        "schema": SCHEMA,
        "command": "commutators",
        "beta": _fmt(p.beta),
        "gamma": _fmt(p.gamma),
        "trunc": args.trunc,
        "deviations": {name: _fmt(dev) for name, dev in report.items()},
        "diagonal_form": _fmt(diag_dev),
    }
    csv_rows = [[name, f"{_fmt(dev):.15g}"] for name, dev in report.items()]
    csv_rows.append(["diagonal_form", f"{_fmt(diag_dev):.15g}"])
    return _finish(args, payload, ["check", "deviation"], csv_rows, checks)


def run_emm(args) -> int:
    p = _params(args)
    matrix = model_emm_matrix(p)
    solution = model_emm_eigenpairs(p)
    closed = np.array([pair.value for pair in solution.pairs])
    numeric = eig_dense(matrix).values
    dist = multiset_distance(numeric, closed)
    pair_res = max(residual(matrix, pair.value, pair.combination.stacked)
                   for pair in solution.pairs)
    pairing_products = []
    pairing_dev = 0.0
    for i, pi in enumerate(solution.pairs):
        for j, pj in enumerate(solution.pairs):
            pairing = symplectic_pairing(pi.combination, pj.combination)
            product = (pi.value + pj.value) * pairing
            pairing_dev = max(pairing_dev, abs(product))
            pairing_products.append({"i": i, "j": j,
                                     "pairing": _cnum(pairing),
                                     "weighted": _cnum(product)})
    secular = su11_secular(p.gamma)
    secular_res = max(residual(secular.matrix, val, vec)
                      for val, vec in secular.pairs)
    checks = [
        Check("emm_eigenvalue_multiset", dist, args.tol),
        Check("emm_closed_form_residual", pair_res, 1e-12),
        Check("emm_pairing_identity", pairing_dev, 1e-12),
        Check("secular_residual", secular_res, 1e-12),
    ]
    payload = {
        "schema": SCHEMA,
        "command": "emm",
        "beta": _fmt(p.beta),
        "gamma": _fmt(p.gamma),
        "matrix": [[_fmt(x) for x in row] for row in matrix],
        "closed_values": [_cnum(v) for v in closed],
        "numeric_values": [_cnum(v) for v in numeric],
        "eigenvectors": [[_cnum(x) for x in pair.combination.stacked]
                         for pair in solution.pairs],
        "degenerate": solution.degenerate,
        "repeated_values": solution.repeated_values,
        "pairing": pairing_products,
        "secular_matrix": [[_fmt(x) for x in row] for row in secular.matrix],
        "secular_values": [_cnum(val) for val, _ in secular.pairs],
        "secular_vectors": [[_cnum(x) for x in vec] for _, vec in secular.pairs],
        "secular_degenerate": secular.degenerate,
    }
    csv_rows = [[c.name, f"{_fmt(c.value):.15g}"] for c in checks]
    return _finish(args, payload, ["check", "deviation"], csv_rows, checks)


def run_stability(args) -> int:
    if len(args.depths) < 2:
        raise UsageError("--depths needs at least two values")
    scan = hermitian_variant_scan(args.k, args.beta, args.lam, args.depths)
    checks = []
    if scan.predicted is not None:
        err = abs(scan.lowest[-1] - scan.predicted)
        checks.append(Check("stability_converged", err, args.tol))
    else:
        checks.append(Check("instability_witness", scan.final_drop,
                            args.drop, mode="ge"))
    payload = {
        "schema": SCHEMA,
        "command": "stability",
        "k": args.k,
        "beta": _fmt(args.beta),
        "lam": _fmt(args.lam),
        "pairs": [{"depth": d, "lowest": _fmt(v)}
                  for d, v in zip(scan.depths, scan.lowest)],
        "predicted": None if scan.predicted is None else _fmt(scan.predicted),
        "final_drop": _fmt(scan.final_drop),
        "bounded": scan.bounded,
    }
    csv_rows = [[d, f"{_fmt(v):.15g}"] for d, v in zip(scan.depths, scan.lowest)]
    return _finish(args, payload, ["depth", "lowest"], csv_rows, checks)


def run_theorem1(args) -> int:
    matrix = _read_matrix(args.input)
    try:
        report = verify_similarity(matrix, real_tol=args.real_tol)
    except ValueError as exc:
        sys.stderr.write(f"first failing check: precondition ({exc})\n")
        return 1
    checks = [
        Check("similarity_error", report.similarity_error, args.sim_tol),
        Check("biorth_error", report.biorth_error, args.biorth_tol),
        Check("spectrum_match", report.spectrum_match, 1e-8),
    ]
    payload = {
        "schema": SCHEMA,
        "command": "theorem1",
        "n": matrix.shape[0],
        "spectrum_real": report.spectrum_real,
        "max_imag": _fmt(report.max_imag),
        "spectrum_match": _fmt(report.spectrum_match),
        "biorth_error": _fmt(report.biorth_error),
        "similarity_error": _fmt(report.similarity_error),
        "unitarity_defect": _fmt(report.unitarity_defect),
        "transform": [[_cnum(z) for z in row] for row in report.transform],
    }
    csv_rows = [
        ["max_imag", f"{_fmt(report.max_imag):.15g}"],
        ["spectrum_match", f"{_fmt(report.spectrum_match):.15g}"],
        ["biorth_error", f"{_fmt(report.biorth_error):.15g}"],
        ["similarity_error", f"{_fmt(report.similarity_error):.15g}"],
        ["unitarity_defect", f"{_fmt(report.unitarity_defect):.15g}"],
    ]
    return _finish(args, payload, ["field", "value"], csv_rows, checks)


def _random_similarity_batch(count: int, size: int):
    """Well-conditioned real-spectrum test matrices: V D V^-1 with
    V = I + 0.25 R (spectral radius of 0.25 R below one by construction) and
    distinct diagonal values with gaps of order one."""
    rng = np.random.default_rng(_VERIFY_SEED)
    out = []
    for _ in range(count):
        r = rng.uniform(-1.0, 1.0, size=(size, size)) / np.sqrt(size)
        v = np.eye(size) + 0.25 * r
        d = np.arange(size) + 0.2 * rng.uniform(0.0, 1.0, size=size)
        m = solve_matrix(v.T, (v @ np.diag(d)).T).T
        out.append(m)
    return out


def run_verify_all(args) -> int:
    p = _params(args)
    suites = []

    def suite(name, value, tol, mode="le"):
        suites.append(Check(name, value, tol, mode))

    # equation-of-motion layer
    matrix = model_emm_matrix(p)
    solution = model_emm_eigenpairs(p)
    closed = np.array([pair.value for pair in solution.pairs])
    suite("emm_eigenvalue_multiset",
          multiset_distance(eig_dense(matrix).values, closed), 1e-10)
    suite("emm_closed_form_residual",
          max(residual(matrix, pr.value, pr.combination.stacked)
              for pr in solution.pairs), 1e-12)
    pairing_dev = max(abs((pi.value + pj.value)
                          * symplectic_pairing(pi.combination, pj.combination))
                      for pi in solution.pairs for pj in solution.pairs)
    suite("emm_pairing_identity", pairing_dev, 1e-12)
    secular = su11_secular(p.gamma)
    suite("secular_residual",
          max(residual(secular.matrix, val, vec) for val, vec in secular.pairs),
          1e-12)

    # pseudo-boson algebra at small truncation (deviations are interior-exact)
    small = TruncationSpec(8, 8)
    comm = commutation_report(p, small)
    suite("wh_commutators",
          max(v for k, v in comm.items() if not k.startswith("[H,")), 1e-10)
    suite("hamiltonian_action",
          max(v for k, v in comm.items() if k.startswith("[H,")), 1e-9)
    suite("diagonal_form", diagonal_form_check(p, small), 1e-10)

    # eigenvector families at deep truncation
    deep = TruncationSpec(args.trunc, args.trunc)
    rows = eigen_residuals(p, deep, 3, 3)
    suite("eigen_residuals", max(r["residual"] for r in rows), 1e-8)
    suite("adjoint_residuals", max(r["adjoint_residual"] for r in rows), 1e-8)
    bio = biorthogonality_matrix(p, 4, 4, deep)
    suite("biorthogonality",
          max(bio.max_offdiag, bio.max_diag_error), 1e-9)

    # similarity layer
    suite("phase_similarity", similarity_check(p, TruncationSpec(6, 6)), 1e-13)
    suite("sector_transpose_similarity",
          max(transpose_similarity_check(SectorSpec(k, 30), p)
              for k in range(-2, 3)), 1e-13)

    # sector spectra and the full-space cross-check
    step_dev = 0.0
    closed_dev = 0.0
    cross_dev = 0.0
    convs = {}
    for k in range(-3, 4):
        conv = converged_sector_spectrum(k, p, n_eigs=4,
                                         start_depth=args.depth // 4,
                                         doublings=2, tol=1e-8)
        convs[k] = conv
        step_dev = max(step_dev, conv.max_step)
        closed_dev = max(closed_dev,
                         float(np.abs(conv.values - conv.targets).max()))
    for m in range(4):
        for n in range(4):
            conv = convs[m - n]
            cross_dev = max(cross_dev,
                            abs(energy(p, m, n) - conv.values[min(m, n)]))
    suite("sector_depth_step", step_dev, 1e-8)
    suite("sector_closed_form", closed_dev, 1e-6)
    suite("sector_energy_cross_check", cross_dev, 1e-6)
    union = full_vs_sector_check(p, TruncationSpec(10, 10))
    suite("full_vs_sector_union", union.distance, 1e-8)

    # su(1,1) structure
    gen_dev = max(su11_commutation_check(su11_generators(SectorSpec(k, 30), variant))
                  for k in range(-2, 3) for variant in ("lowest", "highest"))
    suite("su11_commutators", gen_dev, 1e-10)
    tilted_dev = max(su11_commutation_check(
        pseudo_su11_generators(SectorSpec(k, 30), p.gamma))
        for k in range(-2, 3)) if p.gamma != 0 else 0.0
    suite("tilted_su11_commutators", tilted_dev, 1e-10)
    casimir_dev = 0.0
    weight_dev = 0.0
    if p.gamma != 0:
        for k in range(-2, 3):
            spec = SectorSpec(k, 30)
            tilted, plain = casimir_reduction_check(spec, p.gamma)
            casimir_dev = max(casimir_dev, tilted, plain)
            weight_dev = max(weight_dev, *lowest_weight_residuals(spec, p.gamma))
    suite("casimir_reduction", casimir_dev, 1e-9)
    suite("lowest_weight", weight_dev, 1e-8)

    # stability contrast
    bounded = hermitian_variant_scan(0, p.beta, 0.6, [30, 60])
    suite("stability_bounded",
          abs(bounded.lowest[-1] - bounded.predicted), 1e-6)
    unbounded = hermitian_variant_scan(0, p.beta, 1.2, [40, 80])
    suite("instability_witness", unbounded.final_drop, 1.0, mode="ge")

    # similarity construction on general matrices
    hand = verify_similarity(np.array([[1.0, 1.0], [0.0, 2.0]]))
    target = np.array([[1.0, -1.0], [-1.0, 2.0]])
    suite("similarity_hand_case",
          float(np.abs(hand.transform - target).max()), 1e-10)
    suite("similarity_hand_nonunitary", hand.unitarity_defect, 1.0, mode="ge")
    sim_dev = 0.0
    bio_dev = 0.0
    for m in _random_similarity_batch(5, 5):
        rep = verify_similarity(m)
        sim_dev = max(sim_dev, rep.similarity_error)
        bio_dev = max(bio_dev, rep.biorth_error)
    suite("similarity_random_batch", sim_dev, 1e-8)
    suite("similarity_random_biorth", bio_dev, 1e-10)

    payload = {
        "schema": SCHEMA,
        "command": "verify-all",
        "beta": _fmt(p.beta),
        "gamma": _fmt(p.gamma),
        "trunc": args.trunc,
        "depth": args.depth,
        "suites": [c.as_json() for c in suites],
    }
    csv_rows = [[c.name, f"{_fmt(c.value):.15g}", f"{_fmt(c.tol):.15g}",
                 "pass" if c.passed else "FAIL"] for c in suites]
    header = ["suite", "max_deviation", "tolerance", "status"]
    return _finish(args, payload, header, csv_rows, suites)


# ---------------------------------------------------------------------------
# input parsing and the argument surface


class UsageError(Exception):
    """Flag combinations that argparse cannot catch on its own."""


def _read_matrix(path: str) -> np.ndarray:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        return _parse_csv_matrix(path, text)
    if not isinstance(obj, dict) or "n" not in obj or "re" not in obj:
        raise UsageError(f'{path}: JSON matrix needs "n" and "re" fields')
    n = int(obj["n"])
    re_part = np.asarray(obj["re"], dtype=float)
    if re_part.shape != (n, n):
        raise UsageError(f'{path}: "re" must be an {n} x {n} grid')
    if "im" in obj and obj["im"] is not None:
        im_part = np.asarray(obj["im"], dtype=float)
        if im_part.shape != (n, n):
            raise UsageError(f'{path}: "im" must be an {n} x {n} grid')
    else:
        im_part = np.zeros((n, n))
    return re_part + 1j * im_part


def _parse_csv_matrix(path: str, text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    n = len(lines)
    if n == 0:
        raise UsageError(f"{path}: empty matrix input")
    out = np.zeros((n, n), dtype=complex)
    for i, line in enumerate(lines):
        try:
            tokens = [float(tok) for tok in line.split(",") if tok.strip() != ""]
        except ValueError as exc:
            raise UsageError(f"{path}: line {i + 1}: {exc}") from exc
        if len(tokens) != 2 * n:
            raise UsageError(
                f"{path}: line {i + 1} has {len(tokens)} numbers, expected "
                f"{2 * n} (re,im pairs for an {n} x {n} matrix)")
        out[i] = np.array(tokens[0::2]) + 1j * np.array(tokens[1::2])
    return out


def _add_common(sub, beta=True, gamma=True, fmt=True):
    if beta:
        sub.add_argument("--beta", type=float, default=0.5,
                         help="level-splitting parameter (default 0.5)")
    if gamma:
        sub.add_argument("--gamma", type=float, default=0.75,
                         help="coupling, must be nonnegative (default 0.75)")
    if fmt:
        sub.add_argument("--format", choices=("json", "csv"), default="json",
                         help="report format (default json)")
        sub.add_argument("--out", metavar="FILE", default=None,
                         help="write the report to FILE instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pseudoboson",
        description="Construct, diagonalize, and verify the non-self-adjoint "
                    "two-boson model in truncated Fock spaces.")
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("spectrum", help="closed-form eigenvalue grid and its "
                                          "block-diagonal layout")
    _add_common(sp)
    sp.add_argument("--m-max", type=int, default=3)
    sp.add_argument("--n-max", type=int, default=3)
    sp.set_defaults(runner=run_spectrum)

    sp = subs.add_parser("sectors", help="sector eigenvalues with depth-doubling "
                                         "convergence against the closed form")
    _add_common(sp)
    sp.add_argument("--k-range", type=int, nargs=2, default=[-2, 2],
                    metavar=("MIN", "MAX"))
    sp.add_argument("--depth", type=int, default=60,
                    help="final sector depth; depth/4 and depth/2 are sampled "
                         "on the way (default 60)")
    sp.add_argument("--n-eigs", type=int, default=3)
    sp.add_argument("--tol", type=float, default=1e-6,
                    help="closed-form agreement tolerance (default 1e-6)")
    sp.add_argument("--step-tol", type=float, default=1e-8,
                    help="depth-doubling agreement tolerance (default 1e-8)")
    sp.set_defaults(runner=run_sectors)

    sp = subs.add_parser("biorth", help="mutual Gram matrix of the two "
                                        "eigenvector families")
    _add_common(sp)
    sp.add_argument("--trunc", type=int, default=40,
                    help="occupation cutoff for both modes (default 40)")
    sp.add_argument("--m-max", type=int, default=4)
    sp.add_argument("--n-max", type=int, default=4)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.set_defaults(runner=run_biorth)

    sp = subs.add_parser("commutators", help="pseudo-boson commutation relations "
                                             "and the diagonal form of H")
    _add_common(sp)
    sp.add_argument("--trunc", type=int, default=8,
                    help="occupation cutoff (default 8; interior deviations "
                         "do not improve with depth)")
    sp.add_argument("--tol", type=float, default=1e-10,
                    help="commutator deviation tolerance (default 1e-10)")
    sp.add_argument("--action-tol", type=float, default=1e-9,
                    help="[H, ladder] deviation tolerance (default 1e-9)")
    sp.set_defaults(runner=run_commutators)

    sp = subs.add_parser("emm", help="equation-of-motion matrix, closed-form "
                                     "eigenpairs, pairing, secular problem")
    _add_common(sp)
    sp.add_argument("--tol", type=float, default=1e-10,
                    help="eigenvalue multiset tolerance (default 1e-10)")
    sp.set_defaults(runner=run_emm)

    sp = subs.add_parser("stability", help="lowest eigenvalue of the Hermitian "
                                           "cousin across depths")
    _add_common(sp, gamma=False)
    sp.add_argument("--k", type=int, default=0)
    sp.add_argument("--lam", type=float, default=0.6,
                    help="coupling of the Hermitian cousin (default 0.6)")
    sp.add_argument("--depths", type=int, nargs="+", default=[30, 60])
    sp.add_argument("--tol", type=float, default=1e-6,
                    help="convergence tolerance for |lam| < 1 (default 1e-6)")
    sp.add_argument("--drop", type=float, default=1.0,
                    help="required lowest-eigenvalue drop for the |lam| >= 1 "
                         "instability witness (default 1.0)")
    sp.set_defaults(runner=run_stability)

    sp = subs.add_parser("theorem1", help="similarity-to-adjoint construction "
                                          "for a matrix from a file")
    _add_common(sp, beta=False, gamma=False)
    sp.add_argument("--input", required=True, metavar="FILE",
                    help='JSON {"n", "re", "im"} or CSV of re,im pairs')
    sp.add_argument("--real-tol", type=float, default=1e-8)
    sp.add_argument("--sim-tol", type=float, default=1e-8)
    sp.add_argument("--biorth-tol", type=float, default=1e-10)
    sp.set_defaults(runner=run_theorem1)

    sp = subs.add_parser("verify-all", help="every invariant suite with its "
                                            "max deviation")
    _add_common(sp)
    sp.add_argument("--trunc", type=int, default=40)
    sp.add_argument("--depth", type=int, default=60)
    sp.set_defaults(runner=run_verify_all)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.runner(args)
    except UsageError as exc:
        sys.stderr.write(f"{parser.prog}: error: {exc}\n")
        return 2
    except ValueError as exc:
        # Parameter combinations the library rejects (negative coupling,
        # truncation too shallow, ...) are usage errors, not check failures.
        sys.stderr.write(f"{parser.prog}: error: {exc}\n")
        return 2
    except SystemExit as exc:
        # argparse already wrote its message; fold its exit into the return
        # value so callers of main() never see the exception.
        return exc.code if isinstance(exc.code, int) else 2


if __name__ == "__main__":
    sys.exit(main())
