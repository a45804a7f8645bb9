"""Exit criteria for the package, one test per criterion.

Run alone with ``pytest tests/test_acceptance.py``; the terminal summary
lists one PASS/FAIL line per criterion.
"""
import subprocess
import sys

import numpy as np
import pytest

from reddyn.correlations import (
    decompose,
    delta_rho,
    matrix_element_form,
    random_correlated_state,
    random_coupling_unitary,
    random_unitary,
    theorem_trial,
)
from reddyn.cp import (
    KrausSet,
    choi,
    correlated_embedding,
    identity_map,
    induced_map,
    is_cp,
    kraus_from_choi,
    transpose_map,
)
from reddyn.dynamics import AmplitudePair, cnot_hamiltonian, compare_cases, initial_state, propagator, reduced_trajectory
from reddyn.linalg import I2, SIGMA_Z, tensor, trace_distance

from conftest import random_complex, report_criterion

R = 1 / np.sqrt(2)
H = cnot_hamiltonian()
HALF_PI = np.pi / 2
GRID = np.linspace(0, 2 * np.pi, 101)
UP = 0.5 * (I2 + SIGMA_Z)
CNOT_CHOI_MIN = (1 - np.sqrt(2)) / 2  # -0.20710678118654757, oracle run + closed form


def test_criterion_1_classical_case_reproduced():
    worst = 0.0
    for alpha in np.linspace(0, 1, 21):
        traj = reduced_trajectory(H, initial_state("classical", AmplitudePair.real(alpha)), [HALF_PI])
        worst = max(worst, trace_distance(traj.reduced_states[0], UP))
    ok = worst < 1e-10
    report_criterion(1, ok, f"max trace distance to (I+Z)/2 over 21 alphas = {worst:.2e} (< 1e-10)")
    assert ok


def test_criterion_2_correlated_claim_refuted():
    amps = AmplitudePair(R, R)
    rho = reduced_trajectory(H, initial_state("entangled", amps), [HALF_PI]).reduced_states[0]
    claimed = 0.5 * (I2 + (abs(amps.alpha) ** 2 - abs(amps.beta) ** 2) * SIGMA_Z)
    gap = trace_distance(rho, claimed)
    zero_gap = max(row[1] for row in compare_cases(H, AmplitudePair(0.0, 1.0), GRID))
    ok = abs(gap - 0.5) <= 1e-10 and zero_gap < 1e-10
    report_criterion(2, ok, f"distance to claimed I/2 = {gap:.12f} (0.5 +- 1e-10); "
                            f"alpha=0 max case gap over grid = {zero_gap:.2e}")
    assert ok


def test_criterion_3_diagonal_invariance():
    rng = np.random.default_rng(3)
    pairs = [AmplitudePair(R, R)]
    for _ in range(5):
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v /= np.linalg.norm(v)
        pairs.append(AmplitudePair(v[0], v[1]))
    worst = max(row[2] for amps in pairs for row in compare_cases(H, amps, GRID))
    ok = worst < 1e-10
    report_criterion(3, ok, f"max joint diagonal gap, 6 amplitude pairs x 101 times = {worst:.2e} (< 1e-10)")
    assert ok


def test_criterion_4_coherence_sensitivity():
    best = max(row[3] for row in compare_cases(H, AmplitudePair(R, R), GRID))
    ok = best > 0.1
    report_criterion(4, ok, f"max joint coherence gap on grid = {best:.4f} (> 0.1)")
    assert ok


def test_criterion_5_theorem_trials():
    worst = {}
    for dims in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        worst[dims] = max(theorem_trial(seed, *dims)[0] for seed in range(1000))
    ok = max(worst.values()) < 1e-10
    detail = ", ".join(f"{a}x{b}: {v:.1e}" for (a, b), v in worst.items())
    report_criterion(5, ok, f"max |delta_rho|_F over 1000 trials each: {detail} (< 1e-10)")
    assert ok


def test_criterion_6_trace_identity_paths():
    rng = np.random.default_rng(6)
    worst = 0.0
    for k in range(200):
        d_a, d_b = [(2, 2), (2, 3), (3, 2), (3, 3)][k % 4]
        dec = decompose(random_correlated_state(d_a, d_b, rng))
        u = random_coupling_unitary(d_a, d_b, rng)
        d = delta_rho(u, dec)
        for a in range(d_a):
            for b in range(d_a):
                worst = max(worst, abs(matrix_element_form(u, dec, a, b) - d[a, b]))
    ok = worst <= 1e-12
    report_criterion(6, ok, f"max entrywise path difference over 200 pairs = {worst:.2e} (<= 1e-12)")
    assert ok


def _random_kraus(d_in, d_out, n, rng):
    v = np.linalg.qr(random_complex(d_out * n, rng)[:, :d_in])[0]
    return KrausSet([v[k * d_out:(k + 1) * d_out, :] for k in range(n)])


def test_criterion_7_cp_machinery():
    checks = []
    for d in (2, 3):
        c = choi(identity_map(d)).matrix
        checks.append(np.linalg.matrix_rank(c, tol=1e-10) == 1 and abs(np.trace(c) - d) < 1e-12)
    _, lowest = is_cp(choi(transpose_map(2)))
    checks.append(abs(lowest + 1.0) <= 1e-10)
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(50):
        d_in, d_out = rng.integers(1, 4, size=2)
        n = int(rng.integers(1, d_in * d_out + 1))
        m = _random_kraus(int(d_in), int(d_out), n, rng).to_map()
        back = kraus_from_choi(choi(m)).to_map()
        worst = max(worst, np.abs(back.images - m.images).max())
    checks.append(worst <= 1e-10)
    ok = all(checks)
    report_criterion(7, ok, f"identity Choi rank 1 / trace d; transpose min eig = {lowest:+.12f}; "
                            f"round-trip max error over 50 maps = {worst:.2e}")
    assert ok


def test_criterion_8_map_level_theorem():
    rng = np.random.default_rng(8)
    worst_eig, kraus_counts = np.inf, set()
    for k in range(100):
        d_b = 2 + k % 2
        dec = decompose(random_correlated_state(2, d_b, rng))
        e = correlated_embedding(dec.corr_op, dec.rho_B)
        u = tensor(random_unitary(2, rng), random_unitary(d_b, rng))
        c = choi(induced_map(e, u))
        worst_eig = min(worst_eig, is_cp(c)[1])
        kraus_counts.add(len(kraus_from_choi(c)))
    e = correlated_embedding(0.25 * tensor(SIGMA_Z, SIGMA_Z), I2 / 2)
    cp, cnot_min = is_cp(choi(induced_map(e, propagator(H, HALF_PI))))
    ok = (worst_eig >= -1e-10 and kraus_counts == {1} and not cp and cnot_min < -1e-6
          and abs(cnot_min - CNOT_CHOI_MIN) < 1e-12)
    report_criterion(8, ok, f"factorizable: min Choi eig = {worst_eig:.1e}, Kraus counts {sorted(kraus_counts)}; "
                            f"C-NOT correlated min Choi eig = {cnot_min:.12f} (frozen {CNOT_CHOI_MIN:.12f})")
    assert ok


@pytest.mark.parametrize("scenario", ["reproduce", "trajectory", "theorem", "cp-report"])
def test_criterion_9_cli_determinism(scenario, tmp_path):
    outputs = []
    for name in ("first", "second"):
        out = tmp_path / name
        proc = subprocess.run(
            [sys.executable, "-m", "reddyn", scenario, "--trials", "200", "--steps", "50",
             "--seed", "9", "--dims", "2x3", "--out", str(out)],
            capture_output=True, check=False)
        outputs.append((proc.returncode, out.read_bytes(), proc.stdout.replace(str(out).encode(), b"")))
    ok = outputs[0] == outputs[1] and outputs[0][0] == 0
    report_criterion(9, ok, f"{scenario}: two runs byte-identical ({len(outputs[0][1])} bytes), exit {outputs[0][0]}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
