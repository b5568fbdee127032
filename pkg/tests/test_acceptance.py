"""Acceptance gate: ten criteria, each with its tolerance and runtime limit.

Every test prints one ``PASS``/``FAIL`` line, visible even under captured output.
"""

import math
import time

import numpy as np
import pytest

from catstate import bell, cli, rtm, whichpath
from catstate import mstate as ms
from catstate import qlinalg as ql
from catstate.mstate import SuperpositionParams as SP
from catstate.rtm import FringeMap, RTMConfig

from oracles import binary_entropy, random_unitary

GRID = [(a, f) for a in ms.ALPHA_GRID for f in ms.PHI_GRID]


def maxdiff(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


@pytest.fixture
def gate(capsys):
    def run(number, title, limit, body):
        start = time.perf_counter()
        error = None
        try:
            body()
        except AssertionError as exc:
            error = exc
        elapsed = time.perf_counter() - start
        if error is None and elapsed >= limit:
            error = AssertionError(f"runtime {elapsed:.2f}s exceeds {limit}s")
        status = "PASS" if error is None else "FAIL"
        with capsys.disabled():
            print(f"\n{status} criterion {number}: {title} ({elapsed:.2f}s, limit {limit}s)")
        if error is not None:
            raise error

    return run


def test_criterion_01_coincidence_law(gate):
    def body():
        for phi in np.linspace(0, 2 * math.pi, 360, endpoint=False):
            assert abs(rtm.coincidence_prob(phi) - (1 + math.cos(phi)) / 2) < 1e-12
        n = 100_000
        for i, phi in enumerate(np.linspace(0, 2 * math.pi, 8, endpoint=False)):
            p = (1 + math.cos(phi)) / 2
            frac = rtm.simulate_counts(RTMConfig(phi, 0.0), n, 1000 + i).coincidence_fraction
            assert abs(frac - p) <= 4 * math.sqrt(p * (1 - p) / n) + 1e-12

    gate(1, "coincidence law", 5, body)


def test_criterion_02_no_signaling(gate):
    def body():
        grid_s = np.linspace(0, 2 * math.pi, 64, endpoint=False)
        grid_a = np.linspace(0, 2 * math.pi, 8, endpoint=False)
        for ps in grid_s:
            for pa in grid_a:
                v = rtm.rtm_state(RTMConfig(ps, pa))
                assert maxdiff(rtm.marginals(v, "S"), [0.5, 0.5]) < 1e-12
                assert maxdiff(rtm.marginals(v, "A"), [0.5, 0.5]) < 1e-12
        for pa in grid_a:
            assert rtm.no_signaling_scan(grid_s, pa, "S") < 1e-12
        for ps in grid_s:
            assert rtm.no_signaling_scan(grid_a, ps, "A") < 1e-12

    gate(2, "no-signaling marginals", 1, body)


def test_criterion_03_reduced_state_theorem(gate):
    def body():
        for a, f in GRID:
            expected = np.diag([math.cos(a) ** 2, math.sin(a) ** 2])
            for rho in ms.reduced_pair(SP(a, f)):
                assert maxdiff(rho.matrix, expected) < 1e-12
                w = ms.coherence_witness(rho)
                assert abs(w.q) < 1e-12 and abs(w.p) < 1e-12

    gate(3, "reduced operators diagonal, phase-free, witness zero", 1, body)


def test_criterion_04_converse_witness(gate):
    def body():
        rng = np.random.default_rng(2024)
        checked = 0
        while checked < 1000:
            z = rng.normal(size=2) + 1j * rng.normal(size=2)
            z /= np.linalg.norm(z)
            if np.min(np.abs(z)) < 0.05:
                continue
            w = ms.coherence_witness(ms.density(ql.StateVector(z)))
            assert max(abs(w.q), abs(w.p)) > 1e-3
            checked += 1

    gate(4, "witness detects every superposition", 1, body)


def test_criterion_05_ms_versus_mixture(gate):
    def body():
        for a, f in GRID:
            mix = ms.collapsed_mixture(SP(a, f))
            for keep, r in zip("SA", ms.reduced_pair(SP(a, f))):
                assert maxdiff(ql.partial_trace(mix, keep).matrix, r.matrix) < 1e-12
        target = 2 * math.sqrt(2)
        for phi in (0.0, math.pi / 2, math.pi):
            s = bell.max_chsh(ms.density(ms.build_ms(SP(math.pi / 4, phi))))
            assert s >= 2.82 and abs(s - target) < 1e-3
        for alpha in (math.pi / 8, math.pi / 4, 3 * math.pi / 8):
            assert bell.max_chsh(ms.collapsed_mixture(SP(alpha))) <= 2 + 1e-9

    gate(5, "MS violates CHSH, collapsed mixture does not", 60, body)


def test_criterion_06_entropy(gate):
    def body():
        for a, f in GRID:
            p = SP(a, f)
            assert abs(ql.vn_entropy(ms.density(ms.build_ms(p)))) < 1e-10
            h = binary_entropy(math.cos(a) ** 2)
            for rho in ms.reduced_pair(p):
                assert abs(ql.vn_entropy(rho) - h) < 1e-10
        rng = np.random.default_rng(6)
        rho = ms.collapsed_mixture(SP(math.pi / 5)).matrix
        base = ql.vn_entropy(rho)
        pure = ms.density(ms.build_ms(SP(math.pi / 5, 1.0))).matrix
        for _ in range(50):
            u = random_unitary(rng, 4)
            assert abs(ql.vn_entropy(u @ rho @ u.conj().T) - base) < 1e-10
            assert abs(ql.vn_entropy(u @ pure @ u.conj().T)) < 1e-10

    gate(6, "entropy zero globally, binary locally, unitarily invariant", 5, body)


def test_criterion_07_born_sampling(gate, tmp_path):
    def body():
        n = 1_000_000
        for k, alpha in enumerate((math.pi / 6, math.pi / 4, math.pi / 3)):
            p = math.cos(alpha) ** 2
            frac = ms.sample_outcomes(SP(alpha), n, 42).fraction_outcome1
            assert abs(frac - p) <= 4 * math.sqrt(p * (1 - p) / n)
            outs = [tmp_path / f"{k}-{r}.csv" for r in range(2)]
            for out in outs:
                assert cli.main(["cat", "--alpha", repr(alpha), "--trials", str(n), "-o", str(out)]) == 0
            assert outs[0].read_bytes() == outs[1].read_bytes()

    gate(7, "Born sampling within 4 sigma, byte-identical reruns", 5, body)


def test_criterion_08_measurement_unitary(gate):
    def body():
        u = ms.measurement_unitary()
        assert maxdiff(u.conj().T @ u, np.eye(4)) < 1e-12
        for a, f in GRID:
            p = SP(a, f)
            out = ql.apply(u, ql.kron(ms.superposition(p), ms.APPARATUS_READY))
            assert maxdiff(out.amplitudes, ms.build_ms(p).amplitudes) < 1e-12

    gate(8, "measurement unitary builds MS", 1, body)


def test_criterion_09_which_path_visibility(gate):
    def body():
        geom = whichpath.SlitGeometry.central_fringes()
        for k in range(11):
            mag = k / 10
            i = whichpath.screen_intensity(geom, mag * np.exp(0.37j))
            assert abs(whichpath.visibility(i) - mag) < 1e-6
        flat = whichpath.screen_intensity(geom, 0.0)
        mean = 0.5 * (whichpath.single_slit_intensity(geom, 1) + whichpath.single_slit_intensity(geom, 2))
        assert maxdiff(flat, mean) < 1e-12

    gate(9, "visibility equals overlap magnitude", 5, body)


def test_criterion_10_fringe_map(gate):
    def body():
        for L in (1e-6, 2.5e-3, 1.0):
            for delta, expected in ((0, 1), (L, 1), (2 * L, 1), (L / 2, 0), (1.5 * L, 0)):
                phi = rtm.fringe_to_phase(FringeMap(L, delta))
                assert abs(rtm.coincidence_prob(phi) - expected) < 1e-12

    gate(10, "fringe displacement to coincidence", 1, body)
