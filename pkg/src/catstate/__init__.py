"""Simulation of the two-qubit measurement state, its local mixtures, and the
two-photon interferometry that separates it from a fully collapsed mixture."""

from .qlinalg import (
    ConvergenceError,
    DensityOperator,
    InvalidDensityError,
    NotHermitianError,
    Spectrum,
    StateVector,
    apply,
    dagger,
    eig_hermitian,
    expectation,
    kron,
    partial_trace,
    trace,
    vn_entropy,
)
from .mstate import (
    CoherenceWitness,
    EnsembleCounts,
    SuperpositionParams,
    build_ms,
    coherence_witness,
    collapsed_mixture,
    degeneracy_flag,
    density,
    measurement_unitary,
    reduced_pair,
    sample_outcomes,
    superposition,
)
from .rtm import (
    CoincidenceCounts,
    FringeMap,
    JointDistribution,
    RTMConfig,
    beam_splitter,
    coincidence_prob,
    fringe_to_phase,
    joint_probs,
    marginals,
    no_signaling_scan,
    phase_shifter,
    rtm_state,
    simulate_counts,
)
from .bell import CHSHSettings, MeasurementSetting, bloch_observable, chsh, correlator, max_chsh
from .whichpath import SlitGeometry, WhichPathOverlap, screen_intensity, visibility

__version__ = "0.1.0"
