#pragma once

#include <vector>

#include "mrsim/params.hpp"
#include "mrsim/rng.hpp"
#include "mrsim/schedule.hpp"

namespace mrsim {

/// Orientation of the unit classical angular momentum of the target.
struct ClassicalSpinState {
    double theta;  // polar angle in [0, pi]
    double phi;    // azimuth in [0, 2 pi)
};

/// Uniform draw on the sphere: cos(theta) uniform on [-1,1], phi uniform.
ClassicalSpinState sample_uniform_spin(Substream& rng);

/// Phase picked up by the apparatus over the contact ending at t:
/// Phi(t) = A_perp * integral_{t-tau}^{t} I_x(u) du (closed form).
double phase_accumulated(const ClassicalSpinState& s, double t, const ModelParams& p);

/// Recorded observable S_y(t) = sin(Phi(t)).
double classical_output(const ClassicalSpinState& s, double t, const ModelParams& p);

/// WSL pair correlation (A_perp^2 tau^2 / 3) cos(t_delta).
double classical_wsl_corr2(double t_delta, const ModelParams& p);

/// WSL fourth-order correlation, the three-pairing cosine form / 15.
double classical_wsl_corr4(const PhaseDelays& d, const ModelParams& p);

/// WSL limit of V(tau) for the classical model (closed form).
/// Throws domain_error when the denominator argument |2 + a + b| vanishes.
double classical_v_limit(const PhaseDelays& d);

/// N, D, V assembled from the classical WSL closed forms.
struct ClassicalSignals {
    double n = 0.0;
    double d = 0.0;
    double v = 0.0;
    double a_term = 0.0;
    double b_term = 0.0;
};
ClassicalSignals classical_wsl_signals(const PhaseDelays& d, const ModelParams& p);

/// Grid search of classical_v_limit over [0, 2pi)^3 with local refinement.
struct ClassicalScanResult {
    PhaseDelays argmax{0.0, 0.0, 0.0};
    double grid_max = 0.0;     // best value on the raw grid
    double refined_max = 0.0;  // after local refinement
    std::size_t skipped_degenerate = 0;
};
ClassicalScanResult classical_scan_max(std::size_t samples_per_axis);

/// Per-shot raw outputs of the classical model at each window end time.
/// Shots are independent substreams of (seed, shot index).
std::vector<double> simulate_classical(const MeasurementSchedule& sched, const ModelParams& p,
                                       std::size_t shots, std::uint64_t seed,
                                       unsigned threads = 0);

}  // namespace mrsim
