#pragma once

#include <utility>
#include <vector>

#include "mrsim/mat2.hpp"
#include "mrsim/params.hpp"
#include "mrsim/schedule.hpp"

namespace mrsim {

/// Conditional contact evolutions U+- = exp(-i phi n+- . I),
/// n+- = cos(theta) e_z +- sin(theta) e_x.
std::pair<Mat2, Mat2> interaction_unitaries(const ModelParams& p);

/// Kraus operators M+- = (U+ -+ i U-)/2 of one weak measurement.
std::pair<Mat2, Mat2> kraus_operators(const ModelParams& p);

/// Sign-weighted readout channel: K rho = (1/2i)[U- rho U+^dag - h.c.].
Mat2 superop_k(const Mat2& rho, const ModelParams& p);

/// Outcome-averaged channel: M rho = (1/2)[U+ rho U+^dag + U- rho U-^dag].
Mat2 superop_m(const Mat2& rho, const ModelParams& p);

/// Free precession: exp(-i omega t Iz) rho exp(+i omega t Iz).
Mat2 free_evolution(const Mat2& rho, double t, const ModelParams& p);
DensityMatrix free_evolution(const DensityMatrix& rho, double t, const ModelParams& p);

/// Exact finite-tau correlation of the selected window outputs: K applied at
/// selected windows, M at the others, free evolution over the gaps, starting
/// from the maximally mixed state.
double exact_correlation(const MeasurementSchedule& sched, const CorrelationRequest& req,
                         const ModelParams& p);

/// Leading WSL term of the pair correlation: A_perp^2 tau^2 cos(t_delta).
double wsl_corr2(double t_delta, const ModelParams& p);

/// WSL limit of V(tau) for the quantum model (closed form).
/// Throws domain_error at 0/0 points where the denominator vanishes.
double wsl_v_limit_quantum(const PhaseDelays& d);

/// (N - D) / (A_perp^2 tau^2) in the WSL closed form; its maximum picks the
/// robust working point of the protocol.
double wsl_margin_quantum(const PhaseDelays& d);

/// Exactly computed N, D, V at finite tau.
struct ExactSignals {
    double n = 0.0;
    double d = 0.0;
    double v = 0.0;
    double a_term = 0.0;
    double b_term = 0.0;
    std::array<double, 4> pairs{};       // C_ij, C_jk, C_il, C_kl
};

/// Which schedule the 12 correlations entering N and D are evaluated on.
enum class ExactConvention {
    PerCorrelation,  // four main windows + twins only where the tuple uses them
    EightPoint,      // all eight windows in every run (one-dataset experiment)
};

ExactSignals exact_signals(const PhaseDelays& d, const ModelParams& p,
                           ExactConvention conv = ExactConvention::PerCorrelation);

/// The 4 pair and 8 quadruple label tuples entering N(tau) and D(tau).
const std::vector<std::vector<std::string>>& nd_pair_tuples();
const std::vector<std::vector<std::string>>& nd_quad_tuples();

/// Grid scan over [0, 2pi)^3 of the quantum WSL limit.
struct GridPoint {
    PhaseDelays delays;
    double value;
};
std::vector<GridPoint> scan_violation_region(std::size_t samples_per_axis,
                                             double threshold = 1.0);

/// Argmax of the WSL margin (N - D)/(A_perp^2 tau^2) over the delay cube,
/// grid search plus local refinement.
std::pair<PhaseDelays, double> max_violation_margin(std::size_t samples_per_axis);

}  // namespace mrsim
