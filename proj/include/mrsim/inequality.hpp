#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mrsim/params.hpp"
#include "mrsim/trajectory_mc.hpp"

namespace mrsim {

enum class SourceTag { Exact, Mc, ClosedForm };
enum class Verdict { Violation, NoViolation, Inconclusive };

std::string to_string(Verdict v);

/// Correlation estimates keyed by the label tuple they correlate. When the
/// estimates come from one Monte Carlo dataset, joint bootstrap replicates
/// can be attached so downstream errors keep the cross-covariances.
class CorrelationSet {
  public:
    explicit CorrelationSet(SourceTag tag) : tag_(tag) {}

    void set(const std::vector<std::string>& labels, double value, double std_error = 0.0);
    void set_replicates(const std::vector<std::string>& labels, std::vector<double> reps);

    bool has(const std::vector<std::string>& labels) const;
    double value(const std::vector<std::string>& labels) const;
    double std_error(const std::vector<std::string>& labels) const;
    /// nullptr when no replicates were attached for this tuple
    const std::vector<double>* replicates(const std::vector<std::string>& labels) const;

    SourceTag tag() const { return tag_; }
    std::size_t size() const { return entries_.size(); }

    /// ingest every estimate (and its replicate row) of an estimation result
    static CorrelationSet from_estimation(const EstimationResult& res,
                                          SourceTag tag = SourceTag::Mc);

  private:
    struct Entry {
        double value;
        double std_error;
        std::optional<std::vector<double>> reps;
    };
    const Entry& at(const std::vector<std::string>& labels) const;
    SourceTag tag_;
    std::map<std::vector<std::string>, Entry> entries_;
};

struct TestStatistics {
    double n = 0.0, d = 0.0, v = 0.0;
    double a_term = 0.0, b_term = 0.0;
    double dn = 0.0, dd = 0.0, dv = 0.0;
    double slope_n = 0.0, slope_d = 0.0;
    double scaling_tau_min = 0.0, scaling_tau_max = 0.0;
    bool slopes_set = false;
    bool d_error_unreliable = false;  // D below 10x its own uncertainty
    bool ab_negative = false;         // A + 2B < 0 (possible only via noise)
    Verdict verdict = Verdict::Inconclusive;

    /// flat JSON record with keys n,d,v,a_term,b_term,dn,dd,dv,slope_n,slope_d,verdict
    std::string to_json() const;
};

struct ValueError {
    double value;
    double std_error;
};

/// N = |C_ij + C_jk + C_il - C_kl|; error by quadrature over the four pairs.
ValueError compute_n(const CorrelationSet& c);

struct DResult {
    double value = 0.0;
    double std_error = 0.0;
    double a_term = 0.0;
    double b_term = 0.0;
    bool error_unreliable = false;
    bool ab_negative = false;
};
/// D = sqrt|A + 2B|; first-order error dD = d(A+2B) / (2 D).
DResult compute_d(const CorrelationSet& c);

/// N, D, V with propagated errors (no slopes / verdict yet). Uses the joint
/// bootstrap replicates for dV when every required tuple carries them;
/// otherwise falls back to independent first-order propagation.
TestStatistics compute_v(const CorrelationSet& c);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;  // in ln-ln coordinates
    double residual = 0.0;   // max |ln(signal) - fit|
    std::size_t used_points = 0;
};
/// Least-squares line through (ln tau, ln signal); non-positive signals are
/// dropped, and fewer than 3 surviving points is an error.
ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points);

/// Violation requires the signal to clear the bound by k_sigma errors AND
/// both N, D to scale as tau^2 within slope_tol.
Verdict verdict(const TestStatistics& stats, double slope_tol = 0.1, double k_sigma = 5.0);

/// Photon-shot-noise budget. Units: rates in 1/us, times in us.
struct NoiseBudget {
    double gamma;    // photon emission rate
    double eta;      // collection efficiency
    double t_total;  // acquisition time
    double r_target; // target significance in standard deviations

    NoiseBudget(double gamma_, double eta_, double t_total_, double r_target_);
    /// photon count rate chi_ph = eta * gamma
    double chi_ph() const { return eta * gamma; }
};

struct NoisePrediction {
    double dc2 = 0.0;       // per-pair-correlation error (exact prefactor)
    double dc4 = 0.0;       // per-quadruple-correlation error (exact prefactor)
    double dn = 0.0;        // quadrature over the 4 pairs
    double dd = 0.0;        // d(A+2B)/(2D) with exact-prefactor dc4
    double dv_propagated = 0.0;  // first-order propagation, no short-tau cut
    double dv_full = 0.0;        // closed form with the short-tau dc's
    double dv_dominant = 0.0;    // leading term of dv_full
    double shots = 0.0;          // M = T / tau
};
/// Analytic shot-noise propagation onto V for a perfect-contrast Poisson
/// readout, evaluated at the supplied statistics (D and V).
NoisePrediction noise_sigma_v(const NoiseBudget& budget, const ModelParams& p,
                              const TestStatistics& stats);

/// Acquisition time needed to clear the bound by r standard deviations.
/// Computed through two equivalent algebraic forms which are cross-checked
/// to 1e-10 relative; returns time in us.
double required_acquisition_time(const NoiseBudget& budget, const ModelParams& p, double r);

}  // namespace mrsim
