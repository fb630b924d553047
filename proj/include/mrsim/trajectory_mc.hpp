#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mrsim/params.hpp"
#include "mrsim/rng.hpp"
#include "mrsim/schedule.hpp"

namespace mrsim {

/// Poisson photon readout: mean n_plus photons when the sensor reads +,
/// n_minus when it reads -.
struct ReadoutModel {
    double n_plus;
    double n_minus;

    ReadoutModel(double np, double nm) : n_plus(np), n_minus(nm) {
        if (!(n_plus >= 0.0) || !(n_minus >= 0.0))
            throw std::domain_error("ReadoutModel: negative photon mean");
        if (n_plus == n_minus)
            throw std::domain_error("ReadoutModel: zero contrast (n_plus == n_minus)");
    }
    /// perfect contrast: n_plus = chi_ph * tau, n_minus = 0
    static ReadoutModel perfect_contrast(double chi_ph, double tau) {
        return {chi_ph * tau, 0.0};
    }
    double half_contrast() const { return (n_plus - n_minus) / 2.0; }
    /// single-shot photon-count variance Delta^2 (unpolarized target)
    double shot_variance() const {
        const double diff = n_plus - n_minus, sum = n_plus + n_minus;
        return (diff * diff + 2.0 * sum) / 4.0;
    }
};

enum class DatasetKind : std::uint8_t { Spin = 0, Photon = 1, Analog = 2 };

/// Shot-by-shot raw measurement records: shots x windows. Spin datasets hold
/// +-1, photon datasets non-negative counts, analog datasets real outputs.
class ShotDataset {
  public:
    ShotDataset(DatasetKind kind, std::size_t shots, std::vector<std::string> labels,
                std::uint64_t seed, std::uint64_t schedule_hash);

    DatasetKind kind() const { return kind_; }
    std::size_t shots() const { return shots_; }
    std::size_t windows() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t schedule_hash() const { return schedule_hash_; }

    double value(std::size_t shot, std::size_t window) const {
        const std::size_t idx = shot * windows() + window;
        return kind_ == DatasetKind::Analog ? dvals_[idx] : double(ivals_[idx]);
    }
    std::int16_t& ival(std::size_t shot, std::size_t window) {
        return ivals_[shot * windows() + window];
    }
    double& dval(std::size_t shot, std::size_t window) { return dvals_[shot * windows() + window]; }

    /// restrict to the first `shots` rows (cheap copy of the prefix)
    ShotDataset prefix(std::size_t shots) const;

    void save_binary(const std::string& path) const;
    static ShotDataset load_binary(const std::string& path);
    void write_csv(std::ostream& os) const;

    std::size_t index_of(const std::string& label) const;

  private:
    DatasetKind kind_;
    std::size_t shots_;
    std::vector<std::string> labels_;
    std::uint64_t seed_;
    std::uint64_t schedule_hash_;
    std::vector<std::int16_t> ivals_;  // Spin / Photon
    std::vector<double> dvals_;        // Analog
};

/// Quantum trajectory simulation of the full schedule: Kraus branch per
/// window, free precession over the gaps, maximally mixed initial state.
ShotDataset simulate_quantum(const MeasurementSchedule& sched, const ModelParams& p,
                             std::size_t shots, std::uint64_t seed, unsigned threads = 0);

/// Classical-model dataset over the same schedule (analog outputs).
ShotDataset simulate_classical_dataset(const MeasurementSchedule& sched, const ModelParams& p,
                                       std::size_t shots, std::uint64_t seed,
                                       unsigned threads = 0);

/// Replace each +-1 by a Poisson photon count with the matching mean.
ShotDataset attach_photon_readout(const ShotDataset& spins, const ReadoutModel& model,
                                  std::uint64_t seed);

/// Correlation of raw data with in-sample mean subtraction:
///   mean over shots of prod_m (R_{n_m} - mean(R_{n_m})).
struct CorrelationEstimate {
    std::vector<std::string> labels;
    double value = 0.0;
    double std_error = 0.0;
};

struct EstimationResult {
    std::vector<CorrelationEstimate> estimates;
    /// replicates[t][r]: bootstrap replicate r of tuple t (joint across
    /// tuples, so downstream error propagation keeps cross-covariances).
    std::vector<std::vector<double>> replicates;
};

/// Bootstrap over shots (with replacement). Large datasets are resampled in
/// contiguous equal blocks (shot-level when shots <= block budget); shots
/// are iid so the block SE estimate is the same in expectation.
EstimationResult estimate_correlations(const ShotDataset& ds,
                                       const std::vector<CorrelationRequest>& reqs,
                                       std::size_t resamples, std::uint64_t resample_seed);

/// Sequential chain of `count` abutting windows at t_n = n tau.
ShotDataset sequential_run(std::size_t count, const ModelParams& p, std::size_t shots,
                           std::uint64_t seed, unsigned threads = 0);

/// Combine p_bin consecutive outputs into one value per bin and estimate the
/// correlation of the given non-overlapping bin tuples.
EstimationResult binned_correlations(const ShotDataset& ds, std::size_t p_bin,
                                     const std::vector<std::vector<std::size_t>>& bin_tuples,
                                     std::size_t resamples, std::uint64_t resample_seed);

}  // namespace mrsim
