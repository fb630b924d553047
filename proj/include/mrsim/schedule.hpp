#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mrsim/params.hpp"

namespace mrsim {

/// One sensor contact: the apparatus couples to the target over
/// [contact_start, contact_end] and its output is read at contact_end.
struct Window {
    std::string label;
    double contact_start;
    double contact_end;
};

enum class ScheduleMode { FourPoint, EightPoint, Sequential };

/// Ordered, non-overlapping contact windows of equal duration tau.
class MeasurementSchedule {
  public:
    MeasurementSchedule(ScheduleMode mode, std::vector<Window> windows, double tau);

    /// Four windows i, j, k, l at phase delays d (first contact starts at 0).
    static MeasurementSchedule four_point(const PhaseDelays& d, const ModelParams& p);
    /// The four main windows plus a twin x+ abutting each window x.
    /// Requires every delay >= 2 omega tau so windows never overlap.
    static MeasurementSchedule eight_point(const PhaseDelays& d, const ModelParams& p);
    /// The four main windows plus twins only for the labels listed in
    /// `twins` ("i","j","k","l"); matches the per-correlation schedules of
    /// the four-point analysis, where a twin contact exists only when the
    /// correlation uses it.
    static MeasurementSchedule four_point_with_twins(const PhaseDelays& d, const ModelParams& p,
                                                     const std::vector<std::string>& twins);
    /// count abutting windows "1".."count" at t_n = n tau.
    static MeasurementSchedule sequential(std::size_t count, const ModelParams& p);

    ScheduleMode mode() const { return mode_; }
    const std::vector<Window>& windows() const { return windows_; }
    std::size_t size() const { return windows_.size(); }
    double tau() const { return tau_; }
    /// index of a label; throws domain_error if unknown
    std::size_t index_of(const std::string& label) const;
    bool has_label(const std::string& label) const;
    std::vector<std::string> labels() const;

    /// FNV-1a over mode, tau and window times; used in dataset headers.
    std::uint64_t hash() const;

  private:
    ScheduleMode mode_;
    std::vector<Window> windows_;
    double tau_;
};

/// Labels selected for an order-L correlation, L = labels.size() >= 1.
struct CorrelationRequest {
    std::vector<std::string> labels;
};

}  // namespace mrsim
