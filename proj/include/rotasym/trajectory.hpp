#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rotasym/field.hpp"

namespace rotasym {

// Fixed metric registry: the column order of diagnostics.csv.
enum class Metric {
  energy,
  dissipation,
  energy_budget,
  kernel_residual,
  alignment_error,
  coupling_pairing,
  weak_form_residual,
  heat_identity_gap,
  oscillation_residual,
  commutator,
  substeps,
  count_
};
constexpr std::size_t kMetricCount = std::size_t(Metric::count_);
const std::array<std::string, kMetricCount>& metric_names();

struct DiagnosticRecord {
  double time = 0.0;
  std::array<double, kMetricCount> values;

  DiagnosticRecord() { values.fill(std::nan("")); }
  explicit DiagnosticRecord(double t) : DiagnosticRecord() { time = t; }
  void set(Metric m, double v) { values[std::size_t(m)] = v; }
  std::optional<double> get(Metric m) const {
    const double v = values[std::size_t(m)];
    return std::isnan(v) ? std::nullopt : std::optional<double>(v);
  }
};

class Trajectory {
 public:
  // Times must be strictly increasing.
  void add_snapshot(double t, Field3 u);
  void add_record(DiagnosticRecord r) { records_.push_back(std::move(r)); }

  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Field3>& snapshots() const { return states_; }
  const Field3& snapshot(std::size_t i) const { return states_.at(i); }
  const Field3& final_state() const { return states_.back(); }
  double final_time() const { return times_.back(); }
  const std::vector<DiagnosticRecord>& records() const { return records_; }
  std::vector<DiagnosticRecord>& records() { return records_; }

 private:
  std::vector<double> times_;
  std::vector<Field3> states_;
  std::vector<DiagnosticRecord> records_;
};

}  // namespace rotasym
