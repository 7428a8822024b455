#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "rotasym/diagnostics.hpp"
#include "rotasym/field.hpp"

namespace rotasym {

// RFA1 container: "RFA1", u32 version, u32 dims[3], u32 field count, f64 time,
// then each field's row-major physical samples, all little-endian.
constexpr std::uint32_t kSnapshotVersion = 1;
constexpr std::size_t kSnapshotHeaderBytes = 4 + 4 + 12 + 4 + 8;

struct SnapshotData {
  std::uint32_t dims[3] = {0, 0, 0};
  double time = 0.0;
  std::vector<std::vector<double>> fields;
};

void write_snapshot(const std::string& path, const std::vector<std::vector<double>>& fields, const std::uint32_t dims[3],
                    double time);
void write_snapshot(const std::string& path, const Field3& u, double time);
SnapshotData read_snapshot(const std::string& path);
// Reads a three-component snapshot on the expected grid.
Field3 read_field3(const std::string& path, const Grid& expected, double* time = nullptr);

// JSON sidecar at path + ".meta".
void write_meta(const std::string& snapshot_path, const nlohmann::json& meta);
nlohmann::json read_meta(const std::string& snapshot_path);

// diagnostics.csv: "time" then the metric registry; empty cells for metrics not computed.
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticRecord>& records);
// convergence.csv: eps,e_strong,e_weak,alignment,coupling,energy_final
void write_convergence_csv(const std::string& path, const ConvergenceTable& table);
// Extra columns (masked strong error, projected alignment, failure flags).
void write_convergence_detail_csv(const std::string& path, const ConvergenceTable& table);

}  // namespace rotasym
