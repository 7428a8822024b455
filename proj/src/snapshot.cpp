#include "rotasym/snapshot.hpp"

#include <bit>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rotasym/errors.hpp"

namespace rotasym {
namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double x) {
  const auto v = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

std::string csv_number(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

void write_snapshot(const std::string& path, const std::vector<std::vector<double>>& fields, const std::uint32_t dims[3],
                    double time) {
  const std::size_t n = std::size_t(dims[0]) * dims[1] * dims[2];
  std::string buf;
  buf.reserve(kSnapshotHeaderBytes + 8 * n * fields.size());
  buf += "RFA1";
  put_u32(buf, kSnapshotVersion);
  for (int i = 0; i < 3; ++i) put_u32(buf, dims[i]);
  put_u32(buf, std::uint32_t(fields.size()));
  put_f64(buf, time);
  for (const auto& f : fields) {
    if (f.size() != n) throw IoError("write_snapshot: field size does not match dims");
    for (double x : f) put_f64(buf, x);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(buf.data(), std::streamsize(buf.size()));
  if (!out) throw IoError("write to '" + path + "' failed");
}

void write_snapshot(const std::string& path, const Field3& u, double time) {
  const Field3 p = u.as_physical();
  const Grid& g = p.grid();
  const std::uint32_t dims[3] = {std::uint32_t(g.nh()), std::uint32_t(g.nh()), std::uint32_t(g.n3())};
  std::vector<std::vector<double>> f;
  for (int c = 0; c < 3; ++c) f.emplace_back(p.physical(c).begin(), p.physical(c).end());
  write_snapshot(path, f, dims, time);
}

SnapshotData read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  if (buf.size() < 4 || buf.compare(0, 4, "RFA1") != 0) throw IoError("'" + path + "': bad magic (not an RFA1 snapshot)");
  if (buf.size() < kSnapshotHeaderBytes) throw IoError("'" + path + "': truncated header");
  const std::uint32_t version = get_u32(p + 4);
  if (version != kSnapshotVersion) throw IoError("'" + path + "': unsupported format version " + std::to_string(version));
  SnapshotData d;
  for (int i = 0; i < 3; ++i) d.dims[i] = get_u32(p + 8 + 4 * i);
  const std::uint32_t count = get_u32(p + 20);
  d.time = get_f64(p + 24);
  const std::size_t n = std::size_t(d.dims[0]) * d.dims[1] * d.dims[2];
  const std::size_t expected = kSnapshotHeaderBytes + 8 * n * count;
  if (buf.size() < expected) throw IoError("'" + path + "': truncated data (" + std::to_string(buf.size()) + " of " +
                                           std::to_string(expected) + " bytes)");
  if (buf.size() > expected) throw IoError("'" + path + "': trailing bytes after data");
  const unsigned char* q = p + kSnapshotHeaderBytes;
  d.fields.resize(count);
  for (auto& f : d.fields) {
    f.resize(n);
    for (std::size_t i = 0; i < n; ++i, q += 8) f[i] = get_f64(q);
  }
  return d;
}

Field3 read_field3(const std::string& path, const Grid& g, double* time) {
  SnapshotData d = read_snapshot(path);
  if (d.dims[0] != std::uint32_t(g.nh()) || d.dims[1] != std::uint32_t(g.nh()) || d.dims[2] != std::uint32_t(g.n3()))
    throw IoError("'" + path + "': dimension mismatch (file " + std::to_string(d.dims[0]) + "x" +
                  std::to_string(d.dims[1]) + "x" + std::to_string(d.dims[2]) + ", expected " + std::to_string(g.nh()) +
                  "x" + std::to_string(g.nh()) + "x" + std::to_string(g.n3()) + ")");
  if (d.fields.size() != 3) throw IoError("'" + path + "': expected 3 fields, found " + std::to_string(d.fields.size()));
  Field3 u(g);
  for (int c = 0; c < 3; ++c) std::copy(d.fields[c].begin(), d.fields[c].end(), u.physical(c).begin());
  if (time) *time = d.time;
  return u;
}

void write_meta(const std::string& snapshot_path, const nlohmann::json& meta) {
  std::ofstream out(snapshot_path + ".meta", std::ios::trunc);
  if (!out) throw IoError("cannot write '" + snapshot_path + ".meta'");
  out << meta.dump(2) << '\n';
}

nlohmann::json read_meta(const std::string& snapshot_path) {
  std::ifstream in(snapshot_path + ".meta");
  if (!in) throw IoError("cannot read '" + snapshot_path + ".meta'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("'" + snapshot_path + ".meta': " + e.what());
  }
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticRecord>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "time";
  for (const auto& n : metric_names()) out << ',' << n;
  out << '\n';
  for (const auto& r : records) {
    out << csv_number(r.time);
    for (std::size_t m = 0; m < kMetricCount; ++m) {
      out << ',';
      if (auto v = r.get(Metric(m))) out << csv_number(*v);
    }
    out << '\n';
  }
}

void write_convergence_csv(const std::string& path, const ConvergenceTable& table) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "eps,e_strong,e_weak,alignment,coupling,energy_final\n";
  for (const auto& r : table.rows) {
    out << csv_number(r.eps);
    if (r.failed) {
      out << ",nan,nan,nan,nan,nan\n";
      continue;
    }
    for (double v : {r.e_strong, r.e_weak, r.alignment, r.coupling, r.energy_final}) out << ',' << csv_number(v);
    out << '\n';
  }
}

void write_convergence_detail_csv(const std::string& path, const ConvergenceTable& table) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "eps,e_strong,e_strong_masked,alignment_projected,failed,error\n";
  for (const auto& r : table.rows) {
    std::string err = r.error;
    for (char& c : err)
      if (c == ',' || c == '\n') c = ' ';
    out << csv_number(r.eps) << ',' << csv_number(r.e_strong) << ',' << csv_number(r.e_strong_masked) << ','
        << csv_number(r.alignment_projected) << ',' << (r.failed ? 1 : 0) << ',' << err << '\n';
  }
}

}  // namespace rotasym
