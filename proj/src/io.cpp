#include "gpcons/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <system_error>

namespace gpcons::io {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void write_row(std::ostream& out, const std::vector<double>& row) {
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (k) out << ',';
    out << format_double(row[k]);
  }
  out << '\n';
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ValidationError("csv: cannot parse number '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string> trajectory_header(Index agents, Index dim) {
  std::vector<std::string> h{"t"};
  for (Index k = 1; k <= dim; ++k) h.push_back("xl_" + std::to_string(k));
  for (Index i = 1; i <= agents; ++i) {
    for (const char* block : {"x", "u", "e", "xi"}) {
      for (Index k = 1; k <= dim; ++k) h.push_back(std::string(block) + std::to_string(i) + "_" + std::to_string(k));
    }
  }
  h.push_back("V");
  for (Index k = 1; k <= dim; ++k) h.push_back("E_" + std::to_string(k));
  for (Index i = 1; i <= agents; ++i) h.push_back("dtau_" + std::to_string(i));
  return h;
}

void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryLog& log) {
  auto out = open_out(path);
  const auto header = trajectory_header(log.agents, log.dim);
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  const Index m = log.dim;
  std::vector<double> row;
  for (Index s = 0; s < log.steps(); ++s) {
    row.clear();
    row.push_back(log.time(s));
    for (Index k = 0; k < m; ++k) row.push_back(log.leader(s, k));
    for (Index i = 0; i < log.agents; ++i) {
      for (const Matrix* block : {&log.states, &log.controls, &log.errors, &log.consensus}) {
        for (Index k = 0; k < m; ++k) row.push_back((*block)(s, i * m + k));
      }
    }
    row.push_back(log.lyapunov(s));
    for (Index k = 0; k < m; ++k) row.push_back(log.accumulated(s, k));
    for (Index i = 0; i < log.agents; ++i) row.push_back(log.model_error(s, i));
    write_row(out, row);
  }
}

TrajectoryLog read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("trajectory csv is empty");
  const auto header = split_csv_line(line);

  Index m = 0;
  while (std::find(header.begin(), header.end(), "xl_" + std::to_string(m + 1)) != header.end()) ++m;
  Index n = 0;
  while (std::find(header.begin(), header.end(), "dtau_" + std::to_string(n + 1)) != header.end()) ++n;
  if (m == 0 || n == 0 || header != trajectory_header(n, m)) {
    throw ValidationError("trajectory csv header does not match the expected layout");
  }

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw ValidationError("trajectory csv: ragged row");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c));
    rows.push_back(std::move(row));
  }

  TrajectoryLog log;
  log.agents = n;
  log.dim = m;
  log.resize(static_cast<Index>(rows.size()));
  for (Index s = 0; s < log.steps(); ++s) {
    const auto& r = rows[static_cast<std::size_t>(s)];
    std::size_t c = 0;
    log.time(s) = r[c++];
    for (Index k = 0; k < m; ++k) log.leader(s, k) = r[c++];
    for (Index i = 0; i < n; ++i) {
      for (Matrix* block : {&log.states, &log.controls, &log.errors, &log.consensus}) {
        for (Index k = 0; k < m; ++k) (*block)(s, i * m + k) = r[c++];
      }
    }
    log.lyapunov(s) = r[c++];
    for (Index k = 0; k < m; ++k) log.accumulated(s, k) = r[c++];
    for (Index i = 0; i < n; ++i) log.model_error(s, i) = r[c++];
  }
  return log;
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data) {
  auto out = open_out(path);
  for (Index k = 1; k <= data.input_dim(); ++k) out << "x_" << k << ',';
  out << "y\n";
  std::vector<double> row;
  for (Index p = 0; p < data.size(); ++p) {
    row.clear();
    for (Index k = 0; k < data.input_dim(); ++k) row.push_back(data.inputs(p, k));
    row.push_back(data.outputs(p));
    write_row(out, row);
  }
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("dataset csv is empty");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "y") throw ValidationError("dataset csv: last column must be y");
  const auto m = static_cast<Index>(header.size() - 1);
  for (Index k = 0; k < m; ++k) {
    if (header[static_cast<std::size_t>(k)] != "x_" + std::to_string(k + 1)) {
      throw ValidationError("dataset csv: expected columns x_1..x_m, y");
    }
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (static_cast<Index>(cells.size()) != m + 1) throw ValidationError("dataset csv: ragged row");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_double(c));
    rows.push_back(std::move(row));
  }
  Dataset d{Matrix(static_cast<Index>(rows.size()), m), Vector(static_cast<Index>(rows.size()))};
  for (Index p = 0; p < d.size(); ++p) {
    for (Index k = 0; k < m; ++k) d.inputs(p, k) = rows[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)];
    d.outputs(p) = rows[static_cast<std::size_t>(p)].back();
  }
  return d;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gpcons::io
