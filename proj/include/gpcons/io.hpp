#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gpcons/gp.hpp"
#include "gpcons/sim.hpp"

#include "json.hpp"

namespace gpcons::io {

/// 17 significant digits, '.' decimal point, no locale dependence.
std::string format_double(double value);
double parse_double(std::string_view text);

/// Header: t, xl_1..xl_m, then per agent i: x{i}_k, u{i}_k, e{i}_k, xi{i}_k
/// blocks, then V, E_1..E_m, dtau_1..dtau_n.
std::vector<std::string> trajectory_header(Index agents, Index dim);
void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryLog& log);
TrajectoryLog read_trajectory_csv(const std::filesystem::path& path);

/// Columns x_1..x_m, y.
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// FNV-1a 64-bit of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace gpcons::io
