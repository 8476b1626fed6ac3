#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "roughkit/lift.hpp"
#include "roughkit/path.hpp"
#include "roughkit/tensor.hpp"

namespace roughkit {

// 17-significant-digit decimal rendering; round-trips every double exactly.
std::string fmt17(double v);

// Path CSV: header `t,x1,...,xd`, one row per grid time.
void write_path_csv(const std::filesystem::path& file, const SamplePath& path);
SamplePath read_path_csv(const std::filesystem::path& file);

// Flat tensor row: d, N, then the level blocks concatenated in order.
std::string tensor_csv_row(const Tensor& t);
Tensor parse_tensor_csv_row(const std::string& row);
void write_tensor_csv(const std::filesystem::path& file, const Tensor& t);
Tensor read_tensor_csv(const std::filesystem::path& file);

// Rough path CSV: one row per adjacent cell, `t_k, t_{k+1}` followed by the
// flat tensor row of the increment.
void write_roughpath_csv(const std::filesystem::path& file, const RoughPath& x);
RoughPath read_roughpath_csv(const std::filesystem::path& file, double alpha_declared = 1.0);

// Generic numeric table with a header line.
void write_table_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

// Per-run manifest: command, config, seed, versions, wall time.
void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                    const nlohmann::json& config, std::uint64_t seed, double wall_seconds);

}  // namespace roughkit
