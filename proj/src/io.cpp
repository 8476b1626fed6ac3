#include "roughkit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace roughkit {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw FormatError("expected a number, got '" + s + "'");
    return v;
}

std::ofstream open_out(const std::filesystem::path& file) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);  // binary: identical bytes on every platform
    if (!out) throw FormatError("cannot open " + file.string() + " for writing");
    return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw FormatError("cannot open " + file.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line != "\r") lines.push_back(line);
    return lines;
}

}  // namespace

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_path_csv(const std::filesystem::path& file, const SamplePath& path) {
    std::ofstream out = open_out(file);
    out << "t";
    for (int c = 1; c <= path.dimension(); ++c) out << ",x" << c;
    out << "\n";
    for (Eigen::Index k = 0; k < path.size(); ++k) {
        out << fmt17(path.times(k));
        for (int c = 0; c < path.dimension(); ++c) out << "," << fmt17(path.values(k, c));
        out << "\n";
    }
}

SamplePath read_path_csv(const std::filesystem::path& file) {
    const auto lines = read_lines(file);
    if (lines.size() < 3) throw FormatError("path CSV needs a header and at least 2 rows");
    const auto header = split(lines[0], ',');
    if (header.empty() || header[0] != "t") throw FormatError("path CSV header must start with 't'");
    const int d = static_cast<int>(header.size()) - 1;
    if (d < 1) throw FormatError("path CSV needs at least one coordinate column");
    const Eigen::Index n = static_cast<Eigen::Index>(lines.size()) - 1;
    Eigen::VectorXd times(n);
    Eigen::MatrixXd values(n, d);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto cells = split(lines[k + 1], ',');
        if (static_cast<int>(cells.size()) != d + 1)
            throw FormatError("path CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(d + 1));
        times(k) = parse_double(cells[0]);
        for (int c = 0; c < d; ++c) values(k, c) = parse_double(cells[c + 1]);
    }
    return {times, values};
}

std::string tensor_csv_row(const Tensor& t) {
    std::string row = std::to_string(t.dimension()) + "," + std::to_string(t.depth());
    for (int n = 0; n <= t.depth(); ++n)
        for (Eigen::Index i = 0; i < t.level(n).size(); ++i) row += "," + fmt17(t.level(n)(i));
    return row;
}

namespace {

Tensor parse_tensor_cells(const std::vector<std::string>& cells, std::size_t offset) {
    if (cells.size() < offset + 2) throw FormatError("tensor row is too short");
    const int d = static_cast<int>(parse_double(cells[offset]));
    const int depth = static_cast<int>(parse_double(cells[offset + 1]));
    Tensor t(d, depth);
    std::size_t k = offset + 2;
    for (int n = 0; n <= depth; ++n)
        for (Eigen::Index i = 0; i < t.level(n).size(); ++i) {
            if (k >= cells.size()) throw FormatError("tensor row is missing coefficients");
            t.level(n)(i) = parse_double(cells[k++]);
        }
    if (k != cells.size()) throw FormatError("tensor row has trailing cells");
    return t;
}

}  // namespace

Tensor parse_tensor_csv_row(const std::string& row) { return parse_tensor_cells(split(row, ','), 0); }

void write_tensor_csv(const std::filesystem::path& file, const Tensor& t) {
    std::ofstream out = open_out(file);
    out << tensor_csv_row(t) << "\n";
}

Tensor read_tensor_csv(const std::filesystem::path& file) {
    const auto lines = read_lines(file);
    if (lines.empty()) throw FormatError("tensor CSV is empty");
    return parse_tensor_csv_row(lines[0]);
}

void write_roughpath_csv(const std::filesystem::path& file, const RoughPath& x) {
    std::ofstream out = open_out(file);
    for (Eigen::Index k = 0; k + 1 < x.size(); ++k)
        out << fmt17(x.times(k)) << "," << fmt17(x.times(k + 1)) << ","
            << tensor_csv_row(x.increments[k]) << "\n";
}

RoughPath read_roughpath_csv(const std::filesystem::path& file, double alpha_declared) {
    const auto lines = read_lines(file);
    if (lines.empty()) throw FormatError("rough path CSV is empty");
    Eigen::VectorXd times(lines.size() + 1);
    std::vector<Tensor> increments;
    increments.reserve(lines.size());
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const auto cells = split(lines[k], ',');
        if (cells.size() < 4) throw FormatError("rough path CSV row is too short");
        const double left = parse_double(cells[0]);
        if (k == 0)
            times(0) = left;
        else if (times(k) != left)
            throw FormatError("rough path CSV cells are not contiguous");
        times(k + 1) = parse_double(cells[1]);
        increments.push_back(parse_tensor_cells(cells, 2));
    }
    return {increments.front().dimension(), increments.front().depth(), alpha_declared, times,
            std::move(increments)};
}

void write_table_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
    std::ofstream out = open_out(file);
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw FormatError("table row width does not match header");
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << fmt17(row[c]);
        out << "\n";
    }
}

void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                    const nlohmann::json& config, std::uint64_t seed, double wall_seconds) {
    std::filesystem::create_directories(out_dir);
    nlohmann::json manifest;
    manifest["command"] = command;
    manifest["config"] = config;
    manifest["seed"] = seed;
    manifest["versions"] = {
        {"roughkit", "0.1.0"},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
    };
    manifest["wall_time_seconds"] = wall_seconds;
    std::ofstream out(out_dir / "manifest.json");
    if (!out) throw FormatError("cannot write manifest in " + out_dir.string());
    out << manifest.dump(2) << "\n";
}

}  // namespace roughkit
