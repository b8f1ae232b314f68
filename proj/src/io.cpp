#include "sdpembed/io.hpp"

#include "sdpembed/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sdpembed::io {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, const std::string& path, std::size_t row) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size()) {
    throw ValidationError(path + ": row " + std::to_string(row) + ": not a number: '" + cell + "'");
  }
  return v;
}

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw ValidationError("cannot write file: " + path);
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

MatrixFormat parse_format(const std::string& name) {
  if (name == "csv") return MatrixFormat::csv;
  if (name == "bin") return MatrixFormat::bin;
  throw ValidationError("unknown matrix format '" + name + "' (expected csv or bin)");
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);  // no "-0"
  return buf;
}

gmm::GaussianMixtureSpec parse_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed spec document: ") + e.what());
  }
  try {
    const int dim = j.at("dim").get<int>();
    std::vector<gmm::ClusterSpec> clusters;
    for (const auto& c : j.at("clusters")) {
      gmm::ClusterSpec cs;
      const auto mean = c.at("mean").get<std::vector<double>>();
      cs.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
      const auto cov = c.at("cov").get<std::vector<std::vector<double>>>();
      cs.cov.resize(static_cast<Eigen::Index>(cov.size()),
                    cov.empty() ? 0 : static_cast<Eigen::Index>(cov.front().size()));
      for (std::size_t r = 0; r < cov.size(); ++r) {
        if (static_cast<Eigen::Index>(cov[r].size()) != cs.cov.cols()) {
          throw ValidationError("covariance rows have different lengths");
        }
        for (std::size_t s = 0; s < cov[r].size(); ++s) {
          cs.cov(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = cov[r][s];
        }
      }
      cs.size = c.at("size").get<int>();
      clusters.push_back(std::move(cs));
    }
    return gmm::GaussianMixtureSpec(dim, std::move(clusters));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed spec document: ") + e.what());
  }
}

gmm::GaussianMixtureSpec read_spec(const std::string& path) {
  return parse_spec(read_text(path));
}

std::string spec_to_json(const gmm::GaussianMixtureSpec& spec) {
  json j;
  j["dim"] = spec.dim();
  j["clusters"] = json::array();
  for (const auto& c : spec.clusters()) {
    json jc;
    jc["mean"] = std::vector<double>(c.mean.data(), c.mean.data() + c.mean.size());
    json rows = json::array();
    for (Eigen::Index r = 0; r < c.cov.rows(); ++r) {
      std::vector<double> row(static_cast<std::size_t>(c.cov.cols()));
      for (Eigen::Index s = 0; s < c.cov.cols(); ++s) row[static_cast<std::size_t>(s)] = c.cov(r, s);
      rows.push_back(row);
    }
    jc["cov"] = rows;
    jc["size"] = c.size;
    j["clusters"].push_back(jc);
  }
  return j.dump(2) + "\n";
}

gmm::LabeledDataSet read_dataset(const std::string& path) {
  const auto rows = read_csv_rows(path);
  if (rows.empty()) throw ValidationError(path + ": empty dataset (header row required)");
  const auto& header = rows.front();
  const bool has_label = !header.empty() && header.back() == "label";
  const auto cols = static_cast<Eigen::Index>(header.size());
  const Eigen::Index d = has_label ? cols - 1 : cols;
  if (d < 1) throw ValidationError(path + ": no feature columns");
  if (rows.size() < 2) throw ValidationError(path + ": no data rows");

  gmm::LabeledDataSet out;
  out.points.resize(static_cast<Eigen::Index>(rows.size() - 1), d);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (static_cast<Eigen::Index>(rows[r].size()) != cols) {
      throw ValidationError(path + ": row " + std::to_string(r + 1) + " has " +
                            std::to_string(rows[r].size()) + " cells, expected " +
                            std::to_string(cols));
    }
    for (Eigen::Index c = 0; c < d; ++c) {
      const double v = parse_number(rows[r][static_cast<std::size_t>(c)], path, r + 1);
      if (!std::isfinite(v)) throw ValidationError(path + ": non-finite value");
      out.points(static_cast<Eigen::Index>(r - 1), c) = v;
    }
    if (has_label) {
      const double l = parse_number(rows[r].back(), path, r + 1);
      if (l != std::floor(l)) throw ValidationError(path + ": labels must be integers");
      out.labels.push_back(static_cast<int>(l));
    }
  }
  return out;
}

void write_dataset(const std::string& path, const gmm::LabeledDataSet& data) {
  auto out = open_out(path);
  const bool labeled = !data.labels.empty();
  if (labeled && static_cast<Eigen::Index>(data.labels.size()) != data.points.rows()) {
    throw ValidationError("label count does not match number of points");
  }
  for (Eigen::Index c = 0; c < data.points.cols(); ++c) {
    out << (c ? "," : "") << "x" << c + 1;
  }
  if (labeled) out << ",label";
  out << "\n";
  for (Eigen::Index r = 0; r < data.points.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.points.cols(); ++c) {
      out << (c ? "," : "") << format_double(data.points(r, c));
    }
    if (labeled) out << "," << data.labels[static_cast<std::size_t>(r)];
    out << "\n";
  }
}

Eigen::MatrixXd read_matrix(const std::string& path) {
  if (ends_with(path, ".bin")) {
    static_assert(std::endian::native == std::endian::little, "binary matrices assume little-endian");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::uint64_t n = 0;
    if (!in.read(reinterpret_cast<char*>(&n), sizeof n)) {
      throw ValidationError(path + ": truncated matrix header");
    }
    if (n > (std::uint64_t{1} << 20)) throw ValidationError(path + ": implausible matrix size");
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m(ni, ni);
    if (!in.read(reinterpret_cast<char*>(m.data()),
                 static_cast<std::streamsize>(n * n * sizeof(double)))) {
      throw ValidationError(path + ": truncated matrix data");
    }
    return m;
  }
  const auto rows = read_csv_rows(path);
  if (rows.empty()) throw ValidationError(path + ": empty matrix file");
  const std::size_t cols = rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw ValidationError(path + ": row " + std::to_string(r + 1) + " has " +
                            std::to_string(rows[r].size()) + " cells, expected " +
                            std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_number(rows[r][c], path, r + 1);
    }
  }
  return m;
}

void write_matrix(const std::string& path, const Eigen::MatrixXd& m, MatrixFormat format) {
  if (format == MatrixFormat::bin) {
    if (m.rows() != m.cols()) throw ValidationError("binary matrix format requires a square matrix");
    auto out = open_out(path, std::ios::binary);
    const auto n = static_cast<std::uint64_t>(m.rows());
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
    out.write(reinterpret_cast<const char*>(rm.data()),
              static_cast<std::streamsize>(rm.size() * sizeof(double)));
    return;
  }
  auto out = open_out(path);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << format_double(m(r, c));
    out << "\n";
  }
}

std::vector<int> read_labels(const std::string& path) {
  const auto rows = read_csv_rows(path);
  std::vector<int> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != 1) throw ValidationError(path + ": labels file must have one column");
    if (r == 0 && rows[r][0] == "label") continue;
    const double l = parse_number(rows[r][0], path, r + 1);
    if (l != std::floor(l)) throw ValidationError(path + ": labels must be integers");
    out.push_back(static_cast<int>(l));
  }
  return out;
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
  auto out = open_out(path);
  out << "label\n";
  for (int l : labels) out << l << "\n";
}

void write_embedding(const std::string& path, const Eigen::MatrixXd& coords,
                     const std::vector<int>& labels) {
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != coords.rows()) {
    throw ValidationError("label count does not match embedding rows");
  }
  auto out = open_out(path);
  for (Eigen::Index c = 0; c < coords.cols(); ++c) out << (c ? "," : "") << "dim_" << c + 1;
  if (!labels.empty()) out << ",label";
  out << "\n";
  for (Eigen::Index r = 0; r < coords.rows(); ++r) {
    for (Eigen::Index c = 0; c < coords.cols(); ++c) {
      out << (c ? "," : "") << format_double(coords(r, c));
    }
    if (!labels.empty()) out << "," << labels[static_cast<std::size_t>(r)];
    out << "\n";
  }
}

std::string heatmap_svg(const Eigen::MatrixXd& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  if (rows > kMaxHeatmapSize || cols > kMaxHeatmapSize) {
    throw SizeError("heatmap limited to " + std::to_string(kMaxHeatmapSize) + " rows/columns");
  }
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cols << "\" height=\"" << rows
    << "\" viewBox=\"0 0 " << cols << " " << rows << "\" shape-rendering=\"crispEdges\">\n";
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double v = std::clamp(m(r, c), 0.0, 1.0);
      const int g = static_cast<int>(std::lround(255.0 * (1.0 - v)));
      s << "<rect x=\"" << c << "\" y=\"" << r << "\" width=\"1\" height=\"1\" fill=\"rgb(" << g
        << "," << g << "," << g << ")\"/>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

void write_text(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace sdpembed::io
