#pragma once

#include "sdpembed/gmm_model.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace sdpembed::io {

enum class MatrixFormat { csv, bin };

MatrixFormat parse_format(const std::string& name);

/// Shortest round-trip text for a double ("%.17g").
std::string format_double(double x);

/// {"dim": d, "clusters": [{"mean": [...], "cov": [[...]], "size": n_k}, ...]}
gmm::GaussianMixtureSpec read_spec(const std::string& path);
gmm::GaussianMixtureSpec parse_spec(const std::string& json_text);
std::string spec_to_json(const gmm::GaussianMixtureSpec& spec);

/// Header row, d feature columns, then a `label` column. When the last header
/// is not `label` every column is a feature and labels come back empty.
gmm::LabeledDataSet read_dataset(const std::string& path);
void write_dataset(const std::string& path, const gmm::LabeledDataSet& data);

/// Dense CSV without header, or binary: uint64 n, then n*n little-endian
/// float64 row-major. Reading dispatches on the .bin extension.
Eigen::MatrixXd read_matrix(const std::string& path);
void write_matrix(const std::string& path, const Eigen::MatrixXd& m, MatrixFormat format);

/// Single column with a `label` header.
std::vector<int> read_labels(const std::string& path);
void write_labels(const std::string& path, const std::vector<int>& labels);

/// Columns dim_1..dim_K, plus `label` when labels is non-empty.
void write_embedding(const std::string& path, const Eigen::MatrixXd& coords,
                     const std::vector<int>& labels = {});

/// Grayscale heatmap, one rect per cell (black = 1), n <= 300.
inline constexpr Eigen::Index kMaxHeatmapSize = 300;
std::string heatmap_svg(const Eigen::MatrixXd& m);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace sdpembed::io
