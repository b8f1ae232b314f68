#include "sdpembed/errors.hpp"
#include "sdpembed/gmm_model.hpp"
#include "sdpembed/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>

using namespace sdpembed;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "sdpembed_io_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("format_double round-trips and avoids negative zero") {
  CHECK(io::format_double(-0.0) == "0");
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = normal(rng);
    CHECK(std::stod(io::format_double(x)) == x);
  }
}

TEST_CASE("spec JSON round trip and validation") {
  const std::string text =
      R"({"dim": 2, "clusters": [{"mean": [0, 1], "cov": [[1, 0.2], [0.2, 2]], "size": 3},)"
      R"( {"mean": [5, 5], "cov": [[0.5, 0], [0, 0.5]], "size": 4}]})";
  const auto spec = io::parse_spec(text);
  CHECK(spec.num_clusters() == 2);
  CHECK(spec.total_size() == 7);
  CHECK(spec.cluster(0).cov(0, 1) == 0.2);
  const auto again = io::parse_spec(io::spec_to_json(spec));
  CHECK(again.cluster(1).mean == spec.cluster(1).mean);
  CHECK(again.cluster(0).cov == spec.cluster(0).cov);
  CHECK_THROWS_AS(io::parse_spec("{\"dim\": 2}"), ValidationError);
  CHECK_THROWS_AS(io::parse_spec("not json"), ValidationError);
  CHECK_THROWS_AS(io::parse_spec(R"({"dim": 1, "clusters": [{"mean": [0], "cov": [[-1]], "size": 3}]})"),
                  ValidationError);
}

TEST_CASE("dataset CSV round trip") {
  const auto path = (scratch_dir() / "data.csv").string();
  gmm::LabeledDataSet data;
  data.points = Eigen::MatrixXd::Random(5, 3);
  data.labels = {1, 1, 2, 2, 2};
  io::write_dataset(path, data);
  const auto back = io::read_dataset(path);
  CHECK(back.points == data.points);
  CHECK(back.labels == data.labels);
  CHECK(io::read_text(path).rfind("x1,x2,x3,label\n", 0) == 0);

  const auto raw = (scratch_dir() / "raw.csv").string();
  io::write_text(raw, "a,b\n1,2\n3,4\n");
  const auto unlabeled = io::read_dataset(raw);
  CHECK(unlabeled.points.rows() == 2);
  CHECK(unlabeled.labels.empty());
  io::write_text(raw, "a,b\n1,x\n");
  CHECK_THROWS_AS(io::read_dataset(raw), ValidationError);
  CHECK_THROWS_AS(io::read_dataset((scratch_dir() / "missing.csv").string()), ValidationError);
}

TEST_CASE("matrix files in both formats") {
  const Eigen::MatrixXd m = Eigen::MatrixXd::Random(4, 4);
  for (auto [name, fmt] : {std::pair{"m.csv", io::MatrixFormat::csv}, std::pair{"m.bin", io::MatrixFormat::bin}}) {
    const auto path = (scratch_dir() / name).string();
    io::write_matrix(path, m, fmt);
    CHECK(io::read_matrix(path) == m);
  }
  const auto bin = io::read_text((scratch_dir() / "m.bin").string());
  CHECK(bin.size() == 8 + 16 * 8);
  CHECK(io::parse_format("bin") == io::MatrixFormat::bin);
  CHECK_THROWS_AS(io::parse_format("hdf5"), ValidationError);
}

TEST_CASE("labels, embedding and heatmap") {
  const auto path = (scratch_dir() / "labels.csv").string();
  io::write_labels(path, {2, 1, 3});
  CHECK(io::read_text(path) == "label\n2\n1\n3\n");
  CHECK(io::read_labels(path) == std::vector<int>{2, 1, 3});

  const auto emb = (scratch_dir() / "emb.csv").string();
  io::write_embedding(emb, Eigen::MatrixXd::Zero(2, 2), {1, 2});
  CHECK(io::read_text(emb) == "dim_1,dim_2,label\n0,0,1\n0,0,2\n");

  const std::string svg = io::heatmap_svg(Eigen::MatrixXd::Identity(3, 3));
  CHECK(svg.find("<svg") != std::string::npos);
  std::size_t rects = 0;
  for (std::size_t pos = svg.find("<rect"); pos != std::string::npos; pos = svg.find("<rect", pos + 1)) ++rects;
  CHECK(rects == 9);
  CHECK_THROWS_AS(io::heatmap_svg(Eigen::MatrixXd::Zero(301, 301)), SizeError);
}
