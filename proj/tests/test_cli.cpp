#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "topocp/cli.hpp"
#include "topocp/raster_io.hpp"
#include "topocp/synth.hpp"

#include "fixtures.hpp"

using namespace topocp;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("topocp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    save_raster(path("ring.f32r"), fixture::ring_08(), RasterFormat::F32R);
    save_raster(path("ring.pgm"), fixture::ring(16, 4, 11, 1.0), RasterFormat::PGM8);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli_main(args, out_, err_);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(CliTest, BettiOfRing) {
  EXPECT_EQ(run({"betti", "--mask", path("ring.pgm"), "--threshold", "0.5"}), kExitOk);
  EXPECT_EQ(out_.str(), "b0=1 b1=1\n");
}

TEST_F(CliTest, LossOfPerfectPrediction) {
  save_raster(path("a.f32r"), fixture::ring(16, 4, 11, 1.0), RasterFormat::F32R);
  EXPECT_EQ(run({"loss", "--pred", path("a.f32r"), "--gt", path("ring.pgm"), "--dims", "0,1",
                 "--lambda", "1", "--grad-out", path("g.f32r")}),
            kExitOk);
  EXPECT_EQ(out_.str(), "{\"topo_loss\": 0.0}\n");
  const auto g = read_real_f32r(read_file(path("g.f32r")));
  for (double v : g.values()) EXPECT_EQ(v, 0.0);
}

TEST_F(CliTest, LossOfDimmedRing) {
  save_raster(path("dim.f32r"), fixture::ring(16, 4, 11, 0.6), RasterFormat::F32R);
  EXPECT_EQ(run({"loss", "--pred", path("dim.f32r"), "--gt", path("ring.pgm"), "--grad-out",
                 path("g.f32r")}),
            kExitOk);
  const auto j = nlohmann::json::parse(out_.str());
  // 0.6 is stored as float32.
  const double b = static_cast<float>(0.6);
  EXPECT_NEAR(j.at("topo_loss").get<double>(), 2 * (b - 1) * (b - 1), 1e-12);
  const auto g = read_real_f32r(read_file(path("g.f32r")));
  EXPECT_NEAR(g(4, 4), 2 * (b - 1), 1e-6);
}

TEST_F(CliTest, DiagramOfRing) {
  EXPECT_EQ(run({"diagram", "--input", path("ring.f32r"), "--out", path("d.csv")}), kExitOk);
  const auto csv = slurp(path("d.csv"));
  EXPECT_NE(csv.find("\n0,0.800000012,0,"), std::string::npos) << csv;
  EXPECT_NE(csv.find("\n1,0.800000012,0,"), std::string::npos) << csv;
  EXPECT_EQ(run({"diagram", "--input", path("ring.f32r"), "--out", path("d1.csv"), "--dims", "1"}),
            kExitOk);
  EXPECT_EQ(slurp(path("d1.csv")).find("\n0,"), std::string::npos);
}

TEST_F(CliTest, MetricsOutput) {
  EXPECT_EQ(run({"metrics", "--pred", path("ring.pgm"), "--gt", path("ring.pgm"), "--spacing", "0.5",
                 "0.5"}),
            kExitOk);
  EXPECT_EQ(out_.str(), "{\"dsc\":1.0,\"asd_mm\":0.0,\"hd95_mm\":0.0,\"betti0_error\":0.0}\n");
}

TEST_F(CliTest, JobsPreserveOrder) {
  save_raster(path("blank.f32r"), LikelihoodMap(16, 16, 0.0), RasterFormat::F32R);
  std::vector<std::string> args{"loss", "--jobs", "3"};
  for (int i = 0; i < 6; ++i) {
    args.insert(args.end(), {"--pred", path(i % 2 ? "blank.f32r" : "ring.f32r"), "--gt",
                             path("ring.pgm")});
  }
  ASSERT_EQ(run(args), kExitOk);
  std::istringstream lines(out_.str());
  std::string line;
  std::vector<double> values;
  while (std::getline(lines, line)) values.push_back(nlohmann::json::parse(line).at("topo_loss"));
  ASSERT_EQ(values.size(), 6u);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(values[i], values[i % 2]);
  EXPECT_NE(values[0], values[1]);
}

TEST_F(CliTest, OutputsAreDeterministic) {
  for (int i = 0; i < 2; ++i) {
    ASSERT_EQ(run({"diagram", "--input", path("ring.f32r"), "--out", path("d" + std::to_string(i))}),
              kExitOk);
  }
  EXPECT_EQ(slurp(path("d0")), slurp(path("d1")));
  ASSERT_EQ(run({"metrics", "--pred", path("ring.f32r"), "--gt", path("ring.pgm")}), kExitOk);
  const auto first = out_.str();
  ASSERT_EQ(run({"metrics", "--pred", path("ring.f32r"), "--gt", path("ring.pgm")}), kExitOk);
  EXPECT_EQ(out_.str(), first);
}

TEST_F(CliTest, DataErrorsExitOne) {
  EXPECT_EQ(run({"betti", "--mask", path("missing.pgm")}), kExitDataError);
  EXPECT_EQ(err_.str().rfind("ERROR Io: ", 0), 0u) << err_.str();

  std::ofstream(path("bad.pgm"), std::ios::binary) << "P5\n4 4\n255\n" << std::string(3, 'x');
  EXPECT_EQ(run({"betti", "--mask", path("bad.pgm")}), kExitDataError);
  EXPECT_EQ(err_.str().rfind("ERROR TruncatedPayload: ", 0), 0u) << err_.str();

  save_raster(path("small.pgm"), LikelihoodMap(8, 8, 1.0), RasterFormat::PGM8);
  EXPECT_EQ(run({"loss", "--pred", path("ring.f32r"), "--gt", path("small.pgm")}), kExitDataError);
  EXPECT_EQ(err_.str().rfind("ERROR ShapeMismatch: ", 0), 0u) << err_.str();
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}), kExitUsage);
  EXPECT_EQ(run({"frobnicate"}), kExitUsage);
  EXPECT_EQ(run({"betti"}), kExitUsage);
  EXPECT_EQ(run({"diagram", "--input", path("ring.f32r"), "--out", path("x"), "--dims", "2"}),
            kExitUsage);
  EXPECT_EQ(run({"loss", "--pred", path("ring.f32r"), "--pred", path("ring.f32r"), "--gt",
                 path("ring.pgm")}),
            kExitUsage);
  EXPECT_EQ(run({"metrics", "--pred", "a", "--gt", "b", "--spacing", "1"}), kExitUsage);
  EXPECT_FALSE(err_.str().empty());
  EXPECT_EQ(run({"--help"}), kExitOk);
}

TEST_F(CliTest, SynthWritesManifest) {
  ASSERT_EQ(run({"synth", "--seed", "7", "--size", "64", "--components", "1", "--holes", "1",
                 "--thickness", "3", "--breaks", "1", "--out-dir", path("data"), "--count", "2"}),
            kExitOk);
  std::istringstream manifest(slurp(path("data/manifest.jsonl")));
  std::string line;
  int n = 0;
  while (std::getline(manifest, line)) {
    const auto j = nlohmann::json::parse(line);
    const auto spec = ribbon_spec_from_json(j.at("spec").dump());
    EXPECT_EQ(spec.seed, 7u + static_cast<unsigned>(n));
    const auto gt = binarize(load_raster(path("data/" + j.at("gt_path").get<std::string>())));
    EXPECT_EQ(betti_numbers(gt), (BettiPair{1, 1}));
    const auto sample = gen_ribbon(spec);
    EXPECT_EQ(gt, sample.gt);
    EXPECT_TRUE(fs::exists(path("data/" + j.at("image_path").get<std::string>())));
    EXPECT_TRUE(fs::exists(path("data/" + j.at("degraded_path").get<std::string>())));
    ++n;
  }
  EXPECT_EQ(n, 2);
  EXPECT_EQ(run({"synth", "--seed", "1", "--size", "8", "--components", "1", "--holes", "0",
                 "--thickness", "1", "--breaks", "0", "--out-dir", path("bad")}),
            kExitDataError);
  EXPECT_EQ(err_.str().rfind("ERROR InfeasibleSpec: ", 0), 0u) << err_.str();
}
