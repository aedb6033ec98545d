#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ciprec/experiment.hpp"

#ifndef CIPREC_TEST_DATA_DIR
#error "CIPREC_TEST_DATA_DIR must be defined"
#endif

namespace ciprec {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("ciprec_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

constexpr const char* kSmall = R"(# small sweep
mode = ber-vs-snr
nt = 16
k = 2
n_rf = 4
snr_db_points = -5, 0, 5
symbols_per_channel = 5
channel_realizations = 6
master_seed = 3
schemes = zf-hybrid-ideal
)";

TEST(ParseConfig, MinimalFileKeepsDefaults) {
  const ExperimentSpec spec = parse_config_text("# nothing but defaults\n\n");
  EXPECT_EQ(spec, ExperimentSpec{});
  EXPECT_EQ(spec.config.nt, 128u);
  EXPECT_EQ(spec.config.snr_db_points, (std::vector<double>{-10, -5, 0, 5, 10}));
  EXPECT_EQ(spec.mode, SweepMode::kBerVsSnr);
}

TEST(ParseConfig, ReadsEveryKey) {
  const ExperimentSpec spec = parse_config_text(
      "mode = ber-vs-rf\nnt = 64\nk = 3\nn_rf = 8  # trailing comment\nmod_order = 8\n"
      "snr_db_points = -2.5\nn_rf_points = 4, 8,16\nsymbols_per_channel = 7\n"
      "channel_realizations = 9\nmaster_seed = 18446744073709551615\n"
      "schemes = zf-fd, ci-1bit\noutput_path = out/x.csv\nemit_plot_series = true\n");
  EXPECT_EQ(spec.mode, SweepMode::kBerVsRf);
  EXPECT_EQ(spec.config.nt, 64u);
  EXPECT_EQ(spec.config.k, 3u);
  EXPECT_EQ(spec.config.n_rf, 8u);
  EXPECT_EQ(spec.config.mod_order, 8u);
  EXPECT_EQ(spec.config.snr_db_points, std::vector<double>{-2.5});
  EXPECT_EQ(spec.config.n_rf_points, (std::vector<std::size_t>{4, 8, 16}));
  EXPECT_EQ(spec.config.symbols_per_channel, 7u);
  EXPECT_EQ(spec.config.channel_realizations, 9u);
  EXPECT_EQ(spec.config.master_seed, 18446744073709551615ull);
  EXPECT_EQ(spec.config.schemes, (std::vector<Scheme>{Scheme::kZfFullyDigital, Scheme::kCiOneBit}));
  EXPECT_EQ(spec.output_path, fs::path("out/x.csv"));
  EXPECT_TRUE(spec.emit_plot_series);
}

std::pair<std::string, std::size_t> error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return {e.field(), e.line()};
  }
  return {"<none>", 0};
}

TEST(ParseConfig, NrfAboveNtNamesConstraint) {
  try {
    parse_config_text("nt = 128\nn_rf = 256\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "n_rf");
    EXPECT_NE(std::string(e.what()).find("nt >= n_rf"), std::string::npos) << e.what();
  }
}

TEST(ParseConfig, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_of("nt = 16\nthis line is wrong\n"), std::make_pair(std::string("syntax"), std::size_t{2}));
  EXPECT_EQ(error_of("\n\nbogus = 1\n"), std::make_pair(std::string("bogus"), std::size_t{3}));
  EXPECT_EQ(error_of("nt = -4\n"), std::make_pair(std::string("nt"), std::size_t{1}));
  EXPECT_EQ(error_of("nt = 4x\n"), std::make_pair(std::string("nt"), std::size_t{1}));
  EXPECT_EQ(error_of("snr_db_points = 1, , 2\n"), std::make_pair(std::string("snr_db_points"), std::size_t{1}));
  EXPECT_EQ(error_of("k = 2\nk = 3\n"), std::make_pair(std::string("k"), std::size_t{2}));
  EXPECT_EQ(error_of("schemes = zf-1bit, mmse\n"), std::make_pair(std::string("schemes"), std::size_t{1}));
  EXPECT_EQ(error_of("mode = ber-vs-time\n"), std::make_pair(std::string("mode"), std::size_t{1}));
  EXPECT_EQ(error_of("emit_plot_series = maybe\n"), std::make_pair(std::string("emit_plot_series"), std::size_t{1}));
  EXPECT_EQ(error_of("nt =\n"), std::make_pair(std::string("nt"), std::size_t{1}));
}

TEST(ParseConfig, ModeRequirements) {
  EXPECT_EQ(error_of("mode = ber-vs-rf\n").first, "n_rf_points");
  EXPECT_EQ(error_of("snr_db_points = 1, 1\n").first, "snr_db_points");
}

TEST(ParseConfig, MissingFile) {
  EXPECT_THROW(parse_config("/nonexistent/dir/none.cfg"), std::runtime_error);
}

TEST(SerializeConfig, RoundTrip) {
  ExperimentSpec spec;
  spec.mode = SweepMode::kBerVsRf;
  spec.config.nt = 40;
  spec.config.k = 3;
  spec.config.n_rf = 5;
  spec.config.n_rf_points = {3, 7, 40};
  spec.config.mod_order = 8;
  spec.config.snr_db_points = {-7.25, 0.1, 1.0 / 3.0};
  spec.config.symbols_per_channel = 11;
  spec.config.channel_realizations = 13;
  spec.config.master_seed = 0xdeadbeefcafeull;
  spec.config.schemes = {Scheme::kZfOneBit, Scheme::kCiOneBit};
  spec.output_path = "some dir/result.csv";
  spec.emit_plot_series = true;
  EXPECT_EQ(parse_config_text(serialize_config(spec)), spec);
  EXPECT_EQ(parse_config_text(serialize_config(ExperimentSpec{})), ExperimentSpec{});
}

TEST(RunExperiment, ThreeSnrPointsGiveThreeRows) {
  TempDir dir;
  ExperimentSpec spec = parse_config_text(kSmall);
  spec.output_path = dir.path() / "out.csv";
  run_experiment(spec);
  const std::string csv = read_file(spec.output_path);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(RunExperiment, IdenticalBytesAcrossRunsAndWorkers) {
  TempDir dir;
  ExperimentSpec spec = parse_config_text(kSmall);
  spec.config.schemes = {kAllSchemes.begin(), kAllSchemes.end()};
  spec.emit_plot_series = true;
  spec.output_path = dir.path() / "a.csv";
  run_experiment(spec, 1);
  spec.output_path = dir.path() / "b.csv";
  run_experiment(spec, 4);
  EXPECT_EQ(read_file(dir.path() / "a.csv"), read_file(dir.path() / "b.csv"));
  EXPECT_EQ(read_file(dir.path() / "a.dat"), read_file(dir.path() / "b.dat"));
}

TEST(RunExperiment, MatchesGoldenCsv) {
  TempDir dir;
  ExperimentSpec spec = parse_config(fs::path(CIPREC_TEST_DATA_DIR) / "golden.cfg");
  spec.output_path = dir.path() / "golden.csv";
  run_experiment(spec);
  EXPECT_EQ(read_file(spec.output_path), read_file(fs::path(CIPREC_TEST_DATA_DIR) / "golden.csv"));
}

TEST(RunExperiment, RowsSortedBySchemeThenSweepValue) {
  ExperimentSpec spec;
  spec.mode = SweepMode::kBerVsRf;
  spec.config.nt = 8;
  spec.config.k = 2;
  spec.config.n_rf_points = {8, 2, 4};
  spec.config.snr_db_points = {0.0};
  spec.config.schemes = {Scheme::kZfOneBit, Scheme::kCiOneBit};
  std::vector<BerRecord> recs;
  for (Scheme s : spec.config.schemes)
    for (std::size_t n : spec.config.n_rf_points) recs.push_back({s, 0.0, n, 1, 10, 1, 5, 0.1});
  std::ostringstream out;
  write_csv(out, spec, recs);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  std::vector<std::string> prefixes;
  while (std::getline(in, line)) prefixes.push_back(line.substr(0, line.find(",0,")));
  EXPECT_EQ(prefixes, (std::vector<std::string>{"ci-1bit,4,8,2,2", "ci-1bit,4,8,2,4", "ci-1bit,4,8,2,8",
                                                "zf-1bit,4,8,2,2", "zf-1bit,4,8,2,4", "zf-1bit,4,8,2,8"}));
}

TEST(RunExperiment, UnwritablePathThrowsBeforeRunning) {
  ExperimentSpec spec = parse_config_text(kSmall);
  spec.output_path = "/nonexistent/dir/out.csv";
  EXPECT_THROW(run_experiment(spec), std::runtime_error);
}

TEST(PlotSeries, OneBlockPerScheme) {
  ExperimentSpec spec = parse_config_text(kSmall);
  spec.config.schemes = {Scheme::kZfOneBit, Scheme::kZfFullyDigital};
  std::vector<BerRecord> recs;
  for (Scheme s : spec.config.schemes)
    for (double snr : spec.config.snr_db_points) recs.push_back({s, snr, 4, 1, 100, 1, 50, 0.01});
  std::ostringstream out;
  write_plot_series(out, spec, recs);
  EXPECT_EQ(out.str(),
            "# zf-1bit\n-5 1.000000e-02\n0 1.000000e-02\n5 1.000000e-02\n\n\n"
            "# zf-fd\n-5 1.000000e-02\n0 1.000000e-02\n5 1.000000e-02\n");
  EXPECT_EQ(plot_series_path("a/b.csv"), fs::path("a/b.dat"));
}

}  // namespace
}  // namespace ciprec
