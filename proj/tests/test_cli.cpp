// Command-line front end: argument parsing, config-file merge, CSV schemas,
// SVG rendering, output staging, and the figure presets.
#include <gtest/gtest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <rissm/cli.hpp>

namespace {

namespace fs = std::filesystem;

// Runs the CLI in-process with stderr captured.
int run_cli(const std::vector<std::string>& args, std::string* err = nullptr) {
  std::vector<const char*> argv;
  argv.push_back("rissm");
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream captured;
  std::streambuf* old = std::cerr.rdbuf(captured.rdbuf());
  const int rc =
      rissm::cli::run(static_cast<int>(argv.size()), argv.data());
  std::cerr.rdbuf(old);
  if (err) *err = captured.str();
  return rc;
}

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  const fs::path p = fs::temp_directory_path() /
                     ("rissm_cli_" + std::to_string(::getpid()) + "_" + tag +
                      "_" + std::to_string(counter++));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  EXPECT_TRUE(in.good()) << "missing file " << p;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

TEST(Parsing, TrialCounts) {
  EXPECT_EQ(rissm::cli::parse_trials("1e6"), 1000000u);
  EXPECT_EQ(rissm::cli::parse_trials("250"), 250u);
  EXPECT_EQ(rissm::cli::parse_trials("2.5e3"), 2500u);
  EXPECT_THROW(rissm::cli::parse_trials("0"), std::invalid_argument);
  EXPECT_THROW(rissm::cli::parse_trials("2.5"), std::invalid_argument);
  EXPECT_THROW(rissm::cli::parse_trials("ten"), std::invalid_argument);
  EXPECT_THROW(rissm::cli::parse_trials("1e6x"), std::invalid_argument);
}

TEST(Parsing, SnrGrids) {
  const auto grid = rissm::cli::parse_snr_grid("0:2:30");
  ASSERT_EQ(grid.size(), 16u);  // inclusive endpoints
  EXPECT_DOUBLE_EQ(grid.front(), 0.0);
  EXPECT_DOUBLE_EQ(grid.back(), 30.0);

  const auto down = rissm::cli::parse_snr_grid("-30:1:-16");
  ASSERT_EQ(down.size(), 15u);
  EXPECT_DOUBLE_EQ(down.front(), -30.0);
  EXPECT_DOUBLE_EQ(down.back(), -16.0);

  const auto list = rissm::cli::parse_snr_grid("-5,-2.5,0");
  ASSERT_EQ(list.size(), 3u);
  EXPECT_DOUBLE_EQ(list[1], -2.5);

  ASSERT_EQ(rissm::cli::parse_snr_grid("7").size(), 1u);

  EXPECT_THROW(rissm::cli::parse_snr_grid("0:0:10"), std::invalid_argument);
  EXPECT_THROW(rissm::cli::parse_snr_grid("10:2:0"), std::invalid_argument);
  EXPECT_THROW(rissm::cli::parse_snr_grid("1:2"), std::invalid_argument);
  EXPECT_THROW(rissm::cli::parse_snr_grid("a:b:c"), std::invalid_argument);
  EXPECT_THROW(rissm::cli::parse_snr_grid(""), std::invalid_argument);
}

TEST(CsvHelpers, FieldQuotingAndEmptyTables) {
  EXPECT_EQ(rissm::csv_field("plain"), "plain");
  EXPECT_EQ(rissm::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(rissm::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_THROW(rissm::render_csv("h1,h2", {}), std::invalid_argument);
}

TEST(CsvHelpers, ShortestRoundTripDoubles) {
  for (const double v : {0.1, -30.0, 1e-7, 6206.5, 1.0 / 3.0, 2.5e-12}) {
    const std::string s = rissm::format_double(v);
    EXPECT_DOUBLE_EQ(std::strtod(s.c_str(), nullptr), v) << s;
  }
  EXPECT_EQ(rissm::format_double(-30.0), "-30");
}

TEST(Cli, SimulateWritesSortedCsvWithExactHeader) {
  const fs::path dir = fresh_dir("sim");
  const int rc = run_cli({"simulate", "--L", "8", "--nt", "2", "--M", "2",
                          "--mod", "psk", "--snr", "-10,-14", "--trials", "500",
                          "--seed", "7", "--detectors", "ml,gd", "--out",
                          dir.string()});
  EXPECT_EQ(rc, 0);
  const auto rows = lines_of(slurp(dir / "simulate.csv"));
  ASSERT_EQ(rows.size(), 5u);  // header + 2 snr x 2 detectors
  EXPECT_EQ(rows[0], "snr_db,detector,ber,bit_errors,bits_sent,trials");
  // Sorted by snr then detector name: -14 before -10, gd before ml.
  EXPECT_EQ(rows[1].rfind("-14,gd,", 0), 0u);
  EXPECT_EQ(rows[2].rfind("-14,ml,", 0), 0u);
  EXPECT_EQ(rows[3].rfind("-10,gd,", 0), 0u);
  EXPECT_EQ(rows[4].rfind("-10,ml,", 0), 0u);
  for (const auto& row : {rows[1], rows[2], rows[3], rows[4]}) {
    std::istringstream ss(row);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    ASSERT_EQ(fields.size(), 6u);
    EXPECT_EQ(fields[4], "1000");  // bits_sent = 500 trials x 2 bits
    EXPECT_EQ(fields[5], "500");
  }
}

TEST(Cli, SimulateIsByteDeterministic) {
  const fs::path d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
  const std::vector<std::string> args = {
      "simulate", "--L", "16", "--nt", "2", "--M", "4", "--mod", "psk",
      "--snr", "-18:2:-12", "--trials", "2000", "--seed", "11",
      "--detectors", "ml,tsml,gd"};
  auto with_out = [&](const fs::path& d) {
    auto a = args;
    a.push_back("--out");
    a.push_back(d.string());
    return a;
  };
  ASSERT_EQ(run_cli(with_out(d1)), 0);
  ASSERT_EQ(run_cli(with_out(d2)), 0);
  EXPECT_EQ(slurp(d1 / "simulate.csv"), slurp(d2 / "simulate.csv"));
}

TEST(Cli, RejectsNonPowerOfTwoModulationOrder) {
  std::string err;
  const int rc = run_cli({"simulate", "--L", "8", "--M", "3", "--snr", "-10",
                          "--trials", "100"},
                         &err);
  EXPECT_NE(rc, 0);
  EXPECT_NE(err.find("M must be a power of two"), std::string::npos) << err;
}

TEST(Cli, SimulateRequiresSnrGrid) {
  std::string err;
  const fs::path dir = fresh_dir("nosnr");
  const int rc =
      run_cli({"simulate", "--trials", "100", "--out", dir.string()}, &err);
  EXPECT_NE(rc, 0);
  EXPECT_NE(err.find("--snr"), std::string::npos) << err;
}

TEST(Cli, UnknownCommandAndDetectorAreRejected) {
  std::string err;
  EXPECT_NE(run_cli({"simulte", "--snr", "-10"}, &err), 0);
  const fs::path dir = fresh_dir("baddet");
  EXPECT_NE(run_cli({"simulate", "--snr", "-10", "--trials", "50",
                     "--detectors", "ml,zf", "--out", dir.string()},
                    &err),
            0);
  EXPECT_NE(err.find("unknown detector 'zf'"), std::string::npos) << err;
}

TEST(Cli, ConfigFileMergesAndFlagsWin) {
  const fs::path dir = fresh_dir("cfg");
  const fs::path cfg_path = dir / "run.cfg";
  {
    std::ofstream out(cfg_path);
    out << "L = 7\nnt = 2\nM = 2\n";
  }
  // File alone supplies L = 7.
  ASSERT_EQ(run_cli({"complexity", "--config", cfg_path.string(), "--out",
                     dir.string()}),
            0);
  EXPECT_NE(slurp(dir / "complexity.csv").find("ml,7,2,2,"), std::string::npos);
  // An explicit flag beats the file.
  ASSERT_EQ(run_cli({"complexity", "--config", cfg_path.string(), "--L", "9",
                     "--out", dir.string()}),
            0);
  EXPECT_NE(slurp(dir / "complexity.csv").find("ml,9,2,2,"), std::string::npos);
}

TEST(Cli, EnvVarSelectsOutputDirectory) {
  const fs::path dir = fresh_dir("env");
  ::setenv("RISSM_OUT_DIR", dir.c_str(), 1);
  const int rc = run_cli({"complexity", "--L", "100", "--nt", "2", "--M", "2"});
  ::unsetenv("RISSM_OUT_DIR");
  ASSERT_EQ(rc, 0);
  EXPECT_TRUE(fs::exists(dir / "complexity.csv"));
}

TEST(Cli, ComplexityTableExactRows) {
  const fs::path dir = fresh_dir("cx");
  ASSERT_EQ(run_cli({"complexity", "--L", "100", "--nt", "2", "--M", "2",
                     "--out", dir.string()}),
            0);
  const auto rows = lines_of(slurp(dir / "complexity.csv"));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "detector,L,nt,M,mults,adds");
  EXPECT_EQ(rows[1], "gd,100,2,2,614,404");
  EXPECT_EQ(rows[2], "ml,100,2,2,1220,804");
  EXPECT_EQ(rows[3], "tsml,100,2,2,1220,804");
}

TEST(Cli, PowerProfileUsesOneBasedAntennas) {
  const fs::path dir = fresh_dir("pp");
  ASSERT_EQ(run_cli({"power-profile", "--L", "16", "--nt", "4", "--antenna",
                     "2", "--trials", "500", "--seed", "3", "--out",
                     dir.string()}),
            0);
  const auto rows = lines_of(slurp(dir / "power_profile.csv"));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "antenna,mean_power");
  for (unsigned n = 0; n < 4; ++n)
    EXPECT_EQ(rows[n + 1].rfind(std::to_string(n + 1) + ",", 0), 0u);
  // Out-of-range target antenna.
  EXPECT_NE(run_cli({"power-profile", "--L", "16", "--nt", "4", "--antenna",
                     "5", "--trials", "100", "--out", dir.string()}),
            0);
}

TEST(Cli, AnalyzeAndCapacityHeaders) {
  const fs::path dir = fresh_dir("ac");
  ASSERT_EQ(run_cli({"analyze", "--L", "100", "--nt", "2", "--M", "2", "--snr",
                     "-30:5:-20", "--out", dir.string()}),
            0);
  const auto arows = lines_of(slurp(dir / "analyze.csv"));
  ASSERT_EQ(arows.size(), 4u);
  EXPECT_EQ(arows[0], "snr_db,abep_bound");

  ASSERT_EQ(run_cli({"capacity", "--L", "100", "--nt", "2", "--M", "2", "--snr",
                     "-40,-20,0", "--out", dir.string()}),
            0);
  const auto crows = lines_of(slurp(dir / "capacity.csv"));
  ASSERT_EQ(crows.size(), 4u);
  EXPECT_EQ(crows[0], "snr_db,ec_bpcu");
}

TEST(Cli, PlotsAreSelfContainedSvg) {
  const fs::path dir = fresh_dir("svg");
  std::string err;
  ASSERT_EQ(run_cli({"simulate", "--L", "32", "--nt", "2", "--M", "2", "--snr",
                     "-26,-22,-18", "--trials", "400", "--detectors", "ml,gd",
                     "--plot", "--out", dir.string()},
                    &err),
            0);
  const std::string svg = slurp(dir / "simulate.svg");
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("viewBox=\"0 0 800 600\""), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find(">ml<"), std::string::npos);  // legend entries
  EXPECT_NE(svg.find(">gd<"), std::string::npos);
  EXPECT_EQ(svg.find("http://"), svg.find("http://www.w3.org"));  // no other refs
}

TEST(Cli, LogPlotsDropZeroPointsWithANote) {
  const fs::path dir = fresh_dir("zeros");
  std::string err;
  ASSERT_EQ(run_cli({"simulate", "--L", "100", "--nt", "2", "--M", "2", "--snr",
                     "-30,-28,10,12", "--trials", "300", "--detectors", "ml",
                     "--plot", "--out", dir.string()},
                    &err),
            0);
  EXPECT_NE(err.find("omitted 2"), std::string::npos) << err;
  EXPECT_TRUE(fs::exists(dir / "simulate.svg"));
}

TEST(Cli, FailedPlotLeavesNoPartialOutputs) {
  // A single sweep point cannot form a polyline; the run must fail as a
  // whole and write neither the SVG nor the CSV.
  const fs::path dir = fresh_dir("stage");
  std::string err;
  EXPECT_NE(run_cli({"simulate", "--L", "16", "--nt", "2", "--M", "2", "--snr",
                     "-20", "--trials", "200", "--plot", "--out", dir.string()},
                    &err),
            0);
  EXPECT_NE(err.find("fewer than 2"), std::string::npos) << err;
  EXPECT_FALSE(fs::exists(dir / "simulate.csv"));
  EXPECT_FALSE(fs::exists(dir / "simulate.svg"));
}

TEST(Cli, FigurePresetWritesCurvesBoundAndPlot) {
  const fs::path dir = fresh_dir("fig4");
  ASSERT_EQ(run_cli({"figure", "--name", "fig4", "--trials", "300", "--out",
                     dir.string()}),
            0);
  EXPECT_TRUE(fs::exists(dir / "fig4_nt2m2_sim.csv"));
  EXPECT_TRUE(fs::exists(dir / "fig4_nt2m2_bound.csv"));
  EXPECT_TRUE(fs::exists(dir / "fig4.svg"));
  const auto bound = lines_of(slurp(dir / "fig4_nt2m2_bound.csv"));
  EXPECT_EQ(bound[0], "snr_db,abep_bound");
  ASSERT_EQ(bound.size(), 16u);  // -30:1:-16 inclusive
  const auto sim = lines_of(slurp(dir / "fig4_nt2m2_sim.csv"));
  EXPECT_EQ(sim.size(), 1u + 15u * 3u);  // three detectors per point
}

TEST(Cli, FigureRejectsContradictoryOverrides) {
  std::string err;
  EXPECT_NE(run_cli({"figure", "--name", "fig4", "--M", "4"}, &err), 0);
  EXPECT_NE(err.find("cannot be combined"), std::string::npos) << err;
  EXPECT_NE(run_cli({"figure", "--name", "fig99"}, &err), 0);
  EXPECT_NE(run_cli({"figure"}, &err), 0);
}

TEST(Cli, CapacityFigurePresetIsClosedForm) {
  const fs::path dir = fresh_dir("fig9");
  ASSERT_EQ(run_cli({"figure", "--name", "fig9", "--out", dir.string()}), 0);
  for (const char* stem : {"fig9_L80", "fig9_L100", "fig9_L120"})
    EXPECT_TRUE(fs::exists(dir / (std::string(stem) + ".csv")));
  EXPECT_TRUE(fs::exists(dir / "fig9.svg"));
  const auto rows = lines_of(slurp(dir / "fig9_L100.csv"));
  EXPECT_EQ(rows[0], "snr_db,ec_bpcu");
  ASSERT_EQ(rows.size(), 47u);  // -50:2:40 inclusive
}

}  // namespace
