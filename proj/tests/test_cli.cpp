#include "witnesskit/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

using namespace witnesskit;
using namespace witnesskit::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig make(Command c, int d, const std::string& alpha) {
  RunConfig cfg;
  cfg.command = c;
  cfg.d = d;
  if (!alpha.empty()) cfg.alpha = parse_alpha(alpha);
  return cfg;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(cli, parse_alpha_single_and_range) {
  const AlphaRange one = parse_alpha("0.7");
  EXPECT_EQ(one.values(), std::vector<double>{0.7});
  const std::vector<double> grid = parse_alpha("0.2:1.0:0.1").values();
  ASSERT_EQ(grid.size(), 9u);
  EXPECT_NEAR(grid.back(), 1.0, 1e-12);
  EXPECT_EQ(parse_alpha("0:1:0.4").values().size(), 3u);  // 0, 0.4, 0.8
  EXPECT_EQ(parse_alpha("0:1:0.45").values().size(), 3u);  // 0, 0.45, 0.9
}

TEST(cli, parse_alpha_errors) {
  EXPECT_THROW(parse_alpha("abc"), DomainError);
  EXPECT_THROW(parse_alpha("0:1"), DomainError);
  EXPECT_THROW(parse_alpha("0:1:0"), DomainError);
  EXPECT_THROW(parse_alpha("0:1:-0.1"), DomainError);
  EXPECT_THROW(parse_alpha("1:0:0.1"), DomainError);
}

TEST(cli, iso_sweep_csv) {
  const Outcome o = invoke(make(Command::IsoSweep, 2, "0.2:1.0:0.2"));
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const auto ls = lines(o.out);
  ASSERT_EQ(ls.size(), 6u);
  EXPECT_EQ(ls[0], kMeasureCsvHeader);
  EXPECT_EQ(ls[0], "d,alpha,D_closed,D_numeric,B,discrepancy,gap,iters");
  for (std::size_t i = 1; i < ls.size(); ++i) EXPECT_EQ(std::count(ls[i].begin(), ls[i].end(), ','), 7) << ls[i];
  EXPECT_EQ(o.out.find('\r'), std::string::npos);
}

TEST(cli, bnt_row_values) {
  const Outcome o = invoke(make(Command::Bnt, 3, "1.0"));
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const auto ls = lines(o.out);
  ASSERT_EQ(ls.size(), 2u);
  std::istringstream row(ls[1]);
  std::vector<std::string> cells;
  for (std::string c; std::getline(row, c, ',');) cells.push_back(c);
  ASSERT_EQ(cells.size(), 8u);
  EXPECT_EQ(cells[0], "3");
  EXPECT_NEAR(std::stod(cells[2]), std::sqrt(2.0) / 2.0, 1e-12);
  EXPECT_NEAR(std::stod(cells[3]), std::sqrt(2.0) / 2.0, 1e-4);
  EXPECT_NEAR(std::stod(cells[4]), std::sqrt(2.0) / 2.0, 1e-4);
}

TEST(cli, bnt_deterministic_in_process) {
  const RunConfig cfg = make(Command::Bnt, 3, "1.0");
  EXPECT_EQ(invoke(cfg).out, invoke(cfg).out);
}

TEST(cli, gamma_signs_output) {
  EXPECT_EQ(invoke(make(Command::GammaSigns, 2, "")).out, "+ - +\n");
  EXPECT_EQ(invoke(make(Command::GammaSigns, 3, "")).out, "+ - + + - + - +\n");
  RunConfig j = make(Command::GammaSigns, 2, "");
  j.format = Format::Json;
  const nlohmann::json parsed = nlohmann::json::parse(invoke(j).out);
  EXPECT_EQ(parsed.at("signs"), (std::vector<int>{1, -1, 1}));
}

TEST(cli, witness_check_rows) {
  RunConfig cfg = make(Command::WitnessCheck, 2, "0.8");
  Outcome o = invoke(cfg);
  ASSERT_EQ(o.code, kExitOk) << o.err;
  auto ls = lines(o.out);
  EXPECT_EQ(ls[0], "d,alpha,guess_alpha,ent_expectation,sep_minimum,is_witness,is_optimal");
  EXPECT_NE(ls[1].find(",true,true"), std::string::npos) << ls[1];

  cfg.guess_alpha = 0.0;
  o = invoke(cfg);
  ls = lines(o.out);
  EXPECT_NE(ls[1].find(",false,false"), std::string::npos) << ls[1];
}

TEST(cli, chsh_scan_rows) {
  const Outcome o = invoke(make(Command::ChshScan, 2, "0.5:1.0:0.25"));
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const auto ls = lines(o.out);
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[0], "alpha,chsh_max,chsh_closed,chsh_violated,B_closed,gbi_violated");
  EXPECT_NE(ls[1].find("false"), std::string::npos);  // 0.5 < 1/sqrt(2)
  EXPECT_NE(ls[3].find("true"), std::string::npos);
}

TEST(cli, exit_codes) {
  Outcome o = invoke(make(Command::Measure, 2, "2.0"));
  EXPECT_EQ(o.code, kExitDomain);
  EXPECT_TRUE(o.out.empty());
  EXPECT_EQ(std::count(o.err.begin(), o.err.end(), '\n'), 1);

  o = invoke(make(Command::Bnt, 2, "0.2"));
  EXPECT_EQ(o.code, kExitDomain);

  o = invoke(make(Command::ChshScan, 3, "0.5"));
  EXPECT_EQ(o.code, kExitDomain);

  RunConfig tight = make(Command::Measure, 3, "0.9");
  tight.projection.max_outer_iters = 3;
  o = invoke(tight);
  EXPECT_EQ(o.code, kExitNoConvergence);
  EXPECT_NE(o.err.find("converged=false"), std::string::npos);
}

TEST(cli, json_format_measure) {
  RunConfig cfg = make(Command::Measure, 2, "0.8");
  cfg.format = Format::Json;
  const Outcome o = invoke(cfg);
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const nlohmann::json j = nlohmann::json::parse(o.out);
  ASSERT_EQ(j.at("rows").size(), 1u);
  EXPECT_NEAR(j["rows"][0].at("D_numeric").get<double>(), std::sqrt(3.0) / 2.0 * (0.8 - 1.0 / 3.0), 1e-4);
  EXPECT_TRUE(j["rows"][0].at("converged").get<bool>());
}

TEST(cli, state_file_input) {
  const auto path = std::filesystem::temp_directory_path() / "witnesskit_test_state.json";
  {
    std::ofstream f(path);
    f << to_json(isotropic({2, 0.8})).dump();
  }
  RunConfig cfg = make(Command::Measure, 2, "");
  cfg.state_path = path.string();
  const Outcome o = invoke(cfg);
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(lines(o.out).size(), 2u);
  std::filesystem::remove(path);

  cfg.state_path = "/nonexistent/state.json";
  EXPECT_EQ(invoke(cfg).code, kExitDomain);
}

TEST(cli, default_seed_from_environment) {
  ::unsetenv("WITNESSKIT_SEED");
  EXPECT_EQ(default_seed(), 0u);
  ::setenv("WITNESSKIT_SEED", "1234", 1);
  EXPECT_EQ(default_seed(), 1234u);
  ::setenv("WITNESSKIT_SEED", "12x", 1);
  EXPECT_EQ(default_seed(), 0u);
  ::unsetenv("WITNESSKIT_SEED");
}

TEST(cli, validate_rejects_out_of_range_grid) {
  RunConfig cfg = make(Command::IsoSweep, 2, "0.5:1.2:0.1");
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg.alpha = parse_alpha("-0.5");
  EXPECT_THROW(cfg.validate(), DomainError);
}
