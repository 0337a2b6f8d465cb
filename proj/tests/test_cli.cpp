#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rabi/cli.hpp"

using namespace rabi;
using cli::Json;

namespace {

struct Prepared {
  cli::RunConfig config;
  std::vector<cli::Violation> errors;
};

Prepared prepare(const std::string& command, const std::string& preset, const Json& file, const Json& flags) {
  Prepared p;
  const Json merged = cli::merge_layers(command, preset, file, flags, std::nullopt);
  p.config = cli::from_json(merged, p.errors);
  for (auto& v : cli::validate(p.config)) p.errors.push_back(v);
  return p;
}

cli::Output run(const std::string& command, const std::string& preset, const Json& flags) {
  auto p = prepare(command, preset, Json::object(), flags);
  EXPECT_TRUE(p.errors.empty()) << (p.errors.empty() ? "" : p.errors[0].path + ": " + p.errors[0].message);
  return cli::execute(p.config);
}

bool has_path(const std::vector<cli::Violation>& v, const std::string& path) {
  for (const auto& x : v)
    if (x.path == path) return true;
  return false;
}

Json json_body(const std::string& text) { return Json::parse(text); }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_main(std::vector<std::string> args) {
  args.insert(args.begin(), "rabi_spectra");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST(Validate, ZeroStepFlagsGridField) {
  const auto p = prepare("spectrum", "fig3", Json::object(), Json{{"g1_grid", {{"start", 0.1}, {"stop", 1}, {"step", 0}}}});
  EXPECT_TRUE(has_path(p.errors, "g1_grid.step"));
}

TEST(Validate, NegativeOmegaCitesModelParams) {
  const auto p = prepare("design", "", Json::object(), Json{{"omega", -1.0}, {"delta2", 2.0}, {"g2", 0.7}, {"g1", 0.9}});
  ASSERT_TRUE(has_path(p.errors, "omega"));
  EXPECT_NE(p.errors[0].message.find("ModelParams"), std::string::npos);
}

TEST(Validate, PresetsAreClean) {
  for (const auto& [name, body] : cli::presets()) {
    const auto p = prepare(body["command"].get<std::string>(), name, Json::object(), Json::object());
    EXPECT_TRUE(p.errors.empty()) << name;
  }
}

TEST(Validate, ListsEveryViolation) {
  const auto p = prepare("design", "", Json::object(), Json{{"omega", -1.0}, {"bogus", 1}, {"format", "xml"}});
  EXPECT_TRUE(has_path(p.errors, "omega"));
  EXPECT_TRUE(has_path(p.errors, "bogus"));
  EXPECT_TRUE(has_path(p.errors, "format"));
  EXPECT_TRUE(has_path(p.errors, "delta2"));
}

TEST(Validate, PresetCommandMismatch) {
  const auto p = prepare("design", "fig3", Json::object(), Json::object());
  EXPECT_TRUE(has_path(p.errors, "preset"));
}

TEST(Validate, WrongTypes) {
  const auto p = prepare("design", "", Json::object(), Json{{"omega", "one"}, {"n_max", 2.5}});
  EXPECT_TRUE(has_path(p.errors, "omega"));
  EXPECT_TRUE(has_path(p.errors, "n_max"));
}

TEST(GridText, RangeAndList) {
  const auto a = cli::parse_grid_text("0.1:0.3:0.1");
  ASSERT_TRUE(a);
  EXPECT_EQ((*a)["start"], 0.1);
  EXPECT_EQ((*a)["step"], 0.1);
  const auto b = cli::parse_grid_text("1,1.5,2");
  ASSERT_TRUE(b);
  EXPECT_EQ(b->size(), 3u);
  EXPECT_FALSE(cli::parse_grid_text("a:b"));
  cli::GridSpec g;
  g.ranged = true;
  g.start = 0.1, g.stop = 1.0, g.step = 0.05;
  const auto v = cli::expand(g);
  ASSERT_EQ(v.size(), 19u);
  EXPECT_DOUBLE_EQ(v.back(), 1.0);
}

TEST(Execute, LambdaClosedForm) {
  auto p = prepare("lambda", "", Json::object(), Json{{"omega", 1.0}, {"delta2", 0.0}, {"g2", 0.5}, {"format", "json"}});
  ASSERT_TRUE(p.errors.empty());
  const auto o = cli::execute(p.config);
  ASSERT_EQ(o.status, 0);
  const Json j = json_body(o.text);
  ASSERT_EQ(j["rows"].size(), 1u);
  EXPECT_EQ(j["rows"][0]["qubit"], 2);
  EXPECT_NEAR(j["rows"][0]["lambda"].get<double>(), -0.5, 1e-12);
}

TEST(Execute, DesignJson) {
  const auto o = run("design", "reference-point", Json{{"format", "json"}});
  ASSERT_EQ(o.status, 0);
  const Json j = json_body(o.text);
  const auto d = design_resonant(1, 2, 0.7, 0.9);
  EXPECT_EQ(j["design"]["lambda1"].get<double>(), d.lambda1);
  EXPECT_EQ(j["design"]["lambda2"].get<double>(), d.lambda2);
  EXPECT_EQ(j["design"]["delta1"].get<double>(), d.delta1);
  EXPECT_EQ(j["header"]["artifact"], "rabi_spectra");
  EXPECT_EQ(j["header"]["version"], std::string(kVersion));
  EXPECT_EQ(j["header"]["config"]["preset"], "reference-point");
}

TEST(Execute, NumericalFailureGivesStatusTwoAndRecord) {
  const auto o = run("design", "", Json{{"omega", 1.0}, {"delta2", 2.0}, {"g2", 5.0}, {"g1", 0.9}});
  EXPECT_EQ(o.status, 2);
  const Json j = json_body(o.text);
  EXPECT_EQ(j["error"]["kind"], "Singular");
  EXPECT_TRUE(j.contains("header"));
  const auto z = run("design", "", Json{{"omega", 1.0}, {"delta2", 2.0}, {"g2", 0.7}, {"g1", 0.0}});
  EXPECT_EQ(z.status, 2);
  EXPECT_EQ(json_body(z.text)["error"]["kind"], "DegenerateDesign");
}

TEST(Execute, SweepFailuresDoNotAbort) {
  const auto o = run("scan-window", "", Json{{"omega_grid", {1.0}}, {"delta2_grid", {2.0}}, {"g2_grid", {0.5, 5.0}}});
  EXPECT_EQ(o.status, 0);
  EXPECT_NE(o.text.find("Singular"), std::string::npos);
}

TEST(Precedence, FlagsOverFileOverPreset) {
  const Json file{{"g2", 0.6}, {"g1", 0.8}};
  auto p = prepare("design", "reference-point", file, Json{{"g1", 0.5}});
  ASSERT_TRUE(p.errors.empty());
  EXPECT_EQ(*p.config.omega, 1.0);
  EXPECT_EQ(*p.config.g2, 0.6);
  EXPECT_EQ(*p.config.g1, 0.5);
}

TEST(Csv, HeaderLineAndLineEndings) {
  const auto o = run("scan-window", "fig1a", Json::object());
  ASSERT_EQ(o.status, 0);
  EXPECT_EQ(o.text.find('\r'), std::string::npos);
  ASSERT_EQ(o.text.back(), '\n');
  const auto first_nl = o.text.find('\n');
  const std::string first = o.text.substr(0, first_nl);
  ASSERT_EQ(first.rfind("# ", 0), 0u);
  const Json header = Json::parse(first.substr(2));
  EXPECT_EQ(header["artifact"], "rabi_spectra");
  EXPECT_FALSE(header["config"].contains("jobs"));
  const auto second_nl = o.text.find('\n', first_nl + 1);
  EXPECT_EQ(o.text.substr(first_nl + 1, second_nl - first_nl - 1),
            "omega,delta2,g2,g1,lambda1,lambda2,delta1,in_window,error");
  std::size_t lines = 0;
  for (char ch : o.text) lines += ch == '\n';
  EXPECT_EQ(lines, 2u + 4u * 19u);
}

TEST(Csv, NumbersUseSeventeenDigits) {
  EXPECT_EQ(io::format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_number(1.0), "1");
  EXPECT_EQ(io::format_number(-0.5), "-0.5");
}

TEST(Determinism, JobsDoNotChangeBytes) {
  for (const char* preset : {"fig1a", "fig2b", "fig3"}) {
    const std::string cmd = cli::presets().at(preset)["command"];
    const auto a = run(cmd, preset, Json{{"jobs", 1}});
    const auto b = run(cmd, preset, Json{{"jobs", 8}});
    const auto c = run(cmd, preset, Json{{"jobs", 8}});
    EXPECT_EQ(a.text, b.text) << preset;
    EXPECT_EQ(b.text, c.text) << preset;
  }
}

TEST(Main, WritesOutputFileAndExitCodes) {
  const auto dir = std::filesystem::temp_directory_path() / "rabi_cli_test";
  std::filesystem::create_directories(dir);
  const auto out = dir / "design.json";
  EXPECT_EQ(run_main({"design", "--omega", "1.0", "--delta2", "2.0", "--g2", "0.7", "--g1", "0.9", "--format", "json",
                      "--out", out.string()}),
            0);
  const Json j = Json::parse(read_file(out));
  EXPECT_TRUE(j["design"].contains("lambda1"));
  EXPECT_FALSE(j["header"]["config"].contains("out"));

  EXPECT_EQ(run_main({"design", "--omega", "-1", "--delta2", "2.0", "--g2", "0.7", "--g1", "0.9"}), 1);
  const auto err = dir / "err.json";
  EXPECT_EQ(run_main({"design", "--omega", "1", "--delta2", "2.0", "--g2", "5", "--g1", "0.9", "--out", err.string()}),
            2);
  EXPECT_EQ(Json::parse(read_file(err))["error"]["kind"], "Singular");

  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"omega": 1.0, "delta2": 2.0, "g2": 0.7, "g1": 0.9, "format": "json"})";
  const auto out2 = dir / "design2.json";
  EXPECT_EQ(run_main({"design", "--config", cfg.string(), "--g1", "0.5", "--out", out2.string()}), 0);
  EXPECT_EQ(Json::parse(read_file(out2))["design"]["g1"], 0.5);

  const auto fig = dir / "fig1a.csv";
  EXPECT_EQ(run_main({"scan-window", "--fig", "1a", "--out", fig.string()}), 0);
  EXPECT_EQ(read_file(fig), run("scan-window", "fig1a", Json::object()).text);
  std::filesystem::remove_all(dir);
}
