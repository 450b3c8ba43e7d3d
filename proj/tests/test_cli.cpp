#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "mpjcm/commands.hpp"
#include "mpjcm/run_config.hpp"

using namespace mpjcm;

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<double> parse_row(const std::string& line) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const std::size_t end = std::min(line.find(',', pos), line.size());
        double v = 0.0;
        std::from_chars(line.data() + pos, line.data() + end, v);
        values.push_back(v);
        pos = end + 1;
    }
    return values;
}

RunConfig small_config() {
    RunConfig cfg;
    cfg.state = {"coherent", 2.0, 1};
    cfg.atom = {0.5, 1.0};
    cfg.model.m = 2;
    cfg.grid = {4.0, 9};
    cfg.observables = {"inversion", "mean_photon", "F1", "S2", "Re_a2"};
    return cfg;
}

int run_cli(const std::string& args, const std::string& capture = "/dev/null") {
    const std::string cmd = std::string(MPJCM_CLI) + " " + args + " >" + capture + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(FormatNumber, ShortestRoundTrip) {
    for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, 31.73}) {
        const auto text = format_number(v);
        double back = 0.0;
        std::from_chars(text.data(), text.data() + text.size(), back);
        EXPECT_EQ(back, v) << text;
    }
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(2.0), "2");
}

TEST(RunConfigParse, ReadsEveryKey) {
    const auto cfg = parse_run_config(R"({
        "state": {"kind": "kphoton", "alpha": 2.5, "k": 3},
        "atom": {"theta": 0.7, "phi": 1.2},
        "model": {"m": 3, "approach": "meha", "beta1": 0.5, "beta2": 0.25, "lambda": 2},
        "grid": {"t_max": 30, "steps": 301},
        "truncation": {"n_max": 120},
        "observables": ["F1", "S1"],
        "output": "out.csv",
        "workers": 2
    })");
    EXPECT_EQ(cfg.state.kind, "kphoton");
    EXPECT_EQ(cfg.state.alpha, 2.5);
    EXPECT_EQ(cfg.state.k, 3);
    EXPECT_EQ(cfg.atom.phi, 1.2);
    EXPECT_EQ(cfg.model.approach, "meha");
    EXPECT_EQ(cfg.model.lambda, 2.0);
    EXPECT_EQ(cfg.grid.steps, 301);
    ASSERT_TRUE(cfg.n_max.has_value());
    EXPECT_EQ(*cfg.n_max, 120);
    EXPECT_EQ(cfg.observables, (std::vector<std::string>{"F1", "S1"}));
    EXPECT_EQ(cfg.output, "out.csv");
    EXPECT_EQ(cfg.workers, 2);
    EXPECT_NO_THROW(cfg.validate());
}

TEST(RunConfigParse, AutoTruncationAndDefaults) {
    const auto cfg = parse_run_config(R"({"truncation": {"n_max": "auto"}})");
    EXPECT_FALSE(cfg.n_max.has_value());
    EXPECT_EQ(cfg.state.kind, "coherent");
}

TEST(RunConfigParse, ErrorsNameTheKey) {
    try {
        parse_run_config(R"({"model": {"m": 1, "gamma": 2}})");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("model.gamma"), std::string::npos);
    }
    EXPECT_THROW(parse_run_config(R"({"grid": {"steps": "many"}})"), ConfigError);
    EXPECT_THROW(parse_run_config(R"({"truncation": {"n_max": 2.5}})"), ConfigError);
    EXPECT_THROW(parse_run_config("{not json"), ConfigError);
}

TEST(RunConfigValidate, RejectsBadValues) {
    RunConfig cfg;
    cfg.observables = {"F9"};
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = RunConfig{};
    cfg.state.kind = "squeezed";
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = RunConfig{};
    cfg.grid.steps = 1;
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(SplitNames, IgnoresBlanks) {
    EXPECT_EQ(split_names(" F1, S1 ,,inversion"), (std::vector<std::string>{"F1", "S1", "inversion"}));
}

TEST(Simulate, MatchesGoldenFile) {
    std::ostringstream out;
    std::ostringstream err;
    ASSERT_EQ(run_simulate(small_config(), out, err), kExitOk) << err.str();
    EXPECT_EQ(out.str(), read_file(std::filesystem::path(MPJCM_GOLDEN_DIR) / "simulate_small.csv"));
}

TEST(Simulate, ColumnsEqualDirectEvaluation) {
    const auto cfg = small_config();
    std::ostringstream out;
    std::ostringstream err;
    ASSERT_EQ(run_simulate(cfg, out, err), kExitOk);
    const auto lines = lines_of(out.str());
    std::size_t header = 0;
    while (lines[header].starts_with("#")) ++header;
    EXPECT_EQ(lines[header], "T,inversion,mean_photon,F1,S2,Re_a2");
    EXPECT_NE(out.str().find("# truncation.n_max = "), std::string::npos);
    EXPECT_NE(out.str().find("# truncation.policy = auto"), std::string::npos);

    const auto field = make_field(cfg);
    for (std::size_t row = header + 1; row < lines.size(); ++row) {
        const auto v = parse_row(lines[row]);
        const auto joint = evolve(field, make_atom(cfg), make_model(cfg), v[0]);
        EXPECT_EQ(v[1], atomic_inversion(joint));
        EXPECT_EQ(v[2], mean_photon(joint));
        EXPECT_EQ(v[3], normal_fluctuations(joint).f);
        EXPECT_EQ(v[4], squared_fluctuations(joint).s);
        EXPECT_EQ(v[5], moment(joint, 2, 0).real());
    }
    EXPECT_EQ(lines.size(), header + 1 + 9);
}

TEST(Simulate, DeterministicAcrossWorkers) {
    auto cfg = small_config();
    cfg.observables = {"inversion", "Q1", "Q2", "uncertainty_product"};
    std::string reference;
    for (int workers : {1, 2, 5, 1}) {
        cfg.workers = workers;
        std::ostringstream out;
        std::ostringstream err;
        ASSERT_EQ(run_simulate(cfg, out, err), kExitOk);
        if (reference.empty()) reference = out.str();
        EXPECT_EQ(out.str(), reference) << "workers=" << workers;
    }
}

TEST(Simulate, ExitCodes) {
    auto cfg = small_config();
    cfg.observables = {"inversion", "bogus"};
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_EQ(run_simulate(cfg, out, err), kExitConfigError);
    EXPECT_NE(err.str().find("bogus"), std::string::npos);

    cfg = small_config();
    cfg.n_max = 5;
    EXPECT_EQ(run_simulate(cfg, out, err), kExitNumericBudget);
}

TEST(Predict, CoherentAlphaFive) {
    RunConfig cfg;
    cfg.model.m = 3;
    std::ostringstream out;
    std::ostringstream err;
    ASSERT_EQ(run_predict(cfg, out, err), kExitOk);
    const auto text = out.str();
    EXPECT_NE(text.find("revival_time.spacing_1 = 31.7"), std::string::npos) << text;
    EXPECT_NE(text.find("f_asymptotic.order_1 = 1.5"), std::string::npos) << text;
    EXPECT_NE(text.find("natural_phenomenon = false"), std::string::npos);
}

TEST(Predict, OrthogonalEvenSpacingFour) {
    RunConfig cfg;
    cfg.state = {"orthogonal_even", 7.0, 1};
    std::ostringstream out;
    std::ostringstream err;
    ASSERT_EQ(run_predict(cfg, out, err), kExitOk);
    const auto text = out.str();
    EXPECT_NE(text.find("natural_phenomenon = true"), std::string::npos);
    EXPECT_NE(text.find("support_spacing = 4"), std::string::npos);
    EXPECT_NE(text.find("revival_time.spacing_4 = "), std::string::npos);
    EXPECT_NE(text.find("revival_time.spacing_1_over_4 = "), std::string::npos);
}

TEST(Check, DefaultPassesCoarseStepFails) {
    RunConfig cfg;
    cfg.state.alpha = 3.0;
    cfg.model.m = 2;
    cfg.grid = {20.0, 201};
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_EQ(run_check(cfg, {}, out, err), kExitOk) << out.str();
    EXPECT_NE(out.str().find("check passed"), std::string::npos);

    CheckOptions coarse;
    coarse.dt = 0.2;
    std::ostringstream out2;
    EXPECT_EQ(run_check(cfg, coarse, out2, err), kExitCheckFailed) << out2.str();
    EXPECT_NE(out2.str().find("FAIL"), std::string::npos);
}

TEST(Check, ZeroStarkMehaPasses) {
    RunConfig cfg;
    cfg.state.alpha = 2.0;
    cfg.model.approach = "meha";
    cfg.grid = {20.0, 101};
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_EQ(run_check(cfg, {}, out, err), kExitOk) << out.str();
    EXPECT_NE(out.str().find("PASS meha_zero_stark_vs_eha"), std::string::npos);
}

TEST(Binary, ExitCodesAndFlagOverride) {
    const auto dir = std::filesystem::temp_directory_path() / "mpjcm_cli_test";
    std::filesystem::create_directories(dir);
    const auto config = dir / "run.json";
    std::ofstream(config) << R"({"state": {"alpha": 2}, "grid": {"t_max": 4, "steps": 9}, "observables": ["F1"]})";
    const auto csv = dir / "out.csv";

    EXPECT_EQ(run_cli("simulate --config " + config.string() + " --m 2 --theta 0.5 --phi 1 "
                      "--observables inversion,mean_photon,F1,S2,Re_a2 --out " + csv.string()),
              0);
    EXPECT_EQ(read_file(csv), read_file(std::filesystem::path(MPJCM_GOLDEN_DIR) / "simulate_small.csv"));

    EXPECT_EQ(run_cli("simulate --observables nonsense"), 2);
    EXPECT_EQ(run_cli("simulate --unknown-flag 1"), 2);
    EXPECT_EQ(run_cli("simulate --nmax 5"), 3);
    EXPECT_EQ(run_cli("simulate --nmax many"), 2);
    EXPECT_EQ(run_cli("predict --state orthogonal_even --alpha 7"), 0);
    EXPECT_EQ(run_cli("check --alpha 1 --t-max 5 --steps 51"), 0);
    EXPECT_EQ(run_cli("check --alpha 3 --t-max 5 --steps 51 --dt 0.2"), 1);
    EXPECT_EQ(run_cli("simulate --config " + (dir / "missing.json").string()), 2);
    std::filesystem::remove_all(dir);
}
