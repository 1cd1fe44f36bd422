#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "tiqflash/cli.hpp"
#include "tiqflash/netlist_io.hpp"
#include "tiqflash/simulator.hpp"

using namespace tiqflash;
using testing_support::read_file;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliFlow : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        dir_ = testing_support::scratch_dir("cli");
        const auto r = run_cli({"size", "-n", "6", "--vdd", "2.5", "--gain", "38.7", "-o", path("d.json")});
        ASSERT_EQ(r.code, 0) << r.err;
    }
    static std::string path(const std::string& name) { return (dir_ / name).string(); }
    static inline std::filesystem::path dir_;
};

}  // namespace

TEST(Cli, HelpForEverySubcommand) {
    const auto top = run_cli({"--help"});
    EXPECT_EQ(top.code, 0);
    for (const char* sub : {"size", "encode", "simulate", "analyze", "netlist", "plot"}) {
        EXPECT_NE(top.out.find(sub), std::string::npos) << sub;
        const auto r = run_cli({sub, "--help"});
        EXPECT_EQ(r.code, 0) << sub;
        EXPECT_NE(r.out.find("-o"), std::string::npos) << sub;
    }
    const auto size = run_cli({"size", "--help"});
    for (const char* flag : {"--bits", "--vdd", "--gain", "--preset", "--grid", "--output"}) {
        EXPECT_NE(size.out.find(flag), std::string::npos) << flag;
    }
}

TEST(Cli, OneBitIsValidationError) {
    const auto dir = testing_support::scratch_dir("cli_one_bit");
    const auto r = run_cli({"size", "-n", "1", "--vdd", "2.5", "--gain", "38.7", "-o", (dir / "d.json").string()});
    EXPECT_EQ(r.code, cli::kExitValidation);
    EXPECT_NE(r.err.find("error: resolution must be >= 2"), std::string::npos) << r.err;
    EXPECT_FALSE(std::filesystem::exists(dir / "d.json"));
}

TEST(Cli, UnknownFlagsAndMissingArgs) {
    EXPECT_EQ(run_cli({"size", "-n", "6", "--bogus"}).code, cli::kExitValidation);
    EXPECT_EQ(run_cli({"size", "--gain", "38.7", "-o", "x.json"}).code, cli::kExitValidation);
    EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitValidation);
    const auto r = run_cli({"encode", "-n", "abc"});
    EXPECT_EQ(r.code, cli::kExitValidation);
    EXPECT_EQ(r.err.rfind("error:", 0), 0u) << r.err;
}

TEST(Cli, EncodeStats) {
    const auto r = run_cli({"encode", "-n", "3", "--stats"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("depth"), std::string::npos);
    EXPECT_NE(r.out.find("2"), std::string::npos);
    EXPECT_NE(r.out.find("3"), std::string::npos);
}

TEST(Cli, EncodeGoldenFile) {
    const auto dir = testing_support::scratch_dir("cli_encode");
    const auto out = (dir / "e.fnet").string();
    ASSERT_EQ(run_cli({"encode", "-n", "3", "-o", out}).code, 0);
    EXPECT_EQ(read_file(out), read_file(TIQFLASH_TEST_DATA "/fat_tree_n3.fnet"));
}

TEST(Cli, InfeasibleGainIsComputationOrValidation) {
    const auto dir = testing_support::scratch_dir("cli_infeasible");
    const auto r = run_cli({"size", "-n", "6", "--gain", "1.0", "-o", (dir / "d.json").string()});
    EXPECT_NE(r.code, 0);
    EXPECT_EQ(r.err.rfind("error:", 0), 0u);
}

TEST(Cli, CoarseGridIsComputationError) {
    const auto dir = testing_support::scratch_dir("cli_coarse");
    const auto r = run_cli({"size", "-n", "6", "--gain", "38.7", "--grid", "1,2,1", "-o",
                            (dir / "d.json").string()});
    EXPECT_EQ(r.code, cli::kExitComputation) << r.err;
}

TEST_F(CliFlow, SizeWritesSixtyThreeDesigns) {
    const auto bank = read_design_file(path("d.json"));
    EXPECT_EQ(bank.designs.size(), 63u);
    EXPECT_EQ(bank, testing_support::default_bank(6));
}

TEST_F(CliFlow, SizeIsReproducible) {
    ASSERT_EQ(run_cli({"size", "-n", "6", "--gain", "38.7", "-o", path("d2.json")}).code, 0);
    EXPECT_EQ(read_file(path("d.json")), read_file(path("d2.json")));
}

TEST_F(CliFlow, SimulateRampAndSine) {
    ASSERT_EQ(run_cli({"simulate", "-d", path("d.json"), "--ramp", "--rate", "1e5", "--duration", "0.01", "-o",
                       path("ramp.csv")})
                  .code,
              0);
    std::ifstream in(path("ramp.csv"));
    const auto rows = read_trace_csv(in);
    EXPECT_EQ(rows.front().code, 0u);
    EXPECT_EQ(rows.back().code, 63u);

    const auto r = run_cli({"simulate", "-d", path("d.json"), "--sine", "1e4,0.03,1.265", "--rate", "1e6",
                            "--duration", "1e-4", "-o", path("sine.csv")});
    EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(CliFlow, SimulateRejectsConflictingAndOutOfRangeStimulus) {
    EXPECT_EQ(run_cli({"simulate", "-d", path("d.json"), "--sine", "1e4,0.03,1.265", "--ramp", "--rate", "1e6",
                       "--duration", "1e-4", "-o", path("x.csv")})
                  .code,
              cli::kExitValidation);
    EXPECT_EQ(run_cli({"simulate", "-d", path("d.json"), "--sine", "1e4,2.0,1.265", "--rate", "1e6",
                       "--duration", "1e-4", "-o", path("x.csv")})
                  .code,
              cli::kExitValidation);
    EXPECT_EQ(run_cli({"simulate", "-d", path("missing.json"), "--rate", "1e6", "--duration", "1e-4", "-o",
                       path("x.csv")})
                  .code,
              cli::kExitValidation);
}

TEST_F(CliFlow, AnalyzeAndPlot) {
    ASSERT_EQ(run_cli({"analyze", "-d", path("d.json"), "--dnl", "--drift", "-20,25,120", "-o", path("r.json")})
                  .code,
              0);
    const auto report = nlohmann::json::parse(read_file(path("r.json")));
    EXPECT_TRUE(report.contains("linearity"));
    EXPECT_TRUE(report.contains("drift"));
    EXPECT_EQ(report["drift"]["entries"][1]["max_ref_shift"].get<double>(), 0.0);

    EXPECT_EQ(run_cli({"analyze", "-d", path("d.json"), "--dnl", "-o", path("lin.csv")}).code, 0);
    EXPECT_EQ(read_file(path("lin.csv")).rfind("index,v_ref_V,dnl_lsb,inl_lsb\n", 0), 0u);

    ASSERT_EQ(run_cli({"simulate", "-d", path("d.json"), "--rate", "1e4", "--duration", "0.01", "-o",
                       path("p.csv")})
                  .code,
              0);
    for (auto [input, kind] : {std::pair{"p.csv", "staircase"}, {"r.json", "dnl"}, {"r.json", "drift"}}) {
        const auto svg = path(std::string(kind) + ".svg");
        ASSERT_EQ(run_cli({"plot", "-i", path(input), "--kind", kind, "-o", svg}).code, 0) << kind;
        EXPECT_EQ(read_file(svg).rfind("<svg", 0), 0u);
    }
    EXPECT_EQ(run_cli({"plot", "-i", path("r.json"), "--kind", "pie", "-o", path("x.svg")}).code,
              cli::kExitValidation);
}

TEST_F(CliFlow, NetlistDeterministic) {
    ASSERT_EQ(run_cli({"netlist", "-d", path("d.json"), "--boosters", "-o", path("a.cir")}).code, 0);
    ASSERT_EQ(run_cli({"netlist", "-d", path("d.json"), "--boosters", "-o", path("b.cir")}).code, 0);
    EXPECT_EQ(read_file(path("a.cir")), read_file(path("b.cir")));
    EXPECT_EQ(run_cli({"netlist", "-d", path("d.json"), "--model-card", "generic", "-o", path("m.cir")}).code, 0);
    EXPECT_NE(read_file(path("m.cir")).find(".MODEL"), std::string::npos);
}

TEST_F(CliFlow, ConfigFileWithCommandLineOverride) {
    std::ofstream(path("cfg.json")) << R"({"size": {"bits": 4, "gain": 38.7, "output": ")"
                                    << path("cfg_design.json") << R"("}})";
    ASSERT_EQ(run_cli({"--config", path("cfg.json"), "size"}).code, 0);
    EXPECT_EQ(read_design_file(path("cfg_design.json")).n_bits, 4);
    ASSERT_EQ(run_cli({"--config", path("cfg.json"), "size", "-n", "5"}).code, 0);
    EXPECT_EQ(read_design_file(path("cfg_design.json")).n_bits, 5);
}
