// Copyright 2026 The Bighead Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bighead/analytics.hpp"
#include "bighead/cli.hpp"
#include "bighead/hash.hpp"
#include "bighead/plan.hpp"
#include "bighead/table.hpp"
#include "support.hpp"

namespace bighead {
namespace {

namespace fs = std::filesystem;

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "bighead");
    std::vector<const char *> argv;
    for (const auto &a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

AmplitudeTable load_table(const fs::path &p) {
    std::ifstream in(p);
    return read_table_tsv(in);
}

class Cli : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("bighead_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override {
        fs::remove_all(dir_);
    }
    std::string path(const std::string &name) const {
        return (dir_ / name).string();
    }
    std::string write(const std::string &name, const std::string &text) const {
        std::ofstream(dir_ / name) << text;
        return path(name);
    }
    fs::path dir_;
};

TEST_F(Cli, VersionAndUsage) {
    const CliResult v = cli({"--version"});
    EXPECT_EQ(v.code, 0);
    EXPECT_NE(v.out.find(kToolVersion), std::string::npos);
    EXPECT_EQ(cli({"no-such-command"}).code, 2);
}

TEST_F(Cli, InfoOnOneGateFile) {
    const std::string f = write("one.txt", "1\n0 x_1_2 0\n");
    const CliResult r = cli({"info", f, "--json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["n"], 1);
    EXPECT_EQ(j["gates"]["total"], 1);
    EXPECT_EQ(j["gates"]["one_qubit"], 1);
}

TEST_F(Cli, InputErrorsExitTwo) {
    EXPECT_EQ(cli({"info", write("bad.txt", "2\n0 foo 0\n")}).code, 2);
    EXPECT_EQ(cli({"info", path("missing.txt")}).code, 2);
    const std::string c = write("c.txt", "2\n0 cz 0 1\n");
    EXPECT_EQ(cli({"order", c, "--open", "0,x", "-o", path("o.json")}).code, 2);
}

TEST_F(Cli, UnreachableCapsExitThreeAndKeepBestTree) {
    ASSERT_EQ(cli({"generate", "random", "--qubits", "10", "--cycles", "8", "-o", path("c.txt")}).code, 0);
    const CliResult r = cli({"order", path("c.txt"), "--open", "0", "--max-space", "3", "--trials", "1", "-o", path("o.json")});
    EXPECT_EQ(r.code, 3);
    EXPECT_FALSE(fs::exists(path("o.json")));
    const auto partial = nlohmann::json::parse(slurp(path("o.json.partial")));
    EXPECT_TRUE(partial.contains("error"));
}

TEST_F(Cli, OrderIsDeterministicAndRespectsSpaceCap) {
    ASSERT_EQ(cli({"generate", "random", "--qubits", "20", "--cycles", "10", "--seed", "4", "-o", path("c.txt")}).code, 0);
    for (const char *o : {"a.json", "b.json"}) {
        const CliResult r = cli({"order", path("c.txt"), "--open", "0,1,2", "--max-space", "24", "--seed", "3", "-o", path(o)});
        ASSERT_EQ(r.code, 0) << r.err;
    }
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
    const Circuit c = load_circuit(path("c.txt"));
    const ContractionPlan plan = plan_from_json(nlohmann::json::parse(slurp(path("a.json"))));
    const TensorNetwork tn = build_network(c, plan.open_qubits, std::string(17, '0'));
    check_plan(tn, plan);
    EXPECT_LE(complexity_of(tn, plan.tree).sc, 24);
}

TEST_F(Cli, RunMatchesOracleAndRangedRunsReduceExactly) {
    ASSERT_EQ(cli({"generate", "random", "--qubits", "12", "--cycles", "10", "--seed", "3", "-o", path("c.txt")}).code, 0);
    ASSERT_EQ(cli({"order", path("c.txt"), "--open", "0,1", "--target-space", "7", "-o", path("o.json")}).code, 0);
    const std::string s1 = "0110100110";
    ASSERT_EQ(cli({"run", path("c.txt"), "--order", path("o.json"), "--s1", s1, "-o", path("full.tsv")}).code, 0);
    ASSERT_EQ(cli({"oracle", path("c.txt"), "--open", "0,1", "--s1", s1, "-o", path("oracle.tsv")}).code, 0);
    const AmplitudeTable full = load_table(path("full.tsv"));
    const AmplitudeTable oracle = load_table(path("oracle.tsv"));
    ASSERT_EQ(full.rows.size(), 4u);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_EQ(full.rows[k].bitstring, oracle.rows[k].bitstring);
        EXPECT_LT(std::abs(full.rows[k].amplitude - oracle.rows[k].amplitude), 1e-8);
    }

    const ContractionPlan plan = plan_from_json(nlohmann::json::parse(slurp(path("o.json"))));
    const std::uint64_t total = plan.slices.subtask_count();
    ASSERT_GE(total, 4u);
    const std::string mid = std::to_string(total / 2 + 1);
    ASSERT_EQ(cli({"run", path("c.txt"), "--order", path("o.json"), "--s1", s1, "--slices", "0.." + mid, "-o", path("a.bin")}).code, 0);
    ASSERT_EQ(cli({"run", path("c.txt"), "--order", path("o.json"), "--s1", s1, "--slices",
                   mid + ".." + std::to_string(total), "-o", path("b.bin")}).code, 0);
    EXPECT_TRUE(fs::exists(path("a.bin.manifest.json")));
    const CliResult red = cli({"reduce", path("b.bin"), path("a.bin"), "--order", path("o.json"), "--circuit", path("c.txt"),
                               "-o", path("reduced.tsv")});
    ASSERT_EQ(red.code, 0) << red.err;
    EXPECT_EQ(slurp(path("reduced.tsv")), slurp(path("full.tsv")));

    // one half alone leaves a gap
    EXPECT_EQ(cli({"reduce", path("a.bin"), "--order", path("o.json"), "--circuit", path("c.txt"), "-o", path("x.tsv")}).code, 2);
}

TEST_F(Cli, UniformTableHasZeroXebAndConditionalXeb) {
    const std::string f = write("h.txt", "3\n0 y_1_2 0\n0 y_1_2 1\n0 y_1_2 2\n");
    ASSERT_EQ(cli({"oracle", f, "--open", "all", "-o", path("t.tsv")}).code, 0);
    const CliResult x = cli({"xeb", path("t.tsv")});
    ASSERT_EQ(x.code, 0) << x.err;
    EXPECT_NEAR(nlohmann::json::parse(x.out)["f_xeb"].get<double>(), 0.0, 1e-12);
    const CliResult c = cli({"conditional", path("t.tsv")});
    ASSERT_EQ(c.code, 0) << c.err;
    const auto j = nlohmann::json::parse(c.out);
    EXPECT_NEAR(j["conditional_xeb"].get<double>(), 0.0, 1e-12);
    EXPECT_NEAR(j["marginal"].get<double>(), 1.0, 1e-12);
}

TEST_F(Cli, IdentityCircuitRunPutsUnitMassOnZero) {
    const std::string f = write("id.txt", "4\n");
    ASSERT_EQ(cli({"order", f, "--open", "1,2", "-o", path("o.json")}).code, 0);
    ASSERT_EQ(cli({"run", f, "--order", path("o.json"), "-o", path("t.tsv")}).code, 0);
    const AmplitudeTable t = load_table(path("t.tsv"));
    ASSERT_EQ(t.rows.size(), 4u);
    EXPECT_EQ(t.rows[0].bitstring, "0000");
    EXPECT_EQ(t.rows[0].probability, 1.0);
}

TEST_F(Cli, HistogramOfSixteenQubitOracleIsPorterThomas) {
    ASSERT_EQ(cli({"generate", "random", "--qubits", "16", "--cycles", "16", "--hardware-angles", "-o", path("c.txt")}).code, 0);
    ASSERT_EQ(cli({"oracle", path("c.txt"), "--open", "all", "-o", path("t.tsv")}).code, 0);
    const CliResult h = cli({"hist", path("t.tsv"), "--bins", "20", "--scale", "linear"});
    ASSERT_EQ(h.code, 0) << h.err;
    std::istringstream csv(h.out);
    std::string header, line;
    std::getline(csv, header);
    EXPECT_EQ(header, "bin_lo,bin_hi,count,density,pt_density,ks_distance");
    ASSERT_TRUE(std::getline(csv, line));
    const double ks = std::stod(line.substr(line.rfind(',') + 1));
    EXPECT_LT(ks, 0.02);
    const CliResult curve = cli({"curve", path("t.tsv"), "--points", "10"});
    ASSERT_EQ(curve.code, 0) << curve.err;
    EXPECT_EQ(curve.out.substr(0, curve.out.find('\n')), "fraction,kept,f_xeb");
}

TEST_F(Cli, GenerateSycamoreCounts) {
    const CliResult r = cli({"generate", "sycamore", "--cycles", "20", "-o", path("s.txt")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(cli({"info", path("s.txt"), "--json"}).out);
    EXPECT_EQ(j["n"], 53);
    EXPECT_EQ(j["gates"]["two_qubit"], 430);
    EXPECT_EQ(j["fused_tensors"], 430);
}

TEST(CliHelpers, ParseIdList) {
    EXPECT_EQ(parse_id_list("3,5,7-9"), (std::vector<int>{3, 5, 7, 8, 9}));
    EXPECT_EQ(parse_id_list("5,3,3"), (std::vector<int>{3, 5}));
    EXPECT_EQ(testing::error_of([] { parse_id_list("9-7"); }), Errc::malformed_line);
    EXPECT_EQ(testing::error_of([] { parse_id_list("a"); }), Errc::malformed_line);
}

TEST(CliHelpers, ManifestRoundTripAndCheck) {
    const Circuit c = random_circuit(4, 2, 0);
    RunManifest m;
    m.circuit_hash = circuit_hash(c);
    m.order_hash = "";
    m.s1 = "01";
    m.open_qubits = {0, 1};
    m.slice_end = 4;
    m.slice_total = 8;
    m.precision = "double";
    m.reduction = "fixed";
    const RunManifest back = manifest_from_json(manifest_to_json(m));
    EXPECT_EQ(back.circuit_hash, m.circuit_hash);
    EXPECT_EQ(back.open_qubits, m.open_qubits);
    EXPECT_EQ(back.slice_total, 8u);
    const std::string order_text = "{}";
    m.order_hash = to_hex(fnv1a(order_text));
    EXPECT_NO_THROW(check_manifest(m, c, order_text));
    EXPECT_EQ(testing::error_of([&] { check_manifest(m, c, "{ }"); }), Errc::provenance_mismatch);
    RunManifest wrong = m;
    wrong.circuit_hash = circuit_hash(random_circuit(4, 2, 1));
    EXPECT_EQ(testing::error_of([&] { check_manifest(wrong, c, order_text); }), Errc::provenance_mismatch);
}

}  // namespace
}  // namespace bighead
