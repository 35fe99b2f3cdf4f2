#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "oulab/cli/runner.hpp"

using namespace oulab;
using namespace oulab::cli;
namespace fs = std::filesystem;

namespace {

struct Proc {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("oulab_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

Proc tool(const std::string& args, const std::string& env = "") {
    const fs::path dir = fs::temp_directory_path();
    const fs::path o = dir / "oulab_cli_stdout.txt", e = dir / "oulab_cli_stderr.txt";
    const std::string cmd = env + " \"" OULAB_TOOL_PATH "\" " + args + " >\"" + o.string() + "\" 2>\"" + e.string() + "\"";
    const int status = std::system(cmd.c_str());
    Proc p;
    p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    p.out = slurp(o);
    p.err = slurp(e);
    return p;
}

std::string config(const std::string& name) { return std::string(OULAB_CONFIG_DIR) + "/" + name; }

fs::path write_cfg(const fs::path& dir, const std::string& text) {
    const fs::path p = dir / "case.cfg";
    std::ofstream(p) << text;
    return p;
}

std::string hex16(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

TEST(NumberFormat, ShortestRoundTrip) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1.0), "1");
    EXPECT_EQ(format_number(-2.5e-300), "-2.5e-300");
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(-0.0), "-0");
    EXPECT_EQ(format_number(std::numeric_limits<real>::quiet_NaN()), "nan");
    EXPECT_EQ(format_number(-kInf), "-inf");
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint64_t> bits;
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t b = bits(rng);
        real v;
        std::memcpy(&v, &b, sizeof v);
        if (!std::isfinite(v)) continue;
        const std::string s = format_number(v);
        EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
        // Never longer than the 17-significant-digit form.
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        EXPECT_LE(s.size(), std::string(buf).size()) << s;
    }
}

TEST(Table, CsvQuotingAndShape) {
    Table t({"a", "b", "c"});
    t.add({std::string("x,y"), 0.25, 3LL});
    t.add({std::string("say \"hi\""), 1e-20, -1LL});
    EXPECT_EQ(t.csv(), "a,b,c\n\"x,y\",0.25,3\n\"say \"\"hi\"\"\",1e-20,-1\n");
    EXPECT_THROW(t.add({1.0}), DimensionError);
}

TEST(Json, FloatsUseShortestForm) {
    Json j;
    j["x"] = 0.1;
    j["n"] = 3;
    j["bad"] = std::numeric_limits<real>::infinity();
    j["arr"] = {1.5, 2};
    EXPECT_EQ(dump_json(j), "{\n  \"x\": 0.1,\n  \"n\": 3,\n  \"bad\": null,\n  \"arr\": [\n    1.5,\n    2\n  ]\n}\n");
}

TEST(Config, CanonicalFormAndHash) {
    const auto a = Config::parse("# comment\n[model]\n  N =  12 \nd=1\n\n[experiment]\nname = riesz\n");
    const auto b = Config::parse("[experiment]\n; other comment\nname=riesz\n[model]\nd = 1\nN=12\n");
    EXPECT_EQ(a.canonical(), "experiment.name=riesz\nmodel.N=12\nmodel.d=1\n");
    EXPECT_EQ(a.canonical(), b.canonical());
    EXPECT_EQ(a.hash(), hex16(oracle::fnv1a(a.canonical())));
    EXPECT_EQ(a.hash(), b.hash());
    const auto c = Config::parse("[experiment]\nname=riesz\n[model]\nd = 1\nN=14\n");
    EXPECT_NE(a.hash(), c.hash());
}

TEST(Config, ListsAndErrors) {
    const auto c = Config::parse("[g]\nts = linspace(0, 1, 5), 2\ngs = geomspace(1, 100, 3)\nzs = 0.1:1.5, 2\nns = 4, 8\n");
    EXPECT_EQ(c.get_reals("g.ts", {}), (std::vector<real>{0.0, 0.25, 0.5, 0.75, 1.0, 2.0}));
    const auto gs = c.get_reals("g.gs", {});
    ASSERT_EQ(gs.size(), 3u);
    EXPECT_NEAR(gs[1], 10.0, 1e-13);
    EXPECT_EQ(c.get_complex("g.zs", {}), (std::vector<cplx>{cplx(0.1, 1.5), cplx(2.0, 0.0)}));
    EXPECT_EQ(c.get_ints("g.ns", {}), (std::vector<int>{4, 8}));
    EXPECT_EQ(c.get_real("g.missing", 7.0), 7.0);

    auto key_of = [](const std::string& text, auto&& fn) {
        try {
            fn(Config::parse(text));
        } catch (const ConfigError& e) {
            return e.key();
        }
        return std::string("<none>");
    };
    EXPECT_EQ(key_of("[m]\nN = abc\n", [](const Config& c) { c.get_int("m.N", 0); }), "m.N");
    EXPECT_EQ(key_of("[m]\nN = 1\nN = 2\n", [](const Config&) {}), "m.N");
    EXPECT_EQ(key_of("[m]\njunk line\n", [](const Config&) {}), "m.junk line");
    EXPECT_EQ(key_of("[g]\nts = linspace(0, 1)\n", [](const Config& c) { c.get_reals("g.ts", {}); }), "g.ts");
    EXPECT_EQ(key_of("[g]\nts = geomspace(0, 1, 3)\n", [](const Config& c) { c.get_reals("g.ts", {}); }), "g.ts");
}

TEST(Registry, ValidationNamesTheKey) {
    auto key_of = [](const std::string& text) {
        try {
            execute(Config::parse(text), "case", {});
        } catch (const ConfigError& e) {
            return e.key();
        }
        return std::string("<none>");
    };
    EXPECT_EQ(key_of("[model]\nN = 12\n"), "experiment.name");
    EXPECT_EQ(key_of("[experiment]\nname = nope\n"), "experiment.name");
    EXPECT_EQ(key_of("[experiment]\nname = riesz\n[model]\nN = 3\n"), "model.N");
    EXPECT_EQ(key_of("[experiment]\nname = riesz\n[model]\nNN = 12\n"), "model.NN");
    EXPECT_EQ(key_of("[experiment]\nname = riesz\n[tolerance]\nidentity = -1\n"), "tolerance.identity");
    EXPECT_EQ(key_of("[experiment]\nname = riesz\nseed = -4\n"), "experiment.seed");
    EXPECT_EQ(key_of("[experiment]\nname = riesz\n[model]\nd = 1\nb = 0.5\n"), "model.b");
}

TEST(Tool, ListShowsEveryExperimentInOrder) {
    const auto p = tool("list");
    ASSERT_EQ(p.code, 0) << p.err;
    std::istringstream in(p.out);
    std::string line;
    std::size_t i = 0;
    while (std::getline(in, line)) {
        ASSERT_LT(i, registry().size());
        EXPECT_EQ(line.substr(0, line.find(' ')), registry()[i].name);
        EXPECT_NE(line.find(registry()[i].anchor), std::string::npos);
        ++i;
    }
    EXPECT_EQ(i, registry().size());
    for (const char* name : {"finite-speed", "offdiag-resolvent", "angle", "blowup", "weyl", "subordination"})
        EXPECT_NE(p.out.find(name), std::string::npos) << name;
}

TEST(Tool, MalformedConfigExitsWithTwoAndNamesTheKey) {
    const auto dir = scratch("malformed");
    auto p = tool("run \"" + write_cfg(dir, "[experiment]\nname = riesz\n[model]\nN = twelve\n").string() + "\" --out \"" +
                  dir.string() + "\"");
    EXPECT_EQ(p.code, 2);
    EXPECT_NE(p.err.find("model.N"), std::string::npos) << p.err;
    p = tool("run \"" + write_cfg(dir, "[experiment]\nname = riesz\n[grid]\ntss = 1\n").string() + "\"");
    EXPECT_EQ(p.code, 2);
    EXPECT_NE(p.err.find("grid.tss"), std::string::npos) << p.err;
    p = tool("run \"" + (dir / "missing.cfg").string() + "\"");
    EXPECT_EQ(p.code, 2);
    EXPECT_FALSE(fs::exists(dir / "case.csv"));
}

TEST(Tool, SelftestPassesAndDetectsABrokenQuadrature) {
    const auto dir = scratch("selftest");
    auto p = tool("selftest --out \"" + dir.string() + "\"");
    EXPECT_EQ(p.code, 0) << p.err;
    EXPECT_TRUE(fs::exists(dir / "selftest.csv"));
    EXPECT_NE(slurp(dir / "selftest.json").find("\"verdict\": \"pass\""), std::string::npos);
    // Order N cannot integrate products of degree 2N exactly.
    p = tool("selftest --quadrature-order 24 --out \"" + dir.string() + "\"");
    EXPECT_EQ(p.code, 1);
    EXPECT_NE(p.err.find("orthonormality"), std::string::npos) << p.err;
}

TEST(Tool, RerunsAreBitIdenticalAndThreadIndependent) {
    const auto a = scratch("rerun_a"), b = scratch("rerun_b");
    for (const char* cfg : {"group-formula.cfg", "mehler-consistency.cfg"}) {
        const auto p1 = tool("run \"" + config(cfg) + "\" --out \"" + a.string() + "\"");
        const auto p2 = tool("run \"" + config(cfg) + "\" --threads 3 --out \"" + b.string() + "\"");
        ASSERT_EQ(p1.code, 0) << p1.err;
        ASSERT_EQ(p2.code, 0) << p2.err;
        const std::string stem = fs::path(cfg).stem().string();
        for (const char* ext : {".csv", ".json"}) {
            const std::string x = slurp(a / (stem + ext)), y = slurp(b / (stem + ext));
            EXPECT_FALSE(x.empty());
            EXPECT_EQ(x, y) << stem << ext;
        }
    }
    EXPECT_EQ(slurp(a / "group-formula.csv").substr(0, 27), "t,error,tolerance,verdict\n0");
}

TEST(Tool, OverridesEnterTheHashAndOutputDirectoryPrecedence) {
    const auto env_dir = scratch("env"), flag_dir = scratch("flag");
    auto p = tool("run \"" + config("group-formula.cfg") + "\" --seed 5", "OU_LAB_OUT=\"" + env_dir.string() + "\"");
    ASSERT_EQ(p.code, 0) << p.err;
    const std::string j5 = slurp(env_dir / "group-formula.json");
    EXPECT_NE(j5.find("\"seed\": 5,"), std::string::npos);
    p = tool("run \"" + config("group-formula.cfg") + "\" --out \"" + flag_dir.string() + "\"",
             "OU_LAB_OUT=\"" + env_dir.string() + "\"");
    ASSERT_EQ(p.code, 0) << p.err;
    const std::string j0 = slurp(flag_dir / "group-formula.json");
    EXPECT_NE(j0.find("\"seed\": 0,"), std::string::npos);
    auto hash_of = [](const std::string& j) { return j.substr(j.find("\"config_hash\""), 36); };
    EXPECT_NE(hash_of(j0), hash_of(j5));
    // The recorded hash is the hash of the canonical config file.
    EXPECT_NE(j0.find(Config::load(config("group-formula.cfg")).hash()), std::string::npos);
}

TEST(Tool, ToleranceScaleCanTurnAPassIntoAFail) {
    const auto dir = scratch("scale");
    const auto p = tool("run \"" + config("group-formula.cfg") + "\" --tolerance-scale 1e-12 --out \"" + dir.string() + "\"");
    EXPECT_EQ(p.code, 1);
    EXPECT_NE(slurp(dir / "group-formula.json").find("\"verdict\": \"fail\""), std::string::npos);
}
