#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "oulab/cli/runner.hpp"

namespace {

enum Exit { kOk = 0, kFailed = 1, kConfig = 2, kRuntime = 3 };

int report(const oulab::cli::Artifacts& a) {
    std::printf("%s: pass=%d fail=%d n/a=%d -> %s, %s (wall %.1f s)\n", a.stem.c_str(), a.pass, a.fail, a.na,
                a.csv_path.c_str(), a.json_path.c_str(), a.seconds);
    if (a.fail > 0) {
        std::fprintf(stderr, "%s: first failing check: %s\n", a.stem.c_str(), a.first_failure.c_str());
        return kFailed;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace oulab::cli;
    CLI::App app{"Numerical laboratory for the Ornstein-Uhlenbeck operator and its Hodge-Dirac operator"};
    app.require_subcommand(1);

    RunOptions opts;
    std::string config_path;
    std::uint64_t seed = 0;
    oulab::real scale = 1.0;
    int qorder = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", opts.out, "output directory (default: [output] dir, then $OU_LAB_OUT, then ./results)");
        sub->add_option("--threads", opts.threads, "worker threads; results do not depend on it")->check(CLI::PositiveNumber);
        sub->add_option("--tolerance-scale", scale, "multiply every tolerance by this factor")->check(CLI::PositiveNumber);
    };

    auto* run = app.add_subcommand("run", "run the experiment described by a .cfg file");
    run->add_option("config", config_path, "configuration file")->required();
    add_common(run);
    run->add_option("--seed", seed, "override experiment.seed");

    app.add_subcommand("list", "list the available experiments");

    auto* self = app.add_subcommand("selftest", "fast consistency checks on a small truncation");
    add_common(self);
    self->add_option("--quadrature-order", qorder, "Gauss-Hermite order for the check model (0 = default)")
        ->check(CLI::NonNegativeNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (run->count("--seed")) opts.seed = seed;
            if (run->count("--tolerance-scale")) opts.tolerance_scale = scale;
            return report(run_config(config_path, opts));
        }
        if (self->parsed()) {
            if (self->count("--tolerance-scale")) opts.tolerance_scale = scale;
            return report(selftest(opts, qorder));
        }
        std::size_t width = 0;
        for (const auto& e : registry()) width = std::max(width, e.name.size());
        for (const auto& e : registry())
            std::printf("%-*s  %s\n", static_cast<int>(width), e.name.c_str(), e.anchor.c_str());
        return kOk;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRuntime;
    }
}
