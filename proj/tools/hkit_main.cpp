#include <chrono>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hkit/config.hpp"
#include "hkit/errors.hpp"
#include "hkit/numeric.hpp"

int main(int argc, char** argv) {
    CLI::App app{"numerical toolkit for multidimensional Hausdorff operators"};
    app.require_subcommand(1);

    struct Options {
        std::string config;
        std::string out = ".";
        std::uint64_t seed = 0;
        bool seed_given = false;
        int threads = 0;
        bool threads_given = false;
    } opt;

    const std::vector<std::pair<std::string, std::string>> kinds{
        {"norms", "kernel norm triple for a matrix family"},
        {"apply", "apply the Hausdorff operator to a grid function"},
        {"verify-l1", "check the L1 boundedness inequality"},
        {"verify-h1", "check the H1 surrogate inequality"},
        {"atom-check", "build an atom and verify its three conditions"},
        {"sweep", "norm comparison across a parameter grid"},
        {"counterexample-search", "random search for spectral norm above the ell-norm"},
    };
    for (const auto& [name, desc] : kinds) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", opt.config, "path to the json run config")->required();
        sub->add_option("--out", opt.out, "output directory (default: current)");
        sub->add_option("--seed", opt.seed, "override the config seed")
            ->each([&opt](const std::string&) { opt.seed_given = true; });
        sub->add_option("--threads", opt.threads, "override the worker thread count")
            ->each([&opt](const std::string&) { opt.threads_given = true; });
    }

    CLI11_PARSE(app, argc, argv);
    const std::string kind = app.get_subcommands().front()->get_name();

    try {
        hkit::RunConfig cfg = hkit::RunConfig::from_file(opt.config);
        if (!cfg.kind.empty() && cfg.kind != kind)
            throw hkit::ConfigInvalid("config kind '" + cfg.kind + "' does not match subcommand '" + kind + "'");
        cfg.kind = kind;
        if (opt.seed_given) cfg.seed = opt.seed;
        if (opt.threads_given) cfg.threads = opt.threads;

        const auto t0 = std::chrono::steady_clock::now();
        const hkit::ReportBundle bundle = hkit::run(cfg, opt.out);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;

        // timing goes to stdout only; the report file stays byte-reproducible
        std::printf("kind        %s\n", kind.c_str());
        std::printf("elapsed_s   %.3f\n", dt.count());
        std::printf("threads     %d\n", hkit::thread_count());
        for (const auto& f : bundle.files_written) std::printf("wrote       %s\n", f.c_str());
        std::printf("pass        %s\n", bundle.all_pass ? "true" : "false");
        return bundle.all_pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
