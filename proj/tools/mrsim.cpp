#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mrsim/commands.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitInvariant = 4;

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned threads = 0;
    bool threads_set = false;
};

mrsim::RunConfig build_config(const CommonFlags& f) {
    mrsim::RunConfig cfg = f.config_path.empty() ? mrsim::RunConfig{}
                                                 : mrsim::RunConfig::from_file(f.config_path);
    for (const auto& ov : f.overrides) cfg.apply_override(ov);
    if (f.seed_set) cfg.seed = f.seed;
    if (f.threads_set) cfg.threads = f.threads;
    if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* sub, CommonFlags& f) {
    sub->add_option("--config", f.config_path, "config file (INI-style key = value)");
    sub->add_option("--out", f.out_dir, "output directory");
    sub->add_option("--set", f.overrides, "override a key: section.key=value")
        ->take_all();
    sub->add_option("--seed", f.seed, "RNG seed")->each([&f](const std::string&) {
        f.seed_set = true;
    });
    sub->add_option("--threads", f.threads, "worker threads (0 = auto)")
        ->each([&f](const std::string&) { f.threads_set = true; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"macrorealism-test simulation toolkit"};
    app.require_subcommand(1);

    CommonFlags flags[5];
    const char* names[5] = {"wsl", "curve", "mc", "scan", "noise"};
    const char* descs[5] = {"closed-form V limits and margins",
                            "exact-engine tau sweep of N, D, V with scaling fits",
                            "Monte Carlo pipeline: simulate, estimate, verdict",
                            "delay-grid scan for the violation region",
                            "photon shot-noise budget and acquisition time"};
    CLI::App* subs[5];
    for (int m = 0; m < 5; ++m) {
        subs[m] = app.add_subcommand(names[m], descs[m]);
        add_common(subs[m], flags[m]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    using Cmd = std::string (*)(const mrsim::RunConfig&);
    const Cmd cmds[5] = {mrsim::cmd_wsl, mrsim::cmd_curve, mrsim::cmd_mc, mrsim::cmd_scan,
                         mrsim::cmd_noise};
    try {
        for (int m = 0; m < 5; ++m)
            if (subs[m]->parsed()) {
                std::cout << cmds[m](build_config(flags[m])) << std::endl;
                return kExitOk;
            }
        return kExitUsage;
    } catch (const mrsim::UsageError& e) {
        std::cerr << "usage error: " << e.what() << std::endl;
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "invariant error: " << e.what() << std::endl;
        return kExitInvariant;
    } catch (const std::logic_error& e) {
        std::cerr << "invariant error: " << e.what() << std::endl;
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << std::endl;
        return kExitRuntime;
    }
}
