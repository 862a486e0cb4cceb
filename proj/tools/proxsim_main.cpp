// proxsim command-line driver. Talks to libproxsim exclusively through the
// public C API; all simulation, feature and learning logic lives behind it.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "proxsim/proxsim.h"

#include "CLI11.hpp"

namespace {

struct SessionDeleter {
    void operator()(proxsim_session* s) const { proxsim_session_destroy(s); }
};
using SessionPtr = std::unique_ptr<proxsim_session, SessionDeleter>;

struct StringOut {
    char* ptr = nullptr;
    ~StringOut() { proxsim_string_free(ptr); }
};

int fail(const proxsim_session* s, int code) {
    std::fprintf(stderr, "error: %s\n", proxsim_session_last_error(s));
    return code;
}

SessionPtr open_session(const std::string& config_path, uint64_t* seed, int* per_cell, int* rc) {
    proxsim_session* raw = nullptr;
    int code;
    if (config_path.empty()) {
        code = proxsim_session_create(nullptr, &raw);
    } else {
        code = proxsim_session_create_from_file(config_path.c_str(), &raw);
    }
    if (code != PROXSIM_OK) {
        std::fprintf(stderr, "error: cannot load config '%s' (code %d)\n", config_path.c_str(),
                     code);
        *rc = code;
        return nullptr;
    }
    SessionPtr session(raw);
    if (seed != nullptr) proxsim_session_set_seed(session.get(), *seed);
    if (per_cell != nullptr) {
        code = proxsim_session_set_scenarios_per_cell(session.get(), static_cast<uint32_t>(*per_cell));
        if (code != PROXSIM_OK) {
            *rc = fail(session.get(), code);
            return nullptr;
        }
    }
    return session;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"proxsim: multi-orbit proximity-threat simulation, fused features and "
                 "Random Forest evaluation"};
    app.set_version_flag("--version", proxsim_version());
    app.require_subcommand(1);
    app.fallthrough();  // --config/--seed/--scenarios-per-cell valid after the subcommand too

    std::string config_path;
    app.add_option("--config", config_path, "Run configuration JSON (defaults when omitted)")
        ->check(CLI::ExistingFile);
    uint64_t seed = 0;
    bool seed_set = false;
    app.add_option("--seed", seed, "Master seed override")->each([&](const std::string&) {
        seed_set = true;
    });
    int per_cell = 0;
    app.add_option("--scenarios-per-cell", per_cell, "Scenarios per class x regime cell override")
        ->check(CLI::PositiveNumber);

    auto* gen = app.add_subcommand("generate", "Generate the labeled scenario dataset");
    std::string gen_out = "data";
    gen->add_option("--out", gen_out, "Output directory")->required();

    auto* feat = app.add_subcommand("features", "Build and persist one feature view");
    std::string feat_data, feat_out = ".", feat_view = "fused";
    feat->add_option("--data", feat_data, "Dataset directory (from generate)")->required();
    feat->add_option("--view", feat_view, "Feature view: rf | kin | fused")
        ->check(CLI::IsMember({"rf", "kin", "fused"}));
    feat->add_option("--out", feat_out, "Output directory");

    auto* te = app.add_subcommand("train-eval", "Grouped split, train and evaluate one view");
    std::string te_data, te_out = ".", te_view = "fused";
    te->add_option("--data", te_data, "Dataset directory (from generate)")->required();
    te->add_option("--view", te_view, "Feature view: rf | kin | fused")
        ->check(CLI::IsMember({"rf", "kin", "fused"}));
    te->add_option("--out", te_out, "Output directory for metrics/model files");

    auto* sweep = app.add_subcommand("noise-sweep",
                                     "Receiver-noise sweep on the timestep jammer-detection task");
    std::string sweep_out = ".";
    std::vector<double> sweep_grid;
    sweep->add_option("--out", sweep_out, "Output directory for sweep.csv");
    sweep->add_option("--sigma-grid", sweep_grid, "Comma-separated sigma values")->delimiter(',');

    auto* rep = app.add_subcommand("report", "Print a summary table of metrics in a directory");
    std::string rep_in = ".";
    rep->add_option("--in", rep_in, "Directory holding metrics_*.json / sweep.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion") {
            return app.exit(e);
        }
        app.exit(e);
        return 1;  // usage errors
    }

    int rc = 0;
    SessionPtr session = open_session(config_path, seed_set ? &seed : nullptr,
                                      per_cell > 0 ? &per_cell : nullptr, &rc);
    if (!session) return rc;

    if (gen->parsed()) {
        StringOut summary;
        const int code = proxsim_generate(session.get(), gen_out.c_str(), &summary.ptr);
        if (code != PROXSIM_OK) return fail(session.get(), code);
        std::printf("%s\n", summary.ptr);
        return 0;
    }
    if (feat->parsed()) {
        StringOut summary;
        const int code = proxsim_build_features(session.get(), feat_data.c_str(),
                                                feat_view.c_str(), feat_out.c_str(), &summary.ptr);
        if (code != PROXSIM_OK) return fail(session.get(), code);
        std::printf("%s\n", summary.ptr);
        return 0;
    }
    if (te->parsed()) {
        StringOut metrics;
        const int code = proxsim_train_eval(session.get(), te_data.c_str(), te_view.c_str(),
                                            te_out.c_str(), &metrics.ptr);
        if (code != PROXSIM_OK) return fail(session.get(), code);
        std::printf("%s\n", metrics.ptr);
        return 0;
    }
    if (sweep->parsed()) {
        StringOut csv;
        const int code = proxsim_noise_sweep(session.get(), sweep_out.c_str(),
                                             sweep_grid.empty() ? nullptr : sweep_grid.data(),
                                             sweep_grid.size(), &csv.ptr);
        if (code != PROXSIM_OK) return fail(session.get(), code);
        std::printf("%s", csv.ptr);
        return 0;
    }
    if (rep->parsed()) {
        StringOut text;
        const int code = proxsim_report(session.get(), rep_in.c_str(), &text.ptr);
        if (code != PROXSIM_OK) return fail(session.get(), code);
        std::printf("%s", text.ptr);
        return 0;
    }
    return 1;
}
