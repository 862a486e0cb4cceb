#include "proxsim/proxsim.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "config.hpp"
#include "core/error.hpp"
#include "pipeline.hpp"

struct proxsim_session {
    proxsim::RunConfig cfg;
    std::string last_error;
};

namespace {

constexpr const char* kVersion = "proxsim 1.0.0";

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

int code_of(const proxsim::Error& e) {
    switch (e.kind()) {
        case proxsim::ErrorKind::Config: return PROXSIM_ERR_CONFIG;
        case proxsim::ErrorKind::Io: return PROXSIM_ERR_IO;
        default: return PROXSIM_ERR_INTERNAL;
    }
}

template <typename Fn>
int guarded(proxsim_session* s, Fn&& fn) {
    if (s == nullptr) return PROXSIM_ERR_CONFIG;
    try {
        s->last_error.clear();
        return fn();
    } catch (const proxsim::Error& e) {
        s->last_error = e.what();
        return code_of(e);
    } catch (const std::exception& e) {
        s->last_error = e.what();
        return PROXSIM_ERR_INTERNAL;
    }
}

proxsim::features::FeatureView parse_view(const char* view) {
    try {
        return proxsim::features::view_from_string(view);
    } catch (const proxsim::Error& e) {
        proxsim::throw_config(e.what());  // caller-supplied string: config class
    }
}

template <typename Fn>
int create_session(proxsim_session** out, Fn&& load) {
    if (out == nullptr) return PROXSIM_ERR_CONFIG;
    *out = nullptr;
    auto* s = new proxsim_session();
    try {
        s->cfg = load();
    } catch (const proxsim::Error& e) {
        delete s;
        return code_of(e);
    } catch (const std::exception&) {
        delete s;
        return PROXSIM_ERR_INTERNAL;
    }
    *out = s;
    return PROXSIM_OK;
}

}  // namespace

extern "C" {

const char* proxsim_version(void) { return kVersion; }

int proxsim_session_create(const char* config_json, proxsim_session** out) {
    return create_session(out, [&] {
        if (config_json == nullptr || config_json[0] == '\0')
            return proxsim::RunConfig{};
        return proxsim::RunConfig::from_json_text(config_json);
    });
}

int proxsim_session_create_from_file(const char* path, proxsim_session** out) {
    if (path == nullptr) return PROXSIM_ERR_CONFIG;
    return create_session(out, [&] { return proxsim::RunConfig::from_file(path); });
}

void proxsim_session_destroy(proxsim_session* s) { delete s; }

const char* proxsim_session_last_error(const proxsim_session* s) {
    return s == nullptr ? "null session" : s->last_error.c_str();
}

int proxsim_session_set_seed(proxsim_session* s, uint64_t master_seed) {
    return guarded(s, [&] {
        s->cfg.master_seed = master_seed;
        return PROXSIM_OK;
    });
}

int proxsim_session_set_scenarios_per_cell(proxsim_session* s, uint32_t n) {
    return guarded(s, [&] {
        if (n == 0) proxsim::throw_config("scenarios_per_cell must be >= 1");
        s->cfg.scenarios_per_cell = static_cast<int>(n);
        return PROXSIM_OK;
    });
}

int proxsim_session_config_json(const proxsim_session* s, char** out_json) {
    if (s == nullptr || out_json == nullptr) return PROXSIM_ERR_CONFIG;
    *out_json = dup_string(s->cfg.to_json().dump(2));
    return *out_json == nullptr ? PROXSIM_ERR_INTERNAL : PROXSIM_OK;
}

uint64_t proxsim_session_config_hash(const proxsim_session* s) {
    return s == nullptr ? 0 : s->cfg.hash();
}

int proxsim_generate(proxsim_session* s, const char* out_dir, char** out_summary_json) {
    return guarded(s, [&] {
        if (out_dir == nullptr) proxsim::throw_config("out_dir is required");
        const nlohmann::json summary = proxsim::pipeline::run_generate(s->cfg, out_dir);
        if (out_summary_json != nullptr) *out_summary_json = dup_string(summary.dump(2));
        return PROXSIM_OK;
    });
}

int proxsim_build_features(proxsim_session* s, const char* data_dir, const char* view,
                           const char* out_dir, char** out_summary_json) {
    return guarded(s, [&] {
        if (data_dir == nullptr || view == nullptr || out_dir == nullptr)
            proxsim::throw_config("data_dir, view and out_dir are required");
        const auto v = parse_view(view);
        const nlohmann::json summary =
            proxsim::pipeline::run_features(s->cfg, data_dir, v, out_dir);
        if (out_summary_json != nullptr) *out_summary_json = dup_string(summary.dump(2));
        return PROXSIM_OK;
    });
}

int proxsim_train_eval(proxsim_session* s, const char* data_dir, const char* view,
                       const char* out_dir, char** out_metrics_json) {
    return guarded(s, [&] {
        if (data_dir == nullptr || view == nullptr || out_dir == nullptr)
            proxsim::throw_config("data_dir, view and out_dir are required");
        const auto v = parse_view(view);
        const nlohmann::json metrics =
            proxsim::pipeline::run_train_eval(s->cfg, data_dir, v, out_dir);
        if (out_metrics_json != nullptr) *out_metrics_json = dup_string(metrics.dump(2));
        return PROXSIM_OK;
    });
}

int proxsim_noise_sweep(proxsim_session* s, const char* out_dir, const double* sigma_grid,
                        size_t grid_len, char** out_sweep_csv) {
    return guarded(s, [&] {
        if (out_dir == nullptr) proxsim::throw_config("out_dir is required");
        std::vector<double> grid;
        if (sigma_grid != nullptr && grid_len > 0) grid.assign(sigma_grid, sigma_grid + grid_len);
        else grid = s->cfg.sweep.sigma_grid;
        const auto rows = proxsim::pipeline::run_noise_sweep(s->cfg, out_dir, grid);
        if (out_sweep_csv != nullptr)
            *out_sweep_csv = dup_string(proxsim::pipeline::sweep_to_csv(rows));
        return PROXSIM_OK;
    });
}

int proxsim_report(proxsim_session* s, const char* in_dir, char** out_text) {
    return guarded(s, [&] {
        if (in_dir == nullptr) proxsim::throw_config("in_dir is required");
        const std::string text = proxsim::pipeline::run_report(in_dir);
        if (out_text != nullptr) *out_text = dup_string(text);
        return PROXSIM_OK;
    });
}

void proxsim_string_free(char* s) { std::free(s); }

}  // extern "C"
