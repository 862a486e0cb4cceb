#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"
#include "orbital.hpp"
#include "relmotion.hpp"
#include "rflink.hpp"

#include "json.hpp"

namespace proxsim {
class CsvWriter;
}

namespace proxsim::scenario {

inline constexpr const char* kDatasetSchema = "proxsim-v1";

/// Exact serialized column order of the data shards. The last two columns
/// (sjnr_db, jam_state) are simulation-privileged; feature building strips them.
const std::vector<std::string>& shard_columns();

/// One labeled scenario: metadata plus aligned kinematic and RF time series.
struct ScenarioRecord {
    uint32_t scenario_id = 0;
    BehaviorClass cls = BehaviorClass::Benign;
    Regime regime = Regime::Leo;
    uint64_t seed = 0;
    orbital::ManeuverSpec maneuver;
    std::vector<relmotion::KinematicRow> kin;
    std::vector<rflink::LinkMetrics> rf;
};

/// End-to-end generation of one scenario; deterministic for
/// (cfg.master_seed, scenario_id).
ScenarioRecord generate_scenario(const RunConfig& cfg, BehaviorClass cls, Regime regime,
                                 uint32_t scenario_id);

struct CellSummary {
    BehaviorClass cls;
    Regime regime;
    std::string shard;
    uint64_t n_scenarios = 0;
    uint64_t n_rows = 0;
    uint64_t jam_on_rows = 0;
};

struct DatasetSummary {
    uint64_t n_scenarios = 0;
    uint64_t n_rows = 0;
    std::vector<CellSummary> cells;
    double duty_cycle[3] = {0.0, 0.0, 0.0};  // measured, per class
    std::string config_hash;
};

/// Generates scenarios_per_cell scenarios for each of the 9 class x regime
/// cells, appends rows to per-cell CSV shards under out_dir, and writes
/// manifest.json. Overrides cfg.scenarios_per_cell when n_per_cell > 0.
DatasetSummary generate_dataset(const RunConfig& cfg, const std::string& out_dir,
                                int n_per_cell = 0);

/// Appends one record to an open shard writer (exact shard column order).
void write_record(CsvWriter& w, const ScenarioRecord& rec);

nlohmann::json summary_to_json(const DatasetSummary& s);

}  // namespace proxsim::scenario
