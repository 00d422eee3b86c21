#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "blobtsp/config.hpp"
#include "blobtsp/geometry.hpp"
#include "blobtsp/swarm.hpp"

namespace blobtsp::harness {

struct CampaignSpec {
    std::vector<std::string> dataset_paths;
    int runs_per_dataset = 6;
    config::RunParams params;
    std::uint64_t base_seed = 1;
    std::string out_dir;       // empty = no artifacts on disk
    int frames_every = 0;      // 0 = no frame dumps
    int workers = 0;           // 0 = hardware concurrency
    int two_opt_restarts = 20; // baseline oracle when n > 24
};

enum class RunStatus { ok, no_convergence, city_off_perimeter };

const char* to_string(RunStatus s);

struct RunRecord {
    int dataset_index = 0;
    std::string dataset_name;
    int run_index = 0;
    std::uint64_t seed = 0;
    RunStatus status = RunStatus::ok;
    int halt_step = 0;
    int population_start = 0;
    int population_end = 0;
    double blob_length = 0.0;
    double oracle_length = 0.0;
    std::string oracle_kind; // "held_karp" or "two_opt"
    double ratio = 0.0;
    int components = 0;
    double largest_fraction = 0.0;
    bool halting_sound = false;
    std::string tour_labels;

    bool completed() const { return status == RunStatus::ok; }
};

struct DatasetStats {
    int dataset_index = 0;
    int completed = 0;
    double best = 0.0;
    double mean = 0.0;
    double worst = 0.0;
};

struct CampaignReport {
    std::vector<RunRecord> runs;
    std::vector<DatasetStats> per_dataset;
    double mean_of_best = 0.0;
    double mean_of_mean = 0.0;
    double mean_of_worst = 0.0;
    int failed_runs = 0;
    double completion_rate = 0.0;
    // Fraction of completed runs whose largest 8-connected component holds
    // at least 99% of the particles.
    double connectivity_rate = 0.0;
    bool exact_oracle = true;
};

// Documented so any single run can be reproduced in isolation:
// mix64(base_seed ^ mix64((dataset_index << 32 | run_index) + golden)).
std::uint64_t run_seed(std::uint64_t base_seed, int dataset_index,
                       int run_index);

// One full simulation: init on the hull, shrink to halt, read the tour,
// score against oracle_length. run_dir, when set, receives frames
// (frame_NNNNNN.pgm), trace.csv, mask.pgm and tour.txt.
RunRecord run_single(const geom::CityDataset& ds,
                     const config::RunParams& params, std::uint64_t seed,
                     double oracle_length, const std::string& oracle_kind,
                     const std::string& run_dir = {}, int frames_every = 0);

// Datasets x runs, oracles computed once per dataset, independent runs
// spread over a worker pool. Writes campaign.csv and summary.txt when
// out_dir is set.
CampaignReport run_campaign(const CampaignSpec& spec);

// Per-dataset and aggregate statistics from the run rows alone (so tests
// can cross-check them against the CSV).
void compute_statistics(CampaignReport& report);

std::string csv_header();
std::string csv_row(const RunRecord& r);
std::vector<RunRecord> parse_csv(const std::string& path);
void write_csv(const CampaignReport& report, const std::string& path);
std::string summary_text(const CampaignReport& report);

// Square-stimuli concavity experiment: stimuli spaced gap[edge] apart
// around a side x side square (edges indexed top, right, bottom, left),
// fixed step budget with no halting, per-edge concavity depth logged.
struct SquareSpec {
    int side = 120;
    std::array<int, 4> gaps{20, 20, 20, 20};
    int steps = 5000;
    config::RunParams params;
    std::uint64_t seed = 1;
    std::string out_dir; // empty = no frames
    std::vector<int> frame_times{100, 500, 1000, 2000, 3000, 3500, 4000, 5000};
    int log_every = 100;
};

struct ConcavityRow {
    int step = 0;
    std::array<double, 4> depth{}; // top, right, bottom, left
};

struct SquareResult {
    std::vector<ConcavityRow> log;
    geom::CityDataset stimuli;
};

// Deepest inward intrusion per edge: max over perpendicular scanlines of
// the distance from the edge to the first occupied cell.
std::array<double, 4> concavity_depths(const swarm::SimState& state, int ox,
                                       int oy, int side);

SquareResult square_scenario(const SquareSpec& spec);

// Field snapshot with 3x3 white city markers burnt in.
void render_frame(const swarm::SimState& state, const std::string& path);

void write_trace_csv(const swarm::SimState& state,
                     const geom::CityDataset& ds, const std::string& path);

} // namespace blobtsp::harness
