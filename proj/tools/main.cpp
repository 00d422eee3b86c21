#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blobtsp/config.hpp"
#include "blobtsp/geometry.hpp"
#include "blobtsp/harness.hpp"
#include "blobtsp/oracle.hpp"
#include "blobtsp/tracer.hpp"

namespace fs = std::filesystem;
using namespace blobtsp;

namespace {

config::RunParams load_params(const std::string& config_path,
                              std::uint64_t seed) {
    config::RunParams params;
    if (!config_path.empty()) params = config::load_run_params(config_path);
    if (seed != 0) params.swarm.rng_seed = seed;
    return params;
}

std::vector<std::string> collect_datasets(const std::string& dir) {
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".txt") {
            paths.push_back(entry.path().string());
        }
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty())
        throw std::runtime_error("no .txt datasets in " + dir);
    return paths;
}

void print_tour(const geom::Tour& tour, const geom::CityDataset& ds) {
    for (std::size_t i = 0; i < tour.order.size(); ++i) {
        if (i) std::cout << ' ';
        std::cout << ds.cities[static_cast<std::size_t>(tour.order[i])].label;
    }
    std::printf("\nlength %.6f\n", tour.length);
}

int cmd_gen_datasets(const std::string& out_dir, int count, int cities,
                     double radius, int min_sep, std::uint64_t seed,
                     int fifty_cities, int fifty_min_sep) {
    fs::create_directories(out_dir);
    for (int i = 0; i < count; ++i) {
        geom::CityDataset ds = geom::generate_dataset(
            cities, 100.0, 100.0, radius, min_sep, seed + static_cast<std::uint64_t>(i));
        char name[32];
        std::snprintf(name, sizeof(name), "ds%02d.txt", i + 1);
        geom::save_dataset(ds, out_dir + "/" + name);
        std::cout << name << ": " << cities << " cities\n";
    }
    if (fifty_cities > 0) {
        geom::CityDataset ds = geom::generate_dataset(
            fifty_cities, 100.0, 100.0, radius, fifty_min_sep,
            seed + static_cast<std::uint64_t>(count));
        geom::save_dataset(ds, out_dir + "/ds50.txt");
        std::cout << "ds50.txt: " << fifty_cities << " cities\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shrinking-blob TSP simulator and benchmark harness"};
    app.require_subcommand(1);

    // gen-datasets
    auto* gen = app.add_subcommand("gen-datasets",
                                   "Generate benchmark dataset files");
    std::string gen_out = "data/datasets";
    int gen_count = 20, gen_cities = 20, gen_min_sep = 25;
    double gen_radius = 90.0;
    std::uint64_t gen_seed = 2024;
    int gen_fifty = 50, gen_fifty_sep = 15;
    gen->add_option("--out", gen_out, "Output directory");
    gen->add_option("--count", gen_count, "Number of datasets");
    gen->add_option("--cities", gen_cities, "Cities per dataset");
    gen->add_option("--radius", gen_radius, "Arena radius (center 100,100)");
    gen->add_option("--min-sep", gen_min_sep, "Minimum city separation");
    gen->add_option("--seed", gen_seed, "Generation seed");
    gen->add_option("--fifty", gen_fifty,
                    "Also emit ds50.txt with this many cities (0 = skip)");
    gen->add_option("--fifty-min-sep", gen_fifty_sep,
                    "Minimum separation for the large dataset");

    // run
    auto* run = app.add_subcommand("run", "Single simulation run");
    std::string run_dataset, run_config, run_out;
    std::uint64_t run_seed_opt = 1;
    int run_frames = 0;
    run->add_option("--dataset", run_dataset, "Dataset file")->required();
    run->add_option("--config", run_config, "Key=value config file");
    run->add_option("--seed", run_seed_opt, "RNG seed");
    run->add_option("--out", run_out, "Artifact directory");
    run->add_option("--frames-every", run_frames, "Frame dump period (steps)");

    // campaign
    auto* camp = app.add_subcommand("campaign", "Benchmark campaign");
    std::string camp_dir, camp_config, camp_out = "campaign_out";
    std::vector<std::string> camp_files;
    int camp_runs = 6, camp_frames = 0, camp_workers = 0;
    std::uint64_t camp_seed = 1;
    bool camp_strict = false;
    camp->add_option("--datasets", camp_dir, "Directory of dataset .txt files");
    camp->add_option("--dataset-files", camp_files, "Explicit dataset files");
    camp->add_option("--config", camp_config, "Key=value config file");
    camp->add_option("--runs", camp_runs, "Runs per dataset");
    camp->add_option("--seed", camp_seed, "Base seed");
    camp->add_option("--out", camp_out, "Output directory");
    camp->add_option("--frames-every", camp_frames, "Frame dump period");
    camp->add_option("--workers", camp_workers, "Parallel runs (0 = auto)");
    camp->add_flag("--strict", camp_strict,
                   "Exit nonzero when any run fails");

    // square
    auto* sq = app.add_subcommand("square", "Square-stimuli concavity run");
    int sq_side = 120, sq_steps = 5000;
    std::vector<int> sq_gaps{20, 20, 20, 20};
    std::string sq_out = "square_out", sq_config;
    std::uint64_t sq_seed = 1;
    sq->add_option("--side", sq_side, "Square side in cells");
    sq->add_option("--gaps", sq_gaps,
                   "Stimulus spacing per edge: top right bottom left")
        ->expected(4);
    sq->add_option("--steps", sq_steps, "Fixed step budget");
    sq->add_option("--seed", sq_seed, "RNG seed");
    sq->add_option("--out", sq_out, "Output directory");
    sq->add_option("--config", sq_config, "Key=value config file");

    // solve
    auto* solve = app.add_subcommand("solve", "Oracle solver only");
    std::string solve_dataset, solve_method = "auto";
    std::uint64_t solve_seed = 1;
    int solve_restarts = 20;
    solve->add_option("--dataset", solve_dataset, "Dataset file")->required();
    solve->add_option("--method", solve_method,
                      "held_karp | brute_force | two_opt | auto");
    solve->add_option("--seed", solve_seed, "two_opt seed");
    solve->add_option("--restarts", solve_restarts, "two_opt restarts");

    // trace
    auto* tr = app.add_subcommand("trace", "Re-read a tour from a saved mask");
    std::string tr_mask, tr_dataset;
    int tr_radius = 3;
    tr->add_option("--mask", tr_mask, "mask.pgm from a run")->required();
    tr->add_option("--dataset", tr_dataset, "Dataset file")->required();
    tr->add_option("--detect-radius", tr_radius, "Chebyshev detect radius");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            return cmd_gen_datasets(gen_out, gen_count, gen_cities, gen_radius,
                                    gen_min_sep, gen_seed, gen_fifty,
                                    gen_fifty_sep);
        }
        if (*run) {
            const geom::CityDataset ds = geom::load_dataset(run_dataset);
            config::RunParams params = load_params(run_config, run_seed_opt);
            oracle::DistanceMatrix d(ds);
            double oracle_len;
            std::string kind;
            if (ds.size() <= 24) {
                oracle_len = oracle::held_karp(d).length;
                kind = "held_karp";
            } else {
                oracle_len = oracle::two_opt(d, params.swarm.rng_seed, 20).length;
                kind = "two_opt";
            }
            harness::RunRecord rec = harness::run_single(
                ds, params, params.swarm.rng_seed, oracle_len, kind, run_out,
                run_frames);
            std::cout << "status " << harness::to_string(rec.status)
                      << "  halt_step " << rec.halt_step << "  population "
                      << rec.population_start << " -> " << rec.population_end
                      << "\n";
            if (rec.completed()) {
                std::cout << rec.tour_labels << "\n";
                std::printf("length %.6f  %s %.6f  ratio %.4f\n",
                            rec.blob_length, kind.c_str(), rec.oracle_length,
                            rec.ratio);
            }
            return rec.completed() ? 0 : 1;
        }
        if (*camp) {
            harness::CampaignSpec spec;
            if (!camp_dir.empty()) spec.dataset_paths = collect_datasets(camp_dir);
            for (const auto& f : camp_files) spec.dataset_paths.push_back(f);
            if (spec.dataset_paths.empty())
                throw std::runtime_error("no datasets given");
            spec.params = load_params(camp_config, 0);
            spec.runs_per_dataset = camp_runs;
            spec.base_seed = camp_seed;
            spec.out_dir = camp_out;
            spec.frames_every = camp_frames;
            spec.workers = camp_workers;
            const harness::CampaignReport report = harness::run_campaign(spec);
            std::cout << harness::summary_text(report);
            if (camp_strict && report.failed_runs > 0) return 2;
            return 0;
        }
        if (*sq) {
            harness::SquareSpec spec;
            spec.side = sq_side;
            std::copy_n(sq_gaps.begin(), 4, spec.gaps.begin());
            spec.steps = sq_steps;
            spec.seed = sq_seed;
            spec.out_dir = sq_out;
            if (!sq_config.empty())
                spec.params = config::load_run_params(sq_config);
            const harness::SquareResult result = harness::square_scenario(spec);
            if (!result.log.empty()) {
                const auto& last = result.log.back();
                std::printf(
                    "step %d depths: top %.1f right %.1f bottom %.1f left %.1f\n",
                    last.step, last.depth[0], last.depth[1], last.depth[2],
                    last.depth[3]);
            }
            return 0;
        }
        if (*solve) {
            const geom::CityDataset ds = geom::load_dataset(solve_dataset);
            oracle::DistanceMatrix d(ds);
            geom::Tour tour;
            std::string method = solve_method;
            if (method == "auto") method = ds.size() <= 24 ? "held_karp" : "two_opt";
            if (method == "held_karp") tour = oracle::held_karp(d);
            else if (method == "brute_force") tour = oracle::brute_force(d);
            else if (method == "two_opt")
                tour = oracle::two_opt(d, solve_seed, solve_restarts);
            else throw std::runtime_error("unknown method: " + method);
            print_tour(tour, ds);
            return 0;
        }
        if (*tr) {
            const geom::CityDataset ds = geom::load_dataset(tr_dataset);
            const tracer::BlobMask raw = tracer::load_mask(tr_mask);
            const tracer::BlobMask mask = tracer::largest_component(raw);
            const tracer::BoundaryPath path = tracer::trace_boundary(mask);
            const geom::Tour tour = tracer::read_tour(path, ds, tr_radius);
            print_tour(tour, ds);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
