#include "blobtsp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "blobtsp/lattice.hpp"
#include "blobtsp/oracle.hpp"
#include "blobtsp/tracer.hpp"

namespace fs = std::filesystem;

namespace blobtsp::harness {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string frame_name(int step) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%06d.pgm", step);
    return buf;
}

std::string tour_labels_text(const geom::Tour& tour,
                             const geom::CityDataset& ds) {
    std::string out;
    for (std::size_t i = 0; i < tour.order.size(); ++i) {
        if (i) out += ' ';
        out += ds.cities[static_cast<std::size_t>(tour.order[i])].label;
    }
    return out;
}

} // namespace

const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::ok: return "ok";
        case RunStatus::no_convergence: return "no_convergence";
        case RunStatus::city_off_perimeter: return "city_off_perimeter";
    }
    return "unknown";
}

std::uint64_t run_seed(std::uint64_t base_seed, int dataset_index,
                       int run_index) {
    const std::uint64_t job =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(dataset_index))
         << 32) |
        static_cast<std::uint32_t>(run_index);
    return mix64(base_seed ^ mix64(job + 0x9E3779B97F4A7C15ull));
}

void render_frame(const swarm::SimState& state, const std::string& path) {
    std::vector<std::uint8_t> gray = lattice::field_to_gray(state.field);
    const int w = state.field.width();
    const int h = state.field.height();
    for (const lattice::CityStimulus& c : state.cities) {
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int x = c.x + dx;
                const int y = c.y + dy;
                if (x >= 0 && x < w && y >= 0 && y < h) {
                    gray[static_cast<std::size_t>(y) * w + x] = 255;
                }
            }
        }
    }
    lattice::write_pgm(path, w, h, gray);
}

void write_trace_csv(const swarm::SimState& state,
                     const geom::CityDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace: " + path);
    out << "step,city_label\n";
    for (const swarm::UncoverEvent& e : state.trace) {
        out << e.step << ","
            << ds.cities[static_cast<std::size_t>(e.city)].label << "\n";
    }
}

RunRecord run_single(const geom::CityDataset& ds,
                     const config::RunParams& params, std::uint64_t seed,
                     double oracle_length, const std::string& oracle_kind,
                     const std::string& run_dir, int frames_every) {
    RunRecord rec;
    rec.seed = seed;
    rec.oracle_length = oracle_length;
    rec.oracle_kind = oracle_kind;

    if (!run_dir.empty()) fs::create_directories(run_dir);

    std::vector<geom::Point> pts;
    pts.reserve(static_cast<std::size_t>(ds.size()));
    for (int i = 0; i < ds.size(); ++i) pts.push_back(ds.point(i));
    const std::vector<geom::Point> hull = geom::convex_hull(pts);

    Rng rng(seed);
    swarm::SimState state = swarm::init_blob(
        hull, params.swarm, params.lattice_width, params.lattice_height, rng);
    swarm::attach_cities(state, ds);
    rec.population_start = state.population();

    swarm::StepCallback on_step;
    if (!run_dir.empty() && frames_every > 0) {
        on_step = [&](const swarm::SimState& s) {
            if (s.step % frames_every == 0) {
                render_frame(s, run_dir + "/" + frame_name(s.step));
            }
        };
    }

    const bool converged =
        swarm::run_until_halt(state, params.swarm, rng, params.max_steps, on_step);
    rec.halt_step = state.step;
    rec.population_end = state.population();

    if (!swarm::occupancy_consistent(state))
        throw std::logic_error("occupancy bijection broken at halt");

    const tracer::ComponentStats comp = tracer::component_stats(state);
    rec.components = comp.components;
    rec.largest_fraction =
        comp.total > 0 ? static_cast<double>(comp.largest) / comp.total : 0.0;

    if (!run_dir.empty() && frames_every > 0 && state.step % frames_every != 0) {
        render_frame(state, run_dir + "/" + frame_name(state.step));
    }

    if (!converged) {
        rec.status = RunStatus::no_convergence;
        return rec;
    }

    rec.halting_sound = true;
    for (const lattice::CityStimulus& c : state.cities) {
        if (lattice::count_particles_window(state.occ, c.x, c.y,
                                            params.swarm.halting_half_width) >=
            params.swarm.halting_threshold) {
            rec.halting_sound = false;
        }
    }

    try {
        const tracer::BlobMask mask = tracer::extract_mask(state);
        const tracer::BoundaryPath path = tracer::trace_boundary(mask);
        const geom::Tour tour = tracer::read_tour(path, ds, params.detect_radius);
        rec.blob_length = tour.length;
        rec.ratio = tour.length / oracle_length;
        rec.tour_labels = tour_labels_text(tour, ds);

        if (!run_dir.empty()) {
            tracer::save_mask(mask, run_dir + "/mask.pgm");
            std::ofstream tf(run_dir + "/tour.txt");
            tf << rec.tour_labels << "\n" << fmt_double(tour.length) << "\n";
            write_trace_csv(state, ds, run_dir + "/trace.csv");
        }
    } catch (const std::runtime_error&) {
        rec.status = RunStatus::city_off_perimeter;
        return rec;
    }
    return rec;
}

void compute_statistics(CampaignReport& report) {
    report.per_dataset.clear();
    report.failed_runs = 0;
    int max_dataset = -1;
    for (const RunRecord& r : report.runs) {
        max_dataset = std::max(max_dataset, r.dataset_index);
    }
    double sum_best = 0.0, sum_mean = 0.0, sum_worst = 0.0;
    int datasets_with_runs = 0;
    int connected = 0, completed_total = 0;
    for (int di = 0; di <= max_dataset; ++di) {
        DatasetStats st;
        st.dataset_index = di;
        double best = 0.0, worst = 0.0, sum = 0.0;
        for (const RunRecord& r : report.runs) {
            if (r.dataset_index != di) continue;
            if (!r.completed()) continue;
            if (st.completed == 0) {
                best = worst = r.ratio;
            } else {
                best = std::min(best, r.ratio);
                worst = std::max(worst, r.ratio);
            }
            sum += r.ratio;
            ++st.completed;
        }
        if (st.completed > 0) {
            st.best = best;
            st.worst = worst;
            st.mean = sum / st.completed;
            sum_best += st.best;
            sum_mean += st.mean;
            sum_worst += st.worst;
            ++datasets_with_runs;
        }
        report.per_dataset.push_back(st);
    }
    for (const RunRecord& r : report.runs) {
        if (!r.completed()) {
            ++report.failed_runs;
            continue;
        }
        ++completed_total;
        if (r.largest_fraction >= 0.99) ++connected;
    }
    report.mean_of_best = datasets_with_runs ? sum_best / datasets_with_runs : 0.0;
    report.mean_of_mean = datasets_with_runs ? sum_mean / datasets_with_runs : 0.0;
    report.mean_of_worst =
        datasets_with_runs ? sum_worst / datasets_with_runs : 0.0;
    report.completion_rate =
        report.runs.empty()
            ? 0.0
            : static_cast<double>(completed_total) / report.runs.size();
    report.connectivity_rate =
        completed_total ? static_cast<double>(connected) / completed_total : 0.0;
    report.exact_oracle = true;
    for (const RunRecord& r : report.runs) {
        if (r.oracle_kind != "held_karp") report.exact_oracle = false;
        if (r.completed() && r.oracle_kind == "held_karp" &&
            r.ratio < 1.0 - 1e-9) {
            throw std::logic_error("tour beat the exact optimum: dataset " +
                                   std::to_string(r.dataset_index));
        }
    }
}

CampaignReport run_campaign(const CampaignSpec& spec) {
    if (spec.runs_per_dataset < 1)
        throw std::invalid_argument("runs_per_dataset must be >= 1");

    std::vector<geom::CityDataset> datasets;
    datasets.reserve(spec.dataset_paths.size());
    for (const std::string& path : spec.dataset_paths) {
        datasets.push_back(geom::load_dataset(path));
    }
    const int n_datasets = static_cast<int>(datasets.size());

    int workers = spec.workers > 0
                      ? spec.workers
                      : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, workers);

    // Exact optimum once per dataset; the 2-opt baseline stands in above
    // the Held-Karp size limit.
    std::vector<double> oracle_len(static_cast<std::size_t>(n_datasets));
    std::vector<std::string> oracle_kind(static_cast<std::size_t>(n_datasets));
    {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr err;
        std::mutex err_mutex;
        for (int t = 0; t < std::min(workers, n_datasets); ++t) {
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < n_datasets;
                     i = next.fetch_add(1)) {
                    try {
                        const auto& ds = datasets[static_cast<std::size_t>(i)];
                        oracle::DistanceMatrix d(ds);
                        if (ds.size() <= 24) {
                            oracle_len[static_cast<std::size_t>(i)] =
                                oracle::held_karp(d).length;
                            oracle_kind[static_cast<std::size_t>(i)] = "held_karp";
                        } else {
                            oracle_len[static_cast<std::size_t>(i)] =
                                oracle::two_opt(d, spec.base_seed,
                                                spec.two_opt_restarts)
                                    .length;
                            oracle_kind[static_cast<std::size_t>(i)] = "two_opt";
                        }
                    } catch (...) {
                        std::lock_guard lock(err_mutex);
                        if (!err) err = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
    }

    CampaignReport report;
    const int n_jobs = n_datasets * spec.runs_per_dataset;
    report.runs.resize(static_cast<std::size_t>(n_jobs));
    {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr err;
        std::mutex err_mutex;
        for (int t = 0; t < std::min(workers, n_jobs); ++t) {
            pool.emplace_back([&] {
                for (int job = next.fetch_add(1); job < n_jobs;
                     job = next.fetch_add(1)) {
                    const int di = job / spec.runs_per_dataset;
                    const int ri = job % spec.runs_per_dataset;
                    try {
                        const auto& ds = datasets[static_cast<std::size_t>(di)];
                        std::string run_dir;
                        if (!spec.out_dir.empty()) {
                            run_dir =
                                spec.out_dir + "/" +
                                fs::path(spec.dataset_paths[static_cast<std::size_t>(
                                             di)])
                                    .stem()
                                    .string() +
                                "_run" + std::to_string(ri);
                        }
                        RunRecord rec = run_single(
                            ds, spec.params,
                            run_seed(spec.base_seed, di, ri),
                            oracle_len[static_cast<std::size_t>(di)],
                            oracle_kind[static_cast<std::size_t>(di)], run_dir,
                            spec.frames_every);
                        rec.dataset_index = di;
                        rec.dataset_name =
                            fs::path(spec.dataset_paths[static_cast<std::size_t>(di)])
                                .stem()
                                .string();
                        rec.run_index = ri;
                        report.runs[static_cast<std::size_t>(job)] = std::move(rec);
                    } catch (...) {
                        std::lock_guard lock(err_mutex);
                        if (!err) err = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
    }

    compute_statistics(report);

    if (!spec.out_dir.empty()) {
        fs::create_directories(spec.out_dir);
        write_csv(report, spec.out_dir + "/campaign.csv");
        std::ofstream sf(spec.out_dir + "/summary.txt");
        sf << summary_text(report);
    }
    return report;
}

std::string csv_header() {
    return "dataset,dataset_name,run,seed,status,halt_step,population_start,"
           "population_end,blob_length,oracle_length,oracle_kind,ratio,"
           "components,largest_fraction,halting_sound,tour";
}

std::string csv_row(const RunRecord& r) {
    std::ostringstream out;
    out << r.dataset_index << "," << r.dataset_name << "," << r.run_index << ","
        << r.seed << "," << to_string(r.status) << "," << r.halt_step << ","
        << r.population_start << "," << r.population_end << ","
        << fmt_double(r.blob_length) << "," << fmt_double(r.oracle_length)
        << "," << r.oracle_kind << "," << fmt_double(r.ratio) << ","
        << r.components << "," << fmt_double(r.largest_fraction) << ","
        << (r.halting_sound ? 1 : 0) << "," << r.tour_labels;
    return out.str();
}

void write_csv(const CampaignReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write csv: " + path);
    out << csv_header() << "\n";
    for (const RunRecord& r : report.runs) out << csv_row(r) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<RunRecord> parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open csv: " + path);
    std::string line;
    if (!std::getline(in, line) || line != csv_header())
        throw std::runtime_error("unexpected csv header in " + path);
    std::vector<RunRecord> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t pos = 0;
        for (int i = 0; i < 15; ++i) {
            const auto comma = line.find(',', pos);
            if (comma == std::string::npos)
                throw std::runtime_error("short csv row in " + path);
            f.push_back(line.substr(pos, comma - pos));
            pos = comma + 1;
        }
        f.push_back(line.substr(pos)); // tour may contain spaces, never commas
        RunRecord r;
        r.dataset_index = std::stoi(f[0]);
        r.dataset_name = f[1];
        r.run_index = std::stoi(f[2]);
        r.seed = std::stoull(f[3]);
        if (f[4] == "ok") r.status = RunStatus::ok;
        else if (f[4] == "no_convergence") r.status = RunStatus::no_convergence;
        else r.status = RunStatus::city_off_perimeter;
        r.halt_step = std::stoi(f[5]);
        r.population_start = std::stoi(f[6]);
        r.population_end = std::stoi(f[7]);
        r.blob_length = std::stod(f[8]);
        r.oracle_length = std::stod(f[9]);
        r.oracle_kind = f[10];
        r.ratio = std::stod(f[11]);
        r.components = std::stoi(f[12]);
        r.largest_fraction = std::stod(f[13]);
        r.halting_sound = f[14] == "1";
        r.tour_labels = f[15];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string summary_text(const CampaignReport& report) {
    std::ostringstream out;
    out << "runs: " << report.runs.size() << "  failed: " << report.failed_runs
        << "  completion: " << fmt_double(report.completion_rate * 100.0)
        << "%\n";
    out << "oracle: " << (report.exact_oracle ? "held_karp" : "two_opt baseline")
        << "\n";
    out << "connectivity (largest component >= 99%): "
        << fmt_double(report.connectivity_rate * 100.0) << "%\n\n";
    out << "dataset  completed  best     mean     worst\n";
    for (const DatasetStats& st : report.per_dataset) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%-8d %-10d %-8.4f %-8.4f %-8.4f\n",
                      st.dataset_index, st.completed, st.best, st.mean,
                      st.worst);
        out << buf;
    }
    out << "\naggregate mean of best:  " << fmt_double(report.mean_of_best)
        << "\naggregate mean of mean:  " << fmt_double(report.mean_of_mean)
        << "\naggregate mean of worst: " << fmt_double(report.mean_of_worst)
        << "\n";
    return out.str();
}

std::array<double, 4> concavity_depths(const swarm::SimState& state, int ox,
                                       int oy, int side) {
    const lattice::OccupancyGrid& occ = state.occ;
    std::array<double, 4> depth{};
    // top: scan each column downward from the edge
    for (int x = ox; x <= ox + side; ++x) {
        int d = side;
        for (int y = oy; y <= oy + side; ++y) {
            if (occ.occupied(x, y)) {
                d = y - oy;
                break;
            }
        }
        depth[0] = std::max(depth[0], static_cast<double>(d));
    }
    // right: scan each row leftward
    for (int y = oy; y <= oy + side; ++y) {
        int d = side;
        for (int x = ox + side; x >= ox; --x) {
            if (occ.occupied(x, y)) {
                d = ox + side - x;
                break;
            }
        }
        depth[1] = std::max(depth[1], static_cast<double>(d));
    }
    // bottom: scan each column upward
    for (int x = ox; x <= ox + side; ++x) {
        int d = side;
        for (int y = oy + side; y >= oy; --y) {
            if (occ.occupied(x, y)) {
                d = oy + side - y;
                break;
            }
        }
        depth[2] = std::max(depth[2], static_cast<double>(d));
    }
    // left: scan each row rightward
    for (int y = oy; y <= oy + side; ++y) {
        int d = side;
        for (int x = ox; x <= ox + side; ++x) {
            if (occ.occupied(x, y)) {
                d = x - ox;
                break;
            }
        }
        depth[3] = std::max(depth[3], static_cast<double>(d));
    }
    return depth;
}

SquareResult square_scenario(const SquareSpec& spec) {
    const int w = spec.params.lattice_width;
    const int h = spec.params.lattice_height;
    const int side = spec.side;
    const int ox = (w - side) / 2;
    const int oy = (h - side) / 2;
    for (int g : spec.gaps) {
        if (g <= 0 || side % g != 0)
            throw std::invalid_argument("gap must divide the square side");
    }

    // Stimuli walk the border clockwise from the top-left corner; each edge
    // contributes its starting corner, so corners are not duplicated.
    SquareResult result;
    auto add = [&](int x, int y) {
        const int i = result.stimuli.size();
        result.stimuli.cities.push_back({geom::label_for_index(i), x, y});
    };
    for (int x = ox; x < ox + side; x += spec.gaps[0]) add(x, oy);
    for (int y = oy; y < oy + side; y += spec.gaps[1]) add(ox + side, y);
    for (int x = ox + side; x > ox; x -= spec.gaps[2]) add(x, oy + side);
    for (int y = oy + side; y > oy; y -= spec.gaps[3]) add(ox, y);

    const std::vector<geom::Point> square_hull{
        {ox, oy}, {ox, oy + side}, {ox + side, oy + side}, {ox + side, oy}};

    Rng rng(spec.seed);
    swarm::SimState state =
        swarm::init_blob(square_hull, spec.params.swarm, w, h, rng);
    swarm::attach_cities(state, result.stimuli);

    if (!spec.out_dir.empty()) fs::create_directories(spec.out_dir);

    for (int t = 1; t <= spec.steps; ++t) {
        swarm::step(state, spec.params.swarm, rng);
        state.halted = false; // fixed budget, no halting
        if (spec.log_every > 0 && t % spec.log_every == 0) {
            result.log.push_back({t, concavity_depths(state, ox, oy, side)});
        }
        if (!spec.out_dir.empty() &&
            std::find(spec.frame_times.begin(), spec.frame_times.end(), t) !=
                spec.frame_times.end()) {
            render_frame(state, spec.out_dir + "/" + frame_name(t));
        }
    }

    if (!spec.out_dir.empty()) {
        std::ofstream out(spec.out_dir + "/concavity.csv");
        out << "step,top,right,bottom,left\n";
        for (const ConcavityRow& row : result.log) {
            out << row.step << "," << fmt_double(row.depth[0]) << ","
                << fmt_double(row.depth[1]) << "," << fmt_double(row.depth[2])
                << "," << fmt_double(row.depth[3]) << "\n";
        }
    }
    return result;
}

} // namespace blobtsp::harness
