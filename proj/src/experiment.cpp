#include "hrg/experiment.hpp"

#include "hrg/error.hpp"
#include "hrg/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace hrg {

using Json = nlohmann::ordered_json;

const char* to_string(SampleModel m) { return m == SampleModel::binomial ? "binomial" : "poisson"; }

const char* to_string(OmegaMode m) { return m == OmegaMode::log_log_r ? "loglogR" : "logR"; }

SampleModel parse_sample_model(const std::string& s) {
    if (s == "binomial") return SampleModel::binomial;
    if (s == "poisson") return SampleModel::poisson;
    throw InvalidArgument("model must be binomial or poisson, got '" + s + "'");
}

OmegaMode parse_omega_mode(const std::string& s) {
    if (s == "loglogR") return OmegaMode::log_log_r;
    if (s == "logR") return OmegaMode::log_r;
    throw InvalidArgument("omega mode must be loglogR or logR, got '" + s + "'");
}

double omega_value(OmegaMode mode, double big_r) {
    return mode == OmegaMode::log_log_r ? log_log(big_r) : std::log(std::max(big_r, 1.0));
}

void ExperimentConfig::validate() const {
    if (n_values.empty() || alpha_values.empty() || nu_values.empty())
        throw InvalidArgument("config: n, alpha and nu need at least one value");
    for (double n : n_values)
        if (!(std::isfinite(n) && n >= 1.0)) throw InvalidArgument("config: n must be >= 1");
    for (double a : alpha_values)
        if (!(std::isfinite(a) && a > 0.0)) throw InvalidArgument("config: alpha must be > 0");
    for (double v : nu_values)
        if (!(std::isfinite(v) && v > 0.0)) throw InvalidArgument("config: nu must be > 0");
    if (seeds == 0) throw InvalidArgument("config: seeds must be >= 1");
    if (seed_base > UINT64_MAX - seeds) throw InvalidArgument("config: seed_base + seeds overflows");
    if (pairs == 0) throw InvalidArgument("config: pairs must be >= 1");
    if (clustering_samples == 0) throw InvalidArgument("config: clustering_samples must be >= 1");
    if (threads < 1) throw InvalidArgument("config: threads must be >= 1");
    if (zeta && !(*zeta > 0.0)) throw InvalidArgument("config: zeta must be > 0");
    TubeParams{eps, c0}.validate();
    for (const Cell& c : cells()) (void)c.params();
}

std::vector<Cell> ExperimentConfig::cells() const {
    std::vector<Cell> out;
    for (double n : n_values)
        for (double a : alpha_values)
            for (double v : nu_values) out.push_back({n, a, v});
    return out;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

template <typename T>
T parse_number(const std::string& s, const std::string& where) {
    T value{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw InvalidArgument(where + ": cannot parse '" + s + "' as a number");
    return value;
}

std::vector<double> parse_list(const std::string& s, const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number<double>(trim(item), where));
    if (out.empty() || s.back() == ',') throw InvalidArgument(where + ": empty list item");
    return out;
}

bool parse_bool(const std::string& s, const std::string& where) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw InvalidArgument(where + ": expected true or false, got '" + s + "'");
}

} // namespace

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "config line " + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InvalidArgument(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw InvalidArgument(where + ": empty value for '" + key + "'");
        if (!seen.insert(key).second) throw InvalidArgument(where + ": duplicate key '" + key + "'");

        if (key == "experiment_id") {
            const bool ok = std::all_of(value.begin(), value.end(), [](char c) {
                return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
            });
            if (!ok) throw InvalidArgument(where + ": experiment_id may use letters, digits, '_', '-' and '.'");
            cfg.experiment_id = value;
        } else if (key == "n") {
            cfg.n_values = parse_list(value, where);
        } else if (key == "alpha") {
            cfg.alpha_values = parse_list(value, where);
        } else if (key == "nu") {
            cfg.nu_values = parse_list(value, where);
        } else if (key == "seeds") {
            cfg.seeds = parse_number<std::size_t>(value, where);
        } else if (key == "seed_base") {
            cfg.seed_base = parse_number<std::uint64_t>(value, where);
        } else if (key == "model") {
            cfg.model = parse_sample_model(value);
        } else if (key == "probes") {
            cfg.probes = parse_bool(value, where);
        } else if (key == "pairs") {
            cfg.pairs = parse_number<std::size_t>(value, where);
        } else if (key == "clustering_samples") {
            cfg.clustering_samples = parse_number<std::size_t>(value, where);
        } else if (key == "probe_roots") {
            cfg.probe_roots = parse_number<std::size_t>(value, where);
        } else if (key == "out") {
            cfg.out = value;
        } else if (key == "zeta") {
            cfg.zeta = parse_number<double>(value, where);
        } else if (key == "eps") {
            cfg.eps = parse_number<double>(value, where);
        } else if (key == "c0") {
            cfg.c0 = parse_number<double>(value, where);
        } else if (key == "omega_mode") {
            cfg.omega_mode = parse_omega_mode(value);
        } else if (key == "threads") {
            cfg.threads = parse_number<int>(value, where);
        } else {
            throw InvalidArgument(where + ": unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string() + ": cannot open config file");
    return parse_config(in);
}

PointSet generate_points(const Cell& cell, SampleModel model, std::uint64_t seed) {
    const ModelParams p = cell.params();
    if (model == SampleModel::binomial) return sample_binomial(p, static_cast<std::size_t>(std::llround(cell.n)), seed);
    return sample_poisson(p, seed);
}

std::vector<Vertex> sample_roots(std::size_t n, std::size_t count, std::uint64_t seed) {
    std::vector<Vertex> out;
    if (count >= n) {
        for (Vertex v = 0; v < n; ++v) out.push_back(v);
        return out;
    }
    // partial Fisher-Yates over a virtual identity array
    PhiloxEngine engine(seed, streams::kProbeRoots);
    std::unordered_map<std::size_t, std::size_t> swapped;
    auto at = [&](std::size_t i) {
        auto it = swapped.find(i);
        return it == swapped.end() ? i : it->second;
    };
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + engine.below(n - i);
        const std::size_t vi = at(i), vj = at(j);
        swapped[j] = vi;
        out.push_back(static_cast<Vertex>(vj));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

double nearest_rank(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
    return v[std::max<std::size_t>(k, 1) - 1];
}

} // namespace

ScalingRow analyze_graph(const Graph& g, std::uint64_t seed, const AnalysisOptions& options) {
    const PointSet& ps = g.points();
    const ModelParams& params = ps.params();
    ScalingRow row;
    // n_target is recomputed from R when points come from a file
    row.n = params.n_target();
    if (const double k = std::nearbyint(row.n); std::fabs(row.n - k) <= 1e-9 * row.n) row.n = k;
    row.alpha = params.alpha();
    row.nu = params.nu();
    row.seed = seed;
    row.points = g.num_vertices();
    row.edges = g.num_edges();

    const ComponentLabeling lab = connected_components(g);
    row.giant_fraction = lab.giant_fraction;
    if (lab.sizes.empty() || lab.sizes.front() < 2) {
        row.skipped.emplace_back("mean_d", g.num_vertices() == 0 ? "graph has no vertices" : "graph has no edges");
        row.skipped.emplace_back("ratio_to_log_r", "no pair distances");
    } else {
        const DistanceSample d = sample_pair_distances(g, lab, options.pairs, PairMode::same_component_pairs, seed);
        row.mean_d = d.mean;
        row.mean_d_stderr = d.stderr_mean;
        if (d.ratio_to_log_r) {
            row.ratio_to_log_r = d.ratio_to_log_r;
            row.ratio_stderr = d.stderr_mean / std::log(params.big_r());
        } else row.skipped.emplace_back("ratio_to_log_r", "ln R is not positive");
    }
    if (const auto tau = params.tau()) row.two_tau = 2.0 * *tau;
    else row.skipped.emplace_back("two_tau", "defined only for 1/2 < alpha < 1");

    try {
        const TailEstimate t = tail_exponent_estimate(degree_histogram(g), 0, seed);
        row.beta_hat = t.beta;
        row.beta_stderr = t.stderr_beta;
    } catch (const InvalidArgument& e) {
        row.skipped.emplace_back("beta_hat", e.what());
    }
    try {
        row.clustering = clustering_coefficient(g, ClusteringMode::sampled_local, options.clustering_samples, seed);
    } catch (const InvalidArgument& e) {
        row.skipped.emplace_back("clustering", e.what());
    }
    row.core_size = extract_core(g).core.size();

    if (!options.probes) {
        row.skipped.emplace_back("umbrella_q95", "probes disabled");
        return row;
    }
    std::vector<double> sizes;
    for (Vertex v : sample_roots(g.num_vertices(), options.probe_roots, seed)) {
        if (lab.size_of_vertex[v] < 2) continue;
        const UmbrellaResult res = simultaneous_breadth_exploration(g, v);
        if (res.outcome == UmbrellaOutcome::ok) sizes.push_back(res.umbrella->size);
    }
    if (sizes.empty()) row.skipped.emplace_back("umbrella_q95", "no sampled root in a non-wrapped component of size >= 2");
    else row.umbrella_q95 = nearest_rank(sizes, 0.95);
    return row;
}

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

} // namespace

std::vector<std::string> scaling_records(const ScalingRow& row, const std::string& experiment_id) {
    const Json params = {{"n", row.n}, {"alpha", row.alpha}, {"nu", row.nu}};
    std::map<std::string, std::string> reasons(row.skipped.begin(), row.skipped.end());
    std::vector<std::string> out;
    auto emit = [&](const std::string& metric, const std::optional<double>& value, const std::optional<double>& err) {
        Json j = {{"experiment_id", experiment_id}, {"params", params}, {"seed", row.seed}, {"metric", metric},
                  {"value", optional_number(value)}, {"stderr", optional_number(err)}};
        if (!value) {
            const auto it = reasons.find(metric);
            j["reason"] = it == reasons.end() ? "not computed" : it->second;
        }
        out.push_back(j.dump());
    };
    emit("points", double(row.points), std::nullopt);
    emit("edges", double(row.edges), std::nullopt);
    emit("mean_d", row.mean_d, row.mean_d_stderr);
    emit("ratio_to_log_r", row.ratio_to_log_r, row.ratio_stderr);
    emit("two_tau", row.two_tau, std::nullopt);
    emit("giant_fraction", row.giant_fraction, std::nullopt);
    emit("beta_hat", row.beta_hat, row.beta_stderr);
    emit("clustering", row.clustering, std::nullopt);
    emit("core_size", double(row.core_size), std::nullopt);
    emit("umbrella_q95", row.umbrella_q95, std::nullopt);
    return out;
}

std::vector<std::string> probe_records(const Graph& g, std::uint64_t seed, const ProbeOptions& options) {
    const PointSet& ps = g.points();
    const ModelParams& params = ps.params();
    const double big_r = params.big_r();
    const double hub_omega = omega_value(options.omega_mode.value_or(OmegaMode::log_log_r), big_r);
    const double type_omega = omega_value(options.omega_mode.value_or(OmegaMode::log_r), big_r);
    std::vector<std::string> out;
    auto record = [&](const char* probe, Json root, const std::string& outcome, Json path_or_size, Json rounds,
                      Json passed) {
        const Json j = {{"probe", probe},         {"root", std::move(root)},
                        {"seed", seed},           {"outcome", outcome},
                        {"path_or_size", std::move(path_or_size)}, {"rounds", std::move(rounds)},
                        {"validation_passed", std::move(passed)}};
        out.push_back(j.dump());
    };

    const CoreReport core = extract_core(g, hub_omega);
    record("core", nullptr, core.clique_verified ? "clique" : "not_clique", core.core.size(), nullptr,
           core.clique_verified);
    if (core.hub_witness) {
        record("hub", *core.hub_witness, core.hub_adjacent_to_all ? "adjacent_to_all" : "missing_targets",
               core.hub_targets, nullptr, core.hub_adjacent_to_all);
    }
    record("max_type", nullptr, exceeds_max_type(ps, type_omega) ? "exceeded" : "within", nullptr, nullptr, nullptr);

    std::optional<double> zeta = options.zeta;
    if (!zeta && params.delta()) zeta = 0.1 * *params.delta();

    for (Vertex v : sample_roots(g.num_vertices(), options.roots, seed)) {
        if (params.ultrasmall_regime() && ps.type(v) > 0.0 && zeta && *zeta < *params.delta()) {
            const auto path = find_exploding_path(g, v, *zeta);
            if (path) {
                record("exploding_path", v, "found", path->vertices, path->vertices.size() - 1,
                       validate_exploding_path(g, *path).empty());
            } else {
                record("exploding_path", v, "not_found", nullptr, nullptr, nullptr);
            }
        }
        const auto d = distance_to_core(g, v);
        record("distance_to_core", v, d == kUnreachable ? "unreachable" : "reached",
               d == kUnreachable ? Json(nullptr) : Json(d), nullptr, nullptr);

        const LayerTrace trace = layer_max_type_trace(g, v);
        bool applicable = false;
        const auto skips = non_skip_violations(g, trace, &applicable);
        record("layer_trace", v, trace.hit_round_cap ? "round_cap" : "stopped", trace.entries.back().max_type,
               trace.entries.size() - 1, applicable ? Json(skips == 0) : Json(nullptr));

        const UmbrellaResult res = simultaneous_breadth_exploration(g, v);
        Json size = nullptr, passed = nullptr;
        if (res.umbrella) {
            size = res.umbrella->size;
            passed = res.problems.empty() &&
                     umbrella_coverage_violations(g, *res.umbrella, component_of(g, v)) == 0;
        } else if (res.outcome == UmbrellaOutcome::round_cap) {
            passed = false;
        }
        record("umbrella", v, to_string(res.outcome), size, res.state.stopped ? Json(res.state.stop_round) : Json(nullptr),
               passed);
    }
    return out;
}

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : std::string(); }

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    for (const auto& l : lines) out << l << '\n';
    if (!out) throw IoError(path.string() + ": write failed");
}

struct Moments {
    std::vector<double> values;
    void add(const std::optional<double>& v) {
        if (v) values.push_back(*v);
    }
    std::optional<double> mean() const {
        if (values.empty()) return std::nullopt;
        double s = 0.0;
        for (double v : values) s += v;
        return s / double(values.size());
    }
    std::optional<double> stderr_mean() const {
        if (values.size() < 2) return std::nullopt;
        const double m = *mean();
        double ss = 0.0;
        for (double v : values) ss += (v - m) * (v - m);
        return std::sqrt(ss / double(values.size() - 1) / double(values.size()));
    }
};

const char* const kSummaryMetrics[] = {"mean_d",     "ratio_to_log_r", "giant_fraction", "beta_hat",
                                       "clustering", "core_size",      "umbrella_q95"};

std::optional<double> metric_of(const ScalingRow& r, const std::string& m) {
    if (m == "mean_d") return r.mean_d;
    if (m == "ratio_to_log_r") return r.ratio_to_log_r;
    if (m == "giant_fraction") return r.giant_fraction;
    if (m == "beta_hat") return r.beta_hat;
    if (m == "clustering") return r.clustering;
    if (m == "core_size") return double(r.core_size);
    return r.umbrella_q95;
}

} // namespace

std::string scaling_csv_header() {
    return "n,alpha,nu,seed,points,edges,mean_d,mean_d_stderr,ratio_to_log_r,two_tau,giant_fraction,beta_hat,"
           "beta_stderr,clustering,core_size,umbrella_q95";
}

std::string scaling_csv_line(const ScalingRow& r) {
    std::string s = fmt(r.n) + "," + fmt(r.alpha) + "," + fmt(r.nu) + "," + std::to_string(r.seed) + "," +
                    std::to_string(r.points) + "," + std::to_string(r.edges) + "," + fmt(r.mean_d) + "," +
                    fmt(r.mean_d_stderr) + "," + fmt(r.ratio_to_log_r) + "," + fmt(r.two_tau) + "," +
                    fmt(r.giant_fraction) + "," + fmt(r.beta_hat) + "," + fmt(r.beta_stderr) + "," +
                    fmt(r.clustering) + "," + std::to_string(r.core_size) + "," + fmt(r.umbrella_q95);
    return s;
}

SweepReport run_sweep(const ExperimentConfig& config) {
    config.validate();
    const std::vector<Cell> cells = config.cells();
    const std::size_t jobs = cells.size() * config.seeds;
    std::error_code ec;
    std::filesystem::create_directories(config.out, ec);
    if (ec) throw IoError(config.out.string() + ": cannot create output directory: " + ec.message());

    AnalysisOptions aopt;
    aopt.pairs = config.pairs;
    aopt.clustering_samples = config.clustering_samples;
    aopt.probes = config.probes;
    aopt.probe_roots = config.probe_roots;
    ProbeOptions popt;
    popt.roots = config.probe_roots;
    popt.zeta = config.zeta;
    popt.omega_mode = config.omega_mode;

    std::vector<std::optional<ScalingRow>> rows(jobs);
    std::vector<std::string> errors(jobs);
    const auto run_job = [&](std::size_t j) {
        const std::size_t c = j / config.seeds;
        const std::size_t s = j % config.seeds;
        const std::uint64_t seed = config.seed_for(s);
        try {
            const auto dir = config.out / ("cell_" + std::to_string(c)) / ("seed_" + std::to_string(s));
            std::filesystem::create_directories(dir);
            auto ps = std::make_shared<const PointSet>(generate_points(cells[c], config.model, seed));
            write_points_binary(*ps, dir / "points.hrgp");
            const Graph g = build_bucketed(ps);
            write_graph_binary(g, dir / "graph.hrgg");
            ScalingRow row = analyze_graph(g, seed, aopt);
            write_lines(dir / "rows.jsonl", scaling_records(row, config.experiment_id));
            if (config.probes) write_lines(dir / "probes.jsonl", probe_records(g, seed, popt));
            rows[j] = std::move(row);
        } catch (const std::exception& e) {
            errors[j] = e.what();
            if (errors[j].empty()) errors[j] = "unknown error";
        }
    };
#ifdef HRG_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.threads)
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(jobs); ++j) run_job(static_cast<std::size_t>(j));
#else
    for (std::size_t j = 0; j < jobs; ++j) run_job(j);
#endif

    SweepReport report;
    report.jobs = jobs;
    std::vector<std::string> row_lines{scaling_csv_header()}, failure_lines;
    for (std::size_t j = 0; j < jobs; ++j) {
        if (rows[j]) {
            row_lines.push_back(scaling_csv_line(*rows[j]));
            report.rows.push_back(*rows[j]);
        } else {
            ++report.failed;
            const Cell& cell = cells[j / config.seeds];
            const Json f = {{"cell", j / config.seeds}, {"seed", config.seed_for(j % config.seeds)},
                            {"params", {{"n", cell.n}, {"alpha", cell.alpha}, {"nu", cell.nu}}},
                            {"error", errors[j]}};
            failure_lines.push_back(f.dump());
        }
    }
    write_lines(config.out / "rows.csv", row_lines);
    write_lines(config.out / "failures.jsonl", failure_lines);

    std::string header = "cell,n,alpha,nu,seeds_ok,seeds_failed,two_tau";
    for (const char* m : kSummaryMetrics) header += std::string(",") + m + "_mean," + m + "_stderr";
    std::vector<std::string> summary{header};
    for (std::size_t c = 0; c < cells.size(); ++c) {
        std::size_t ok = 0;
        std::map<std::string, Moments> mom;
        for (std::size_t s = 0; s < config.seeds; ++s) {
            const auto& r = rows[c * config.seeds + s];
            if (!r) continue;
            ++ok;
            for (const char* m : kSummaryMetrics) mom[m].add(metric_of(*r, m));
        }
        const auto tau = cells[c].params().tau();
        std::string line = std::to_string(c) + "," + fmt(cells[c].n) + "," + fmt(cells[c].alpha) + "," +
                           fmt(cells[c].nu) + "," + std::to_string(ok) + "," + std::to_string(config.seeds - ok) + "," +
                           (tau ? fmt(2.0 * *tau) : std::string());
        for (const char* m : kSummaryMetrics) line += "," + fmt(mom[m].mean()) + "," + fmt(mom[m].stderr_mean());
        summary.push_back(line);
    }
    write_lines(config.out / "summary.csv", summary);
    return report;
}

} // namespace hrg
