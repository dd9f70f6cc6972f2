// hrglab: command-line driver for the hyperbolic random graph lab.
//
// Exit codes: 0 success, 1 usage, 2 validation failure, 3 I/O.

#include "hrg/error.hpp"
#include "hrg/experiment.hpp"
#include "hrg/rng.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kValidation = 2;
constexpr int kIo = 3;

struct ModelFlags {
    double n = 1000;
    double alpha = 0.75;
    double nu = 1.0;
    std::uint64_t seed = 0;
    std::string model = "poisson";
};

void add_model_flags(CLI::App* cmd, ModelFlags& f) {
    cmd->add_option("--n", f.n, "Target number of points N")->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", f.alpha, "Radial exponent alpha")->check(CLI::PositiveNumber);
    cmd->add_option("--nu", f.nu, "Density constant nu")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", f.seed, "Seed");
    cmd->add_option("--model", f.model, "binomial or poisson")->check(CLI::IsMember({"binomial", "poisson"}));
}

void write_lines(const std::vector<std::string>& lines, const std::string& out) {
    if (out.empty() || out == "-") {
        for (const auto& l : lines) std::cout << l << '\n';
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw hrg::IoError(out + ": cannot open for writing");
    for (const auto& l : lines) f << l << '\n';
    if (!f) throw hrg::IoError(out + ": write failed");
}

std::shared_ptr<const hrg::PointSet> load_points(const std::string& path) {
    return std::make_shared<const hrg::PointSet>(hrg::read_points_binary(path));
}

struct Check {
    bool all_ok = true;
    void report(const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
        all_ok = all_ok && ok;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolic random graph lab"};
    app.require_subcommand(1);

    ModelFlags gen;
    std::string gen_out, gen_csv;
    auto* generate = app.add_subcommand("generate", "Sample a point set");
    add_model_flags(generate, gen);
    generate->add_option("--out", gen_out, "Point file to write")->required();
    generate->add_option("--csv", gen_csv, "Also write a CSV export");

    std::string build_in, build_out, build_edges, build_method = "bucketed";
    int threads = 1;
    auto* build = app.add_subcommand("build", "Build the graph of a point file");
    build->add_option("points", build_in, "Point file")->required();
    build->add_option("--out", build_out, "Graph file to write")->required();
    build->add_option("--method", build_method, "bucketed or naive")->check(CLI::IsMember({"bucketed", "naive"}));
    build->add_option("--edges-csv", build_edges, "Also write the edge list as CSV");
    build->add_option("--threads", threads, "Builder threads")->check(CLI::PositiveNumber);

    std::string an_points, an_graph, an_out, an_id = "hrg";
    std::uint64_t an_seed = 0;
    hrg::AnalysisOptions an_opt;
    auto* analyze = app.add_subcommand("analyze", "Scaling metrics as JSON lines");
    analyze->add_option("points", an_points, "Point file")->required();
    analyze->add_option("graph", an_graph, "Graph file")->required();
    analyze->add_option("--seed", an_seed, "Seed for sampling pairs and vertices");
    analyze->add_option("--pairs", an_opt.pairs, "Same-component pairs")->check(CLI::PositiveNumber);
    analyze->add_flag("--probes", an_opt.probes, "Also measure umbrella sizes");
    analyze->add_option("--experiment-id", an_id, "experiment_id field");
    analyze->add_option("--out", an_out, "JSON-lines output (default stdout)");

    std::string pr_points, pr_graph, pr_out, pr_omega;
    std::uint64_t pr_seed = 0;
    std::optional<double> pr_zeta;
    hrg::ProbeOptions pr_opt;
    auto* probe = app.add_subcommand("probe", "Structural probes as JSON lines");
    probe->add_option("points", pr_points, "Point file")->required();
    probe->add_option("graph", pr_graph, "Graph file")->required();
    probe->add_option("--seed", pr_seed, "Seed for choosing roots");
    probe->add_option("--roots", pr_opt.roots, "Number of sampled roots");
    probe->add_option("--zeta", pr_zeta, "Exploding-path slack (default 0.1 delta)")->check(CLI::PositiveNumber);
    probe->add_option("--omega-mode", pr_omega, "loglogR or logR (default: loglogR for the hub, logR for max type)")->check(CLI::IsMember({"loglogR", "logR"}));
    probe->add_option("--out", pr_out, "JSON-lines output (default stdout)");

    std::string sw_config, sw_out;
    std::optional<int> sw_threads;
    auto* sweep = app.add_subcommand("sweep", "Run a configured grid of cells and seeds");
    sweep->add_option("config", sw_config, "Config file")->required();
    sweep->add_option("--out", sw_out, "Override the output directory");
    sweep->add_option("--threads", sw_threads, "Override the number of parallel jobs")->check(CLI::PositiveNumber);

    ModelFlags val;
    std::string val_points, val_graph, val_omega;
    std::uint64_t val_pairs = 100000;
    std::size_t val_roots = 200;
    std::optional<double> val_eps, val_c0, val_zeta;
    int val_threads = 1;
    auto* validate = app.add_subcommand("validate", "Run the invariant checks on a point/graph pair");
    add_model_flags(validate, val);
    validate->add_option("points", val_points, "Point file (default: sample from the model flags)");
    validate->add_option("graph", val_graph, "Graph file (default: build from the points)");
    validate->add_option("--pairs", val_pairs, "Random pairs for adjacency and tube checks");
    validate->add_option("--roots", val_roots, "Roots for the probe invariants");
    validate->add_option("--eps", val_eps, "Tube width (enables the tube check)");
    validate->add_option("--c0", val_c0, "Tube cutoff (enables the tube check)");
    validate->add_option("--zeta", val_zeta, "Exploding-path slack")->check(CLI::PositiveNumber);
    validate->add_option("--omega-mode", val_omega, "loglogR or logR (default: loglogR for the hub, logR for max type)")->check(CLI::IsMember({"loglogR", "logR"}));
    validate->add_option("--threads", val_threads, "Builder threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*generate) {
            const hrg::Cell cell{gen.n, gen.alpha, gen.nu};
            const hrg::PointSet ps = hrg::generate_points(cell, hrg::parse_sample_model(gen.model), gen.seed);
            hrg::write_points_binary(ps, gen_out);
            if (!gen_csv.empty()) hrg::write_points_csv(ps, gen_csv);
            std::cerr << "wrote " << ps.size() << " points to " << gen_out << '\n';
        } else if (*build) {
            auto ps = load_points(build_in);
            hrg::BuildOptions opt;
            opt.threads = threads;
            const hrg::Graph g = build_method == "naive" ? hrg::build_naive(ps, opt) : hrg::build_bucketed(ps, opt);
            hrg::write_graph_binary(g, build_out);
            if (!build_edges.empty()) hrg::write_edges_csv(g, build_edges);
            std::cerr << "wrote " << g.num_vertices() << " vertices, " << g.num_edges() << " edges to " << build_out
                      << '\n';
        } else if (*analyze) {
            const hrg::Graph g = hrg::read_graph_binary(an_graph, load_points(an_points));
            const hrg::ScalingRow row = hrg::analyze_graph(g, an_seed, an_opt);
            for (const auto& [metric, reason] : row.skipped) std::cerr << metric << " skipped: " << reason << '\n';
            write_lines(hrg::scaling_records(row, an_id), an_out);
        } else if (*probe) {
            const hrg::Graph g = hrg::read_graph_binary(pr_graph, load_points(pr_points));
            pr_opt.zeta = pr_zeta;
            if (!pr_omega.empty()) pr_opt.omega_mode = hrg::parse_omega_mode(pr_omega);
            write_lines(hrg::probe_records(g, pr_seed, pr_opt), pr_out);
        } else if (*sweep) {
            hrg::ExperimentConfig cfg = hrg::load_config(sw_config);
            if (!sw_out.empty()) cfg.out = sw_out;
            if (sw_threads) cfg.threads = *sw_threads;
            const hrg::SweepReport rep = hrg::run_sweep(cfg);
            std::cerr << rep.jobs - rep.failed << " of " << rep.jobs << " jobs succeeded; results in "
                      << cfg.out.string() << '\n';
            if (rep.failed > 0) return kValidation;
        } else if (*validate) {
            std::shared_ptr<const hrg::PointSet> ps;
            if (val_points.empty()) {
                ps = std::make_shared<const hrg::PointSet>(hrg::generate_points(
                    {val.n, val.alpha, val.nu}, hrg::parse_sample_model(val.model), val.seed));
            } else {
                ps = load_points(val_points);
            }
            hrg::BuildOptions bopt;
            bopt.threads = val_threads;
            const hrg::Graph g = val_graph.empty() ? hrg::build_bucketed(ps, bopt) : hrg::read_graph_binary(val_graph, ps);
            const hrg::ModelParams& params = ps->params();
            Check check;

            const auto rep = hrg::validate_graph(g);
            check.report("graph structure", rep.ok, rep.ok ? "ok" : rep.problems.front());

            std::uint64_t wrong = 0;
            if (g.num_vertices() >= 2) {
                const hrg::CounterRng rng(val.seed, hrg::streams::kCalibration);
                const auto n = g.num_vertices();
                for (std::uint64_t i = 0; i < val_pairs; ++i) {
                    const auto w = rng.words(i);
                    const auto u = static_cast<hrg::Vertex>(w[0] % n);
                    const auto v = static_cast<hrg::Vertex>(w[1] % n);
                    if (u == v) continue;
                    wrong += g.is_adjacent(u, v) != hrg::within_distance((*ps)[u], (*ps)[v], params.big_r());
                }
            }
            check.report("adjacency on random pairs", wrong == 0, std::to_string(wrong) + " mismatches");

            const auto hub_mode = val_omega.empty() ? hrg::OmegaMode::log_log_r : hrg::parse_omega_mode(val_omega);
            const auto core = hrg::extract_core(g, hrg::omega_value(hub_mode, params.big_r()));
            check.report("core clique", core.clique_verified,
                         std::to_string(core.core.size()) + " core vertices, " + std::to_string(core.missing_pairs) +
                             " missing pairs");
            if (core.hub_witness)
                check.report("hub adjacency", core.hub_adjacent_to_all, std::to_string(core.hub_targets) + " targets");

            if (val_eps || val_c0) {
                hrg::TubeParams tube;
                if (val_eps) tube.eps = *val_eps;
                if (val_c0) tube.c0 = *val_c0;
                tube.validate();
                std::uint64_t applicable = 0;
                const auto bad = hrg::tube_disagreements(params, tube, val_pairs, val.seed, &applicable);
                check.report("tube classification", bad == 0,
                             std::to_string(bad) + " disagreements on " + std::to_string(applicable) +
                                 " applicable pairs");
            }

            std::size_t skip_bad = 0, skip_checked = 0, cover_bad = 0, umbrella_bad = 0, umbrellas = 0;
            std::size_t path_bad = 0, paths = 0;
            std::optional<double> zeta = val_zeta;
            if (!zeta && params.delta()) zeta = 0.1 * *params.delta();
            for (hrg::Vertex v : hrg::sample_roots(g.num_vertices(), val_roots, val.seed)) {
                const auto trace = hrg::layer_max_type_trace(g, v);
                bool applicable = false;
                const auto s = hrg::non_skip_violations(g, trace, &applicable);
                if (applicable) {
                    ++skip_checked;
                    skip_bad += s > 0;
                }
                if (params.ultrasmall_regime() && zeta && *zeta < *params.delta() && ps->type(v) > 0.0) {
                    if (const auto path = hrg::find_exploding_path(g, v, *zeta)) {
                        ++paths;
                        path_bad += !hrg::validate_exploding_path(g, *path).empty();
                    }
                }
                const auto res = hrg::simultaneous_breadth_exploration(g, v);
                if (res.outcome == hrg::UmbrellaOutcome::wrapped_component) continue;
                ++umbrellas;
                if (res.outcome != hrg::UmbrellaOutcome::ok) {
                    ++umbrella_bad;
                    continue;
                }
                cover_bad += hrg::umbrella_coverage_violations(g, *res.umbrella, hrg::component_of(g, v)) > 0;
            }
            check.report("non-skip", skip_bad == 0,
                         std::to_string(skip_bad) + " failing of " + std::to_string(skip_checked) + " traces");
            check.report("umbrellas", umbrella_bad == 0,
                         std::to_string(umbrella_bad) + " failing of " + std::to_string(umbrellas));
            check.report("umbrella coverage", cover_bad == 0, std::to_string(cover_bad) + " roots with uncovered vertices");
            if (params.ultrasmall_regime())
                check.report("exploding paths", path_bad == 0,
                             std::to_string(path_bad) + " invalid of " + std::to_string(paths));
            return check.all_ok ? kOk : kValidation;
        }
    } catch (const hrg::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const hrg::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
    return kOk;
}
