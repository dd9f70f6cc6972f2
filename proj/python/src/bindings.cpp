#include "hrg/analysis.hpp"
#include "hrg/error.hpp"
#include "hrg/experiment.hpp"
#include "hrg/graph.hpp"
#include "hrg/point_process.hpp"
#include "hrg/probes.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace hrg;

namespace {

// PointSet is immutable, so the non-const holder never allows mutation.
using PointsPtr = std::shared_ptr<PointSet>;

template <class T>
py::array_t<T> to_array(const std::vector<T>& v) {
    py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::dict labeling_dict(const ComponentLabeling& lab) {
    py::dict d;
    d["label"] = to_array(lab.label);
    d["sizes"] = to_array(lab.sizes);
    d["giant_fraction"] = lab.giant_fraction;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Random hyperbolic graphs: sampling, construction, analysis and structure probes";

    // translators run last-registered first, so the base class goes first
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<RangeError>(m, "RangeError", PyExc_OverflowError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init(&ModelParams::create), py::arg("n"), py::arg("alpha"), py::arg("nu") = 1.0)
        .def_property_readonly("n", &ModelParams::n_target)
        .def_property_readonly("alpha", &ModelParams::alpha)
        .def_property_readonly("nu", &ModelParams::nu)
        .def_property_readonly("R", &ModelParams::big_r)
        .def_property_readonly("tau", &ModelParams::tau)
        .def_property_readonly("delta", &ModelParams::delta)
        .def("__repr__", [](const ModelParams& p) {
            return "ModelParams(n=" + std::to_string(p.n_target()) + ", alpha=" + std::to_string(p.alpha()) +
                   ", nu=" + std::to_string(p.nu()) + ")";
        });

    py::class_<PointSet, PointsPtr>(m, "PointSet")
        .def("__len__", &PointSet::size)
        .def_property_readonly("params", &PointSet::params)
        .def_property_readonly("r", [](const PointSet& ps) {
            py::array_t<double> out(static_cast<py::ssize_t>(ps.size()));
            for (std::size_t i = 0; i < ps.size(); ++i) out.mutable_data()[i] = ps[i].r;
            return out;
        })
        .def_property_readonly("theta", [](const PointSet& ps) {
            py::array_t<double> out(static_cast<py::ssize_t>(ps.size()));
            for (std::size_t i = 0; i < ps.size(); ++i) out.mutable_data()[i] = ps[i].theta;
            return out;
        })
        .def("type", &PointSet::type, py::arg("i"))
        .def("sample_index", &PointSet::sample_index, py::arg("i"))
        .def_property_readonly("seed", [](const PointSet& ps) { return ps.seed().seed; })
        .def_property_readonly("provenance", [](const PointSet& ps) { return to_string(ps.provenance()); });

    m.def("sample_poisson", [](const ModelParams& p, std::uint64_t seed) {
        return std::make_shared<PointSet>(sample_poisson(p, seed));
    }, py::arg("params"), py::arg("seed"));
    m.def("sample_binomial", [](const ModelParams& p, std::size_t count, std::uint64_t seed) {
        return std::make_shared<PointSet>(sample_binomial(p, count, seed));
    }, py::arg("params"), py::arg("count"), py::arg("seed"));
    m.def("read_points", [](const std::filesystem::path& path) {
        return std::make_shared<PointSet>(read_points_binary(path));
    }, py::arg("path"));
    m.def("write_points", [](const PointsPtr& ps, const std::filesystem::path& path) { write_points_binary(*ps, path); },
          py::arg("points"), py::arg("path"));

    py::class_<Graph>(m, "Graph")
        .def_property_readonly("num_vertices", &Graph::num_vertices)
        .def_property_readonly("num_edges", &Graph::num_edges)
        .def_property_readonly("method", [](const Graph& g) { return to_string(g.build_method()); })
        .def_property_readonly("points", [](const Graph& g) { return std::const_pointer_cast<PointSet>(g.points_ptr()); })
        .def("degree", &Graph::degree, py::arg("v"))
        .def("neighbors", [](const Graph& g, Vertex v) {
            if (v >= g.num_vertices()) throw InvalidArgument("vertex out of range");
            const auto nb = g.neighbors(v);
            return to_array(std::vector<Vertex>(nb.begin(), nb.end()));
        }, py::arg("v"))
        .def("is_adjacent", &Graph::is_adjacent, py::arg("u"), py::arg("v"))
        .def("edges", [](const Graph& g) {
            const auto e = g.edge_list();
            py::array_t<Vertex> out({static_cast<py::ssize_t>(e.size()), py::ssize_t{2}});
            auto w = out.mutable_unchecked<2>();
            for (std::size_t i = 0; i < e.size(); ++i) {
                w(i, 0) = e[i].first;
                w(i, 1) = e[i].second;
            }
            return out;
        });

    m.def("build_bucketed", [](const PointsPtr& ps, int threads) {
        BuildOptions o;
        o.threads = threads;
        py::gil_scoped_release release;
        return build_bucketed(ps, o);
    }, py::arg("points"), py::arg("threads") = 1);
    m.def("build_naive", [](const PointsPtr& ps) {
        py::gil_scoped_release release;
        return build_naive(ps);
    }, py::arg("points"));
    m.def("read_graph", [](const std::filesystem::path& path, PointsPtr ps) { return read_graph_binary(path, ps); },
          py::arg("path"), py::arg("points") = nullptr);
    m.def("write_graph", &write_graph_binary, py::arg("graph"), py::arg("path"));
    m.def("validate_graph", [](const Graph& g) {
        const auto r = validate_graph(g);
        return py::make_tuple(r.ok, r.problems);
    }, py::arg("graph"));

    m.def("connected_components", [](const Graph& g) { return labeling_dict(connected_components(g)); },
          py::arg("graph"));
    m.def("bfs_distances", [](const Graph& g, Vertex s) { return to_array(bfs_distances(g, s)); }, py::arg("graph"),
          py::arg("source"));
    m.def("mean_distance", [](const Graph& g, std::size_t pairs, std::uint64_t seed) {
        const auto lab = connected_components(g);
        const auto d = sample_pair_distances(g, lab, pairs, PairMode::same_component_pairs, seed);
        py::dict out;
        out["mean"] = d.mean;
        out["stderr"] = d.stderr_mean;
        out["median"] = d.median;
        out["max"] = d.max;
        out["ratio_to_log_r"] = d.ratio_to_log_r;
        return out;
    }, py::arg("graph"), py::arg("pairs") = 2000, py::arg("seed") = 0);
    m.def("degree_histogram", [](const Graph& g) { return to_array(degree_histogram(g)); }, py::arg("graph"));
    m.def("tail_exponent", [](const Graph& g, std::size_t k, std::uint64_t seed) {
        const auto t = tail_exponent_estimate(degree_histogram(g), k, seed);
        return py::make_tuple(t.beta, t.stderr_beta, t.k_tail);
    }, py::arg("graph"), py::arg("k_tail") = 0, py::arg("seed") = 0);
    m.def("clustering", [](const Graph& g, std::size_t samples, std::uint64_t seed) {
        return samples == 0 ? clustering_coefficient(g, ClusteringMode::global_transitivity)
                            : clustering_coefficient(g, ClusteringMode::sampled_local, samples, seed);
    }, py::arg("graph"), py::arg("samples") = 0, py::arg("seed") = 0,
          "Global transitivity when samples is 0, else the sampled mean local coefficient.");

    m.def("core", [](const Graph& g) {
        const auto c = extract_core(g);
        py::dict out;
        out["vertices"] = to_array(c.core);
        out["clique"] = c.clique_verified;
        out["hub"] = c.hub_witness;
        out["hub_adjacent_to_all"] = c.hub_adjacent_to_all;
        return out;
    }, py::arg("graph"));
    m.def("distance_to_core", &distance_to_core, py::arg("graph"), py::arg("v"));
    m.def("exploding_path", [](const Graph& g, Vertex v, double zeta) -> std::optional<std::vector<Vertex>> {
        const auto p = find_exploding_path(g, v, zeta);
        if (!p) return std::nullopt;
        return p->vertices;
    }, py::arg("graph"), py::arg("v"), py::arg("zeta"));
    m.def("umbrella", [](const Graph& g, Vertex v) {
        const auto res = simultaneous_breadth_exploration(g, v);
        py::dict out;
        out["outcome"] = to_string(res.outcome);
        if (res.umbrella) {
            out["size"] = res.umbrella->size;
            out["spanning_path"] = res.umbrella->spanning_path;
            out["connector"] = res.umbrella->connector;
        }
        return out;
    }, py::arg("graph"), py::arg("v"));

    m.def("analyze", [](const Graph& g, std::uint64_t seed, std::size_t pairs, bool probes,
                        const std::string& experiment_id) {
        AnalysisOptions o;
        o.pairs = pairs;
        o.probes = probes;
        return scaling_records(analyze_graph(g, seed, o), experiment_id);
    }, py::arg("graph"), py::arg("seed") = 0, py::arg("pairs") = 2000, py::arg("probes") = false,
          py::arg("experiment_id") = "hrg", "JSON-lines scaling records, one string per metric.");
    m.def("probe_records", [](const Graph& g, std::uint64_t seed, std::size_t roots) {
        ProbeOptions o;
        o.roots = roots;
        return probe_records(g, seed, o);
    }, py::arg("graph"), py::arg("seed") = 0, py::arg("roots") = 200);
}
