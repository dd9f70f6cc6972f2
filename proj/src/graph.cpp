#include "hrg/graph.hpp"

#include "binary_io.hpp"
#include "hrg/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#ifdef HRG_HAVE_OPENMP
#include <omp.h>
#endif

namespace hrg {

const char* to_string(BuildMethod m) {
    switch (m) {
    case BuildMethod::naive: return "naive";
    case BuildMethod::bucketed: return "bucketed";
    case BuildMethod::explicit_edges: return "explicit";
    }
    return "?";
}

Graph::Graph(std::shared_ptr<const PointSet> points, std::vector<std::uint64_t> offsets, std::vector<Vertex> neighbors,
             BuildMethod method)
    : points_(std::move(points)), offsets_(std::move(offsets)), neighbors_(std::move(neighbors)), method_(method) {
    if (offsets_.empty() || offsets_.front() != 0 || offsets_.back() != neighbors_.size()) {
        throw InvalidArgument("Graph: offsets do not describe the neighbour array");
    }
    const std::size_t n = offsets_.size() - 1;
    if (n > std::numeric_limits<Vertex>::max()) throw InvalidArgument("Graph: too many vertices");
    if (neighbors_.size() % 2 != 0) throw InvalidArgument("Graph: odd number of adjacency entries");
    if (points_ && points_->size() != n) {
        throw InvalidArgument("Graph: point set has " + std::to_string(points_->size()) + " points, graph has " +
                              std::to_string(n) + " vertices");
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (offsets_[v] > offsets_[v + 1]) throw InvalidArgument("Graph: offsets not monotone");
        for (std::uint64_t k = offsets_[v]; k < offsets_[v + 1]; ++k) {
            const Vertex w = neighbors_[k];
            if (w >= n) throw InvalidArgument("Graph: neighbour index out of range");
            if (w == v) throw InvalidArgument("Graph: self-loop at " + std::to_string(v));
            if (k > offsets_[v] && neighbors_[k - 1] >= w) {
                throw InvalidArgument("Graph: neighbour list of " + std::to_string(v) + " not strictly increasing");
            }
        }
    }
}

Graph Graph::from_edges(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges,
                        std::shared_ptr<const PointSet> points) {
    std::vector<std::vector<Vertex>> adj(n);
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) throw InvalidArgument("Graph::from_edges: vertex index out of range");
        if (u == v) throw InvalidArgument("Graph::from_edges: self-loop at " + std::to_string(u));
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<std::uint64_t> offsets(n + 1, 0);
    std::vector<Vertex> flat;
    for (std::size_t v = 0; v < n; ++v) {
        auto& list = adj[v];
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        flat.insert(flat.end(), list.begin(), list.end());
        offsets[v + 1] = flat.size();
    }
    return Graph(std::move(points), std::move(offsets), std::move(flat), BuildMethod::explicit_edges);
}

bool Graph::is_adjacent(Vertex u, Vertex v) const {
    const std::size_t n = num_vertices();
    if (u >= n || v >= n) {
        throw InvalidArgument("is_adjacent: index out of range (" + std::to_string(u) + ", " + std::to_string(v) +
                              ") for n = " + std::to_string(n));
    }
    const auto list = neighbors(u);
    return std::binary_search(list.begin(), list.end(), v);
}

const PointSet& Graph::points() const {
    if (!points_) throw InvalidArgument("Graph: no point set attached");
    return *points_;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edge_list() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(num_edges());
    for (Vertex u = 0; u < num_vertices(); ++u) {
        for (Vertex v : neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

bool points_adjacent(const PointSet& points, Vertex u, Vertex v) {
    return within_distance(points[u], points[v], points.params().big_r());
}

namespace {

// Caches sinh(r) per point; evaluates exactly the expression of
// within_distance so both builders agree bit for bit.
class AdjacencyTest {
public:
    explicit AdjacencyTest(const PointSet& points) : points_(points), sinh_r_(points.size()) {
        for (std::size_t i = 0; i < points.size(); ++i) sinh_r_[i] = std::sinh(points[i].r);
        const double h = std::sinh(0.5 * points.params().big_r());
        limit_ = h * h;
    }

    bool operator()(Vertex u, Vertex v) const {
        const PolarPoint& a = points_[u];
        const PolarPoint& b = points_[v];
        const double half_dr = std::sinh(0.5 * std::fabs(a.r - b.r));
        const double half_angle = std::sin(0.5 * relative_angle(a, b));
        const double s = half_dr * half_dr + sinh_r_[u] * sinh_r_[v] * (half_angle * half_angle);
        return s <= limit_;
    }

private:
    const PointSet& points_;
    std::vector<double> sinh_r_;
    double limit_;
};

Graph assemble(std::shared_ptr<const PointSet> points, std::vector<std::vector<Vertex>>& adj, BuildMethod method) {
    std::vector<std::uint64_t> offsets(adj.size() + 1, 0);
    for (std::size_t v = 0; v < adj.size(); ++v) offsets[v + 1] = offsets[v] + adj[v].size();
    std::vector<Vertex> flat;
    flat.reserve(offsets.back());
    for (auto& list : adj) {
        flat.insert(flat.end(), list.begin(), list.end());
        std::vector<Vertex>().swap(list);
    }
    return Graph(std::move(points), std::move(offsets), std::move(flat), method);
}

void set_threads([[maybe_unused]] int threads) {
#ifdef HRG_HAVE_OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
}

} // namespace

Graph build_naive(std::shared_ptr<const PointSet> points, const BuildOptions& options) {
    if (!points) throw InvalidArgument("build_naive: null point set");
    const std::size_t n = points->size();
    if (n > options.naive_cap) {
        throw InvalidArgument("build_naive: " + std::to_string(n) + " points exceed the cap of " +
                              std::to_string(options.naive_cap));
    }
    const AdjacencyTest adjacent(*points);
    std::vector<std::vector<Vertex>> adj(n);
    set_threads(options.threads);
#ifdef HRG_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
    for (std::int64_t ui = 0; ui < static_cast<std::int64_t>(n); ++ui) {
        const auto u = static_cast<Vertex>(ui);
        for (Vertex v = 0; v < n; ++v) {
            if (v != u && adjacent(u, v)) adj[u].push_back(v);
        }
    }
    return assemble(std::move(points), adj, BuildMethod::naive);
}

double bucket_window(double r_u, int band, double big_r) {
    // adjacency at a given angle survives lowering the partner's radius, so
    // the band's smallest radius gives its widest angle
    const double r_min = std::max(0.0, big_r - static_cast<double>(band + 1));
    const double exact = max_adjacency_angle(r_u, r_min, big_r);
    if (exact >= kPi) return kPi;
    return std::min(kPi, exact * (1.0 + 1e-9) + 1e-12);
}

Graph build_bucketed(std::shared_ptr<const PointSet> points, const BuildOptions& options) {
    if (!points) throw InvalidArgument("build_bucketed: null point set");
    const PointSet& ps = *points;
    const std::size_t n = ps.size();
    const double big_r = ps.params().big_r();
    const int num_bands = static_cast<int>(std::floor(big_r)) + 1;

    struct Band {
        std::vector<Vertex> members;
        std::vector<double> thetas;
    };
    std::vector<Band> bands(num_bands);
    for (Vertex v = 0; v < n; ++v) {
        const int b = std::min(num_bands - 1, static_cast<int>(std::floor(ps.type(v))));
        bands[b].members.push_back(v);
        bands[b].thetas.push_back(ps[v].theta);
    }

    const AdjacencyTest adjacent(ps);
    std::vector<std::vector<Vertex>> adj(n);
    set_threads(options.threads);
#ifdef HRG_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 256)
#endif
    for (std::int64_t ui = 0; ui < static_cast<std::int64_t>(n); ++ui) {
        const auto u = static_cast<Vertex>(ui);
        const double theta = ps[u].theta;
        auto& out = adj[u];
        auto scan = [&](const Band& band, std::size_t lo, std::size_t hi) {
            for (std::size_t k = lo; k < hi; ++k) {
                const Vertex v = band.members[k];
                if (v != u && adjacent(u, v)) out.push_back(v);
            }
        };
        for (int b = 0; b < num_bands; ++b) {
            const Band& band = bands[b];
            if (band.members.empty()) continue;
            const double w = bucket_window(ps[u].r, b, big_r);
            const auto& th = band.thetas;
            auto first_at_least = [&](double x) {
                return static_cast<std::size_t>(std::lower_bound(th.begin(), th.end(), x) - th.begin());
            };
            auto first_above = [&](double x) {
                return static_cast<std::size_t>(std::upper_bound(th.begin(), th.end(), x) - th.begin());
            };
            if (w >= kPi) {
                scan(band, 0, th.size());
                continue;
            }
            const double lo = theta - w;
            const double hi = theta + w;
            if (lo < 0.0) {
                scan(band, first_at_least(lo + kTwoPi), th.size());
                scan(band, 0, first_above(hi));
            } else if (hi >= kTwoPi) {
                scan(band, first_at_least(lo), th.size());
                scan(band, 0, first_above(hi - kTwoPi));
            } else {
                scan(band, first_at_least(lo), first_above(hi));
            }
        }
        // windows narrower than pi never overlap after wrapping
        std::sort(out.begin(), out.end());
    }
    return assemble(std::move(points), adj, BuildMethod::bucketed);
}

Graph build_naive(const PointSet& points, const BuildOptions& options) {
    return build_naive(std::make_shared<const PointSet>(points), options);
}

Graph build_bucketed(const PointSet& points, const BuildOptions& options) {
    return build_bucketed(std::make_shared<const PointSet>(points), options);
}

ValidationReport validate_graph(const Graph& g) {
    ValidationReport report;
    const std::size_t n = g.num_vertices();
    for (Vertex u = 0; u < n; ++u) {
        const auto list = g.neighbors(u);
        for (std::size_t k = 0; k < list.size(); ++k) {
            const Vertex v = list[k];
            if (v == u) report.fail("self-loop at " + std::to_string(u));
            if (k > 0 && list[k - 1] >= v) report.fail("unsorted or duplicate neighbour at " + std::to_string(u));
            if (v < n && !g.is_adjacent(v, u)) {
                report.fail("asymmetric edge " + std::to_string(u) + " -> " + std::to_string(v));
            }
            if (g.has_points() && u < v && !points_adjacent(g.points(), u, v)) {
                report.fail("edge " + std::to_string(u) + "-" + std::to_string(v) + " longer than R");
            }
        }
    }
    return report;
}

namespace {
constexpr char kGraphMagic[4] = {'H', 'R', 'G', 'G'};
} // namespace

void write_graph_binary(const Graph& g, const std::filesystem::path& path) {
    auto out = detail::open_for_write(path, true);
    out.write(kGraphMagic, 4);
    detail::put_le<std::uint32_t>(out, kGraphFileVersion);
    detail::put_le<std::uint64_t>(out, g.num_vertices());
    detail::put_le<std::uint64_t>(out, g.num_edges());
    detail::put_le<std::uint8_t>(out, static_cast<std::uint8_t>(g.build_method()));
    for (std::uint64_t o : g.offsets()) detail::put_le<std::uint64_t>(out, o);
    for (Vertex v : g.neighbor_array()) detail::put_le<std::uint64_t>(out, v);
    detail::finish_write(out, path);
}

Graph read_graph_binary(const std::filesystem::path& path, std::shared_ptr<const PointSet> points) {
    auto in = detail::open_for_read(path);
    char magic[4] = {};
    if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kGraphMagic)) {
        throw FormatError(path.string() + ": not a graph file (magic \"" + detail::printable_magic(magic) +
                          "\", expected \"HRGG\")");
    }
    const auto version = detail::get_le<std::uint32_t>(in, path);
    if (version != kGraphFileVersion) {
        throw FormatError(path.string() + ": graph file version " + std::to_string(version) + ", expected " +
                          std::to_string(kGraphFileVersion));
    }
    const auto n = detail::get_le<std::uint64_t>(in, path);
    const auto m = detail::get_le<std::uint64_t>(in, path);
    const auto method = detail::get_le<std::uint8_t>(in, path);
    if (method > static_cast<std::uint8_t>(BuildMethod::explicit_edges)) {
        throw FormatError(path.string() + ": unknown build method " + std::to_string(method));
    }
    if (n > std::numeric_limits<Vertex>::max()) throw FormatError(path.string() + ": too many vertices");
    if (points && points->size() != n) {
        throw FormatError(path.string() + ": graph has n = " + std::to_string(n) + " but the point file has " +
                          std::to_string(points->size()) + " points");
    }
    std::vector<std::uint64_t> offsets(n + 1);
    for (auto& o : offsets) o = detail::get_le<std::uint64_t>(in, path);
    if (offsets.back() != 2 * m) {
        throw FormatError(path.string() + ": offsets end at " + std::to_string(offsets.back()) + ", expected 2m = " +
                          std::to_string(2 * m));
    }
    std::vector<Vertex> neighbors(2 * m);
    for (auto& v : neighbors) {
        const auto w = detail::get_le<std::uint64_t>(in, path);
        if (w >= n) throw FormatError(path.string() + ": neighbour index " + std::to_string(w) + " out of range");
        v = static_cast<Vertex>(w);
    }
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError(path.string() + ": trailing bytes");
    try {
        return Graph(std::move(points), std::move(offsets), std::move(neighbors), static_cast<BuildMethod>(method));
    } catch (const InvalidArgument& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_edges_csv(const Graph& g, const std::filesystem::path& path) {
    auto out = detail::open_for_write(path, false);
    out << "u,v\n";
    for (auto [u, v] : g.edge_list()) out << u << ',' << v << '\n';
    detail::finish_write(out, path);
}

} // namespace hrg
