#include "hrg/analysis.hpp"

#include "hrg/error.hpp"
#include "hrg/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace hrg {

ComponentLabeling connected_components(const Graph& g) {
    const std::size_t n = g.num_vertices();
    ComponentLabeling out;
    constexpr Vertex kNone = ~Vertex{0};
    out.label.assign(n, kNone);
    out.size_of_vertex.assign(n, 0);
    std::vector<Vertex> queue;
    queue.reserve(n);
    std::vector<std::pair<Vertex, std::size_t>> roots;
    for (Vertex s = 0; s < n; ++s) {
        if (out.label[s] != kNone) continue;
        queue.clear();
        queue.push_back(s);
        out.label[s] = s;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (Vertex w : g.neighbors(queue[head])) {
                if (out.label[w] == kNone) {
                    out.label[w] = s;
                    queue.push_back(w);
                }
            }
        }
        for (Vertex v : queue) out.size_of_vertex[v] = queue.size();
        out.sizes.push_back(queue.size());
    }
    std::sort(out.sizes.begin(), out.sizes.end(), std::greater<>());
    if (n > 0) out.giant_fraction = static_cast<double>(out.sizes.front()) / static_cast<double>(n);
    return out;
}

namespace {

void check_vertex(const Graph& g, Vertex v) {
    if (v >= g.num_vertices()) throw InvalidArgument("vertex index out of range");
}

} // namespace

std::vector<std::int32_t> bfs_distances(const Graph& g, Vertex source) {
    check_vertex(g, source);
    std::vector<std::int32_t> dist(g.num_vertices(), kUnreachable);
    std::vector<Vertex> queue{source};
    dist[source] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex v = queue[head];
        for (Vertex w : g.neighbors(v)) {
            if (dist[w] == kUnreachable) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

std::vector<Vertex> component_of(const Graph& g, Vertex v) {
    check_vertex(g, v);
    std::vector<char> seen(g.num_vertices(), 0);
    std::vector<Vertex> queue{v};
    seen[v] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        for (Vertex w : g.neighbors(queue[head])) {
            if (!seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
        }
    }
    return queue;
}

const char* to_string(PairMode m) {
    return m == PairMode::uniform_pairs ? "uniform_pairs" : "same_component_pairs";
}

namespace {

// BFS workspace reused across queries; a vertex counts as visited only when
// its stamp equals the current query number.
class TruncatedBfs {
public:
    explicit TruncatedBfs(std::size_t n) : stamp_(n, 0), dist_(n, 0) { queue_.reserve(64); }

    std::int32_t distance(const Graph& g, Vertex s, Vertex t) {
        if (s == t) return 0;
        ++epoch_;
        queue_.clear();
        queue_.push_back(s);
        stamp_[s] = epoch_;
        dist_[s] = 0;
        for (std::size_t head = 0; head < queue_.size(); ++head) {
            const Vertex v = queue_[head];
            for (Vertex w : g.neighbors(v)) {
                if (stamp_[w] == epoch_) continue;
                if (w == t) return dist_[v] + 1;
                stamp_[w] = epoch_;
                dist_[w] = dist_[v] + 1;
                queue_.push_back(w);
            }
        }
        return kUnreachable;
    }

private:
    std::vector<std::uint64_t> stamp_;
    std::vector<std::int32_t> dist_;
    std::vector<Vertex> queue_;
    std::uint64_t epoch_ = 0;
};

Vertex scaled_index(double u, std::size_t n) {
    auto i = static_cast<std::size_t>(u * static_cast<double>(n));
    return static_cast<Vertex>(std::min(i, n - 1));
}

} // namespace

DistanceSample sample_pair_distances(const Graph& g, const ComponentLabeling& labeling, std::size_t num_pairs,
                                     PairMode mode, std::uint64_t seed) {
    const std::size_t n = g.num_vertices();
    if (num_pairs == 0) throw InvalidArgument("num_pairs must be >= 1");
    if (n < 2) throw InvalidArgument("pair sampling needs at least two vertices");
    if (labeling.label.size() != n) throw InvalidArgument("labeling does not match the graph");
    if (mode == PairMode::same_component_pairs && g.num_edges() == 0)
        throw InvalidArgument("same_component_pairs on an edgeless graph");

    DistanceSample out;
    out.mode = mode;
    out.seed = seed;
    out.pairs.reserve(num_pairs);

    const CounterRng rng(seed, streams::kPairs);
    std::uint64_t draw = 0;
    while (out.pairs.size() < num_pairs) {
        const auto uv = rng.uniforms(draw++);
        const Vertex u = scaled_index(uv[0], n);
        Vertex v = scaled_index(uv[1], n - 1);
        if (v >= u) ++v;
        if (mode == PairMode::same_component_pairs && !labeling.same_component(u, v)) continue;
        out.pairs.push_back({u, v, kUnreachable, labeling.label[u], labeling.label[v]});
    }

    TruncatedBfs bfs(n);
    for (auto& p : out.pairs) {
        if (p.label_u == p.label_v) p.distance = bfs.distance(g, p.u, p.v);
    }

    std::vector<std::int32_t> finite;
    finite.reserve(out.pairs.size());
    for (const auto& p : out.pairs) {
        if (p.distance != kUnreachable) finite.push_back(p.distance);
    }
    out.connected = finite.size();
    if (!finite.empty()) {
        double sum = 0.0;
        for (auto d : finite) sum += d;
        const auto k = static_cast<double>(finite.size());
        out.mean = sum / k;
        double ss = 0.0;
        for (auto d : finite) ss += (d - out.mean) * (d - out.mean);
        out.stderr_mean = finite.size() > 1 ? std::sqrt(ss / (k - 1.0) / k) : 0.0;
        std::sort(finite.begin(), finite.end());
        const std::size_t mid = finite.size() / 2;
        out.median = finite.size() % 2 == 1 ? finite[mid] : 0.5 * (finite[mid - 1] + finite[mid]);
        out.max = finite.back();
        if (g.has_points()) {
            const double log_r = std::log(g.points().params().big_r());
            if (log_r > 0.0) out.ratio_to_log_r = out.mean / log_r;
        }
    }
    return out;
}

std::vector<std::size_t> degree_histogram(const Graph& g) {
    std::vector<std::size_t> counts(1, 0);
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        const std::size_t d = g.degree(v);
        if (d >= counts.size()) counts.resize(d + 1, 0);
        ++counts[d];
    }
    if (g.num_vertices() == 0) counts.clear();
    return counts;
}

std::size_t default_tail_size(const std::vector<std::size_t>& histogram) {
    std::size_t positive = 0;
    for (std::size_t d = 1; d < histogram.size(); ++d) positive += histogram[d];
    return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(positive))));
}

namespace {

// Hill estimate from the k + 1 largest entries of `degrees` (reordered).
// Returns NaN when the tail is flat.
double hill(std::vector<double>& degrees, std::size_t k) {
    std::nth_element(degrees.begin(), degrees.begin() + static_cast<std::ptrdiff_t>(k), degrees.end(),
                     std::greater<>());
    const double threshold = degrees[k];
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += std::log(degrees[i] / threshold);
    if (!(sum > 0.0)) return std::nan("");
    return 1.0 + static_cast<double>(k) / sum;
}

} // namespace

TailEstimate tail_exponent_estimate(const std::vector<std::size_t>& histogram, std::size_t k_tail, std::uint64_t seed,
                                    int bootstrap_rounds) {
    std::vector<double> degrees;
    for (std::size_t d = 1; d < histogram.size(); ++d) degrees.insert(degrees.end(), histogram[d], double(d));
    TailEstimate out;
    out.positive_degrees = degrees.size();
    out.k_tail = k_tail == 0 ? default_tail_size(histogram) : k_tail;
    if (out.k_tail == 0 || out.k_tail + 1 > degrees.size())
        throw InvalidArgument("insufficient tail data for the Hill estimate");

    std::vector<double> work = degrees;
    out.beta = hill(work, out.k_tail);
    if (std::isnan(out.beta)) throw InvalidArgument("degenerate tail: the largest degrees are all equal");

    PhiloxEngine engine(seed, streams::kBootstrap);
    std::vector<double> estimates;
    estimates.reserve(static_cast<std::size_t>(std::max(bootstrap_rounds, 0)));
    for (int b = 0; b < bootstrap_rounds; ++b) {
        for (auto& x : work) x = degrees[engine.below(degrees.size())];
        const double est = hill(work, out.k_tail);
        if (std::isfinite(est)) estimates.push_back(est);
    }
    if (estimates.size() > 1) {
        const double mean = std::accumulate(estimates.begin(), estimates.end(), 0.0) / double(estimates.size());
        double ss = 0.0;
        for (double e : estimates) ss += (e - mean) * (e - mean);
        out.stderr_beta = std::sqrt(ss / double(estimates.size() - 1));
    }
    return out;
}

namespace {

std::size_t sorted_intersection_size(std::span<const Vertex> a, std::span<const Vertex> b) {
    std::size_t count = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

} // namespace

double local_clustering(const Graph& g, Vertex v) {
    check_vertex(g, v);
    const auto nb = g.neighbors(v);
    const double d = static_cast<double>(nb.size());
    if (nb.size() < 2) throw InvalidArgument("local clustering needs degree >= 2");
    std::size_t links = 0;
    for (Vertex u : nb) links += sorted_intersection_size(nb, g.neighbors(u));
    return static_cast<double>(links) / (d * (d - 1.0));
}

double clustering_coefficient(const Graph& g, ClusteringMode mode, std::size_t samples, std::uint64_t seed) {
    if (mode == ClusteringMode::global_transitivity) {
        double paths = 0.0;
        for (Vertex v = 0; v < g.num_vertices(); ++v) {
            const double d = static_cast<double>(g.degree(v));
            paths += 0.5 * d * (d - 1.0);
        }
        if (paths <= 0.0) throw InvalidArgument("graph has no paths of length two");
        // each triangle seen once per edge, i.e. three times
        double closed = 0.0;
        for (Vertex u = 0; u < g.num_vertices(); ++u) {
            const auto nu = g.neighbors(u);
            for (Vertex v : nu) {
                if (v <= u) continue;
                closed += static_cast<double>(sorted_intersection_size(nu, g.neighbors(v)));
            }
        }
        return closed / paths;
    }

    if (samples == 0) throw InvalidArgument("sampled clustering needs M >= 1");
    std::vector<Vertex> eligible;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        if (g.degree(v) >= 2) eligible.push_back(v);
    }
    if (eligible.empty()) throw InvalidArgument("graph has no vertex of degree >= 2");
    const CounterRng rng(seed, streams::kClustering);
    double sum = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const Vertex v = eligible[scaled_index(rng.uniforms(i)[0], eligible.size())];
        sum += local_clustering(g, v);
    }
    return sum / static_cast<double>(samples);
}

} // namespace hrg
