#pragma once

// Graph measurements: components, BFS distances, sampled pair distances,
// degree statistics, tail-exponent estimation and clustering.

#include "hrg/graph.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hrg {

inline constexpr std::int32_t kUnreachable = -1;

struct ComponentLabeling {
    std::vector<Vertex> label;       ///< smallest vertex index of the component
    std::vector<std::size_t> sizes;  ///< component sizes, descending
    std::vector<std::size_t> size_of_vertex;
    double giant_fraction = 0.0;     ///< largest size / n, 0 for n = 0

    std::size_t num_components() const { return sizes.size(); }
    bool same_component(Vertex u, Vertex v) const { return label[u] == label[v]; }
};

ComponentLabeling connected_components(const Graph& g);

/// Hop distances from `source`; kUnreachable where there is no path.
std::vector<std::int32_t> bfs_distances(const Graph& g, Vertex source);

/// Vertices of the component of `v`, in BFS order.
std::vector<Vertex> component_of(const Graph& g, Vertex v);

enum class PairMode { uniform_pairs, same_component_pairs };

const char* to_string(PairMode m);

struct PairRecord {
    Vertex u = 0;
    Vertex v = 0;
    std::int32_t distance = kUnreachable;
    /// Labels of u and v; they differ exactly when distance is kUnreachable.
    Vertex label_u = 0;
    Vertex label_v = 0;
};

struct DistanceSample {
    std::vector<PairRecord> pairs;
    PairMode mode = PairMode::uniform_pairs;
    std::uint64_t seed = 0;
    std::size_t connected = 0;
    double mean = 0.0;
    double median = 0.0;
    std::int32_t max = 0;
    double stderr_mean = 0.0;
    /// mean / ln R; only when R is known and ln R > 0.
    std::optional<double> ratio_to_log_r;
};

/// Ordered pairs u != v.  Distances come from a BFS started at u that stops
/// as soon as v is discovered.
DistanceSample sample_pair_distances(const Graph& g, const ComponentLabeling& labeling, std::size_t num_pairs,
                                     PairMode mode, std::uint64_t seed);

/// counts[d] = number of vertices of degree d.
std::vector<std::size_t> degree_histogram(const Graph& g);

struct TailEstimate {
    double beta = 0.0;
    double stderr_beta = 0.0;
    std::size_t k_tail = 0;
    std::size_t positive_degrees = 0;
};

/// ceil(sqrt(#vertices of degree >= 1)).
std::size_t default_tail_size(const std::vector<std::size_t>& histogram);

/// Hill estimate 1 + k / sum_{i<=k} ln(d_(i) / d_(k+1)) over the k largest
/// degrees, with a bootstrap standard error.  `k_tail` = 0 picks the
/// default.  Throws InvalidArgument on too little or degenerate tail data.
TailEstimate tail_exponent_estimate(const std::vector<std::size_t>& histogram, std::size_t k_tail = 0,
                                    std::uint64_t seed = 0, int bootstrap_rounds = 200);

enum class ClusteringMode { global_transitivity, sampled_local };

/// Global: 3 * triangles / paths of length two.  Sampled: mean local
/// coefficient over `samples` uniform draws (with replacement) from the
/// vertices of degree >= 2.
double clustering_coefficient(const Graph& g, ClusteringMode mode, std::size_t samples = 0, std::uint64_t seed = 0);

/// Local clustering coefficient of v (degree >= 2).
double local_clustering(const Graph& g, Vertex v);

} // namespace hrg
