#pragma once

// Distance-R adjacency graphs over a PointSet, stored as compressed sparse
// rows with sorted neighbour lists.

#include "hrg/point_process.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hrg {

using Vertex = std::uint32_t;

enum class BuildMethod : std::uint8_t { naive = 0, bucketed = 1, explicit_edges = 2 };

const char* to_string(BuildMethod m);

class Graph {
public:
    Graph() = default;

    /// Adopts a CSR structure.  Throws InvalidArgument if it is not a simple
    /// undirected graph with sorted neighbour lists.
    Graph(std::shared_ptr<const PointSet> points, std::vector<std::uint64_t> offsets, std::vector<Vertex> neighbors,
          BuildMethod method);

    /// Undirected graph from an edge list; duplicates are merged, self-loops
    /// rejected.  `points` may be null or must have n entries.
    static Graph from_edges(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges,
                            std::shared_ptr<const PointSet> points = nullptr);

    std::size_t num_vertices() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_edges() const { return neighbors_.size() / 2; }
    BuildMethod build_method() const { return method_; }

    std::span<const Vertex> neighbors(Vertex v) const {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

    /// Binary search in u's neighbour list; throws InvalidArgument on a bad index.
    bool is_adjacent(Vertex u, Vertex v) const;

    bool has_points() const { return points_ != nullptr; }
    /// Throws InvalidArgument when the graph carries no positions.
    const PointSet& points() const;
    std::shared_ptr<const PointSet> points_ptr() const { return points_; }

    const std::vector<std::uint64_t>& offsets() const { return offsets_; }
    const std::vector<Vertex>& neighbor_array() const { return neighbors_; }

    /// Edges (u, v) with u < v in lexicographic order.
    std::vector<std::pair<Vertex, Vertex>> edge_list() const;

private:
    std::shared_ptr<const PointSet> points_;
    std::vector<std::uint64_t> offsets_{0};
    std::vector<Vertex> neighbors_;
    BuildMethod method_ = BuildMethod::explicit_edges;
};

struct BuildOptions {
    std::size_t naive_cap = 20000;
    int threads = 1;
};

/// All-pairs reference builder.  Throws InvalidArgument above `naive_cap`.
Graph build_naive(std::shared_ptr<const PointSet> points, const BuildOptions& options = {});

/// Type-band bucketed builder; same edge set as build_naive.
Graph build_bucketed(std::shared_ptr<const PointSet> points, const BuildOptions& options = {});

/// Convenience overloads that copy the point set into shared ownership.
Graph build_naive(const PointSet& points, const BuildOptions& options = {});
Graph build_bucketed(const PointSet& points, const BuildOptions& options = {});

/// Angular half-width scanned by build_bucketed for a vertex of radius r_u
/// against the type band [band, band + 1).
double bucket_window(double r_u, int band, double big_r);

/// The adjacency predicate both builders share.
bool points_adjacent(const PointSet& points, Vertex u, Vertex v);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> problems;

    void fail(std::string what) {
        ok = false;
        if (problems.size() < 32) problems.push_back(std::move(what));
    }
};

/// Symmetry, ordering, loop/duplicate checks, plus distance <= R on every
/// edge when positions are known.
ValidationReport validate_graph(const Graph& g);

// Graph files: little-endian header {"HRGG", u32 version, u64 n, u64 m,
// u8 build_method} then (n + 1) u64 offsets and 2m u64 neighbour indices.
inline constexpr std::uint32_t kGraphFileVersion = 1;

void write_graph_binary(const Graph& g, const std::filesystem::path& path);

/// `points` (optional) must have exactly n entries.
Graph read_graph_binary(const std::filesystem::path& path, std::shared_ptr<const PointSet> points = nullptr);

/// CSV "u,v" with u < v, one line per edge.
void write_edges_csv(const Graph& g, const std::filesystem::path& path);

} // namespace hrg
