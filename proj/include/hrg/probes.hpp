#pragma once

// Structural probes: the core clique, exploding paths into the core,
// distance to the core, angular-frontier exploration and umbrellas.

#include "hrg/analysis.hpp"
#include "hrg/graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hrg {

/// ln ln R, clamped at 0 for R <= e.
double log_log(double big_r);

/// ceil(10 ln R), at least 1.
int default_round_cap(double big_r);

struct CoreReport {
    std::vector<Vertex> core;       ///< type >= R/2, ascending
    bool clique_verified = true;    ///< every core pair checked adjacent
    std::size_t missing_pairs = 0;
    /// Vertex of smallest radius when that radius is at most
    /// (2 alpha - 1) R / (2 alpha) + omega (only for 1/2 < alpha < 1).
    std::optional<Vertex> hub_witness;
    double hub_radius_limit = 0.0;
    /// Vertices of type >= the limit above, and whether the hub reaches all.
    std::size_t hub_targets = 0;
    bool hub_adjacent_to_all = false;
};

/// `omega` < 0 selects ln ln R.
CoreReport extract_core(const Graph& g, double omega = -1.0);

struct ExplodingPath {
    std::vector<Vertex> vertices;
    double delta_used = 0.0; ///< delta - zeta: the guaranteed growth factor minus 1
    double zeta_used = 0.0;
    bool terminal_in_core = false;
};

/// ln R / ln(1 + delta - zeta) + 2.
double exploding_path_length_bound(const ModelParams& params, double zeta);

/// Greedy search from v: stop at a core neighbour if there is one, else
/// step to the neighbour of smallest relative angle whose type lies in
/// [(1 + delta - zeta) t, (1 + delta + zeta) t].  Empty when the band is ever
/// empty.  Throws InvalidArgument outside 1/2 < alpha < 1, unless
/// 0 < zeta < delta, or when v has type 0.
std::optional<ExplodingPath> find_exploding_path(const Graph& g, Vertex v, double zeta);

/// Problems with a path: adjacency, growth, terminal type, length bound.
/// The length bound applies when the first vertex has type >= 1/2; below
/// that the geometric growth can need more steps than ln R allows for.
std::vector<std::string> validate_exploding_path(const Graph& g, const ExplodingPath& path);

/// R/2 - 2 ln ln R.
double core_distance_threshold(double big_r);

/// BFS distance from v to the nearest vertex of type >= R/2 - 2 ln ln R.
std::int32_t distance_to_core(const Graph& g, Vertex v);

struct TraceEntry {
    int round = 0;
    double max_type = 0.0; ///< over everything discovered so far
    double theta_l = 0.0;  ///< extreme clockwise relative angle to the root
    double theta_r = 0.0;  ///< extreme anticlockwise relative angle
};

struct LayerTrace {
    Vertex root = 0;
    std::vector<TraceEntry> entries; ///< round 0 plus every round with a non-empty frontier
    std::vector<Vertex> discovered;  ///< in discovery order
    bool hit_round_cap = false;
};

/// Frontier exploration from v: a neighbour of the last frontier is admitted
/// only if it lies clockwise beyond theta_l or anticlockwise beyond theta_r.
/// `max_rounds` <= 0 selects default_round_cap.
LayerTrace layer_max_type_trace(const Graph& g, Vertex v, int max_rounds = 0);

/// Undiscovered vertices inside the explored angular range whose type
/// exceeds the largest discovered type.  Only meaningful while
/// theta_l + theta_r < pi; returns 0 otherwise and sets `applicable`.
std::size_t non_skip_violations(const Graph& g, const LayerTrace& trace, bool* applicable = nullptr);

struct StepGrowthCell {
    int step = 0;                 ///< i
    double t_hat = 0.0;           ///< (1 + delta + zeta)^(i-1) t_root
    std::size_t conditioned = 0;  ///< traces with t^(i-1) < t_hat
    std::size_t stayed_below = 0; ///< of those, t^(i) < (1 + delta + zeta) t_hat
    double bound = 0.0;           ///< closed-form lower bound on the probability
};

/// Pools traces from roots of one common type into per-step frequencies of
/// t^(i) < (1 + delta + zeta) t_hat^(i-1) given t^(i-1) < t_hat^(i-1), for
/// steps where t_hat^(i-1) < (R/2 - 2 ln ln R) / (1 + delta + zeta).
std::vector<StepGrowthCell> step_growth_diagnostic(const Graph& g, const std::vector<LayerTrace>& traces,
                                                   double zeta);

struct ExplorationRound {
    std::vector<Vertex> left;  ///< V_l of this round
    std::vector<Vertex> right; ///< V_r of this round
    double theta_l = 0.0;      ///< extreme clockwise angle of everything discovered
    double theta_r = 0.0;
    double max_type = 0.0;     ///< largest type in this round's frontier
};

struct ExplorationState {
    Vertex root = 0;
    std::vector<ExplorationRound> rounds; ///< round 0 is {root}
    int stop_round = 0;                   ///< k: the first round with both frontiers empty
    bool stopped = false;
};

struct Umbrella {
    Vertex root = 0;
    std::vector<Vertex> spanning_path; ///< clockwise-most to anticlockwise-most
    std::vector<Vertex> connector;     ///< root .. first spanning-path vertex
    int size = 0;

    bool contains(Vertex v) const;
    /// Distance from the root to `v` along the umbrella (a tree).
    int distance_from_root(Vertex v) const;
};

enum class UmbrellaOutcome { ok, wrapped_component, round_cap, validation_failed };

const char* to_string(UmbrellaOutcome o);

struct UmbrellaResult {
    UmbrellaOutcome outcome = UmbrellaOutcome::ok;
    ExplorationState state;
    std::optional<Umbrella> umbrella;
    std::vector<std::string> problems;
};

/// Angular extent 2 pi - (largest angular gap) of a vertex set.
double angular_extent(const PointSet& points, const std::vector<Vertex>& vertices);

/// Two-frontier exploration from v and the umbrella read off its parent
/// links.  Refuses components whose angular extent is >= pi.
UmbrellaResult simultaneous_breadth_exploration(const Graph& g, Vertex v, int max_rounds = 0);

/// Problems with an umbrella against its component: adjacency, simplicity,
/// extreme endpoints, connector shape and the stored size.
std::vector<std::string> validate_umbrella(const Graph& g, const Umbrella& u, const std::vector<Vertex>& component);

/// True iff the spanning paths share a vertex.  Throws InvalidArgument when
/// the roots lie in different components.
bool verify_spanning_overlap(const ComponentLabeling& labeling, const Umbrella& a, const Umbrella& b);

/// Walk from a.root through umbrella a to its first vertex on umbrella b,
/// then through b to b.root.
std::vector<Vertex> stitch_umbrella_path(const Umbrella& a, const Umbrella& b);

/// Component vertices lying above a spanning-path edge (in the closed
/// triangle of the origin and the edge) but adjacent to no spanning-path
/// vertex.
std::size_t umbrella_coverage_violations(const Graph& g, const Umbrella& u, const std::vector<Vertex>& component);

} // namespace hrg
