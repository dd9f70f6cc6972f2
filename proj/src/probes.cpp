#include "hrg/probes.hpp"

#include "hrg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace hrg {

double log_log(double big_r) {
    return big_r > std::exp(1.0) ? std::log(std::log(big_r)) : 0.0;
}

int default_round_cap(double big_r) {
    return std::max(1, static_cast<int>(std::ceil(10.0 * std::log(std::max(big_r, 1.0)))));
}

namespace {

void check_vertex(const Graph& g, Vertex v) {
    if (v >= g.num_vertices()) throw InvalidArgument("vertex index out of range");
}

} // namespace

CoreReport extract_core(const Graph& g, double omega) {
    const PointSet& ps = g.points();
    const ModelParams& params = ps.params();
    const double big_r = params.big_r();
    CoreReport report;
    for (Vertex v = 0; v < ps.size(); ++v) {
        if (ps.type(v) >= big_r / 2.0) report.core.push_back(v);
    }
    for (std::size_t i = 0; i < report.core.size(); ++i) {
        for (std::size_t j = i + 1; j < report.core.size(); ++j) {
            if (!g.is_adjacent(report.core[i], report.core[j])) ++report.missing_pairs;
        }
    }
    report.clique_verified = report.missing_pairs == 0;

    if (!params.ultrasmall_regime() || ps.empty()) return report;
    if (omega < 0.0) omega = log_log(big_r);
    const double alpha = params.alpha();
    report.hub_radius_limit = (2.0 * alpha - 1.0) * big_r / (2.0 * alpha) + omega;
    Vertex lowest = 0;
    for (Vertex v = 1; v < ps.size(); ++v) {
        if (ps[v].r < ps[lowest].r) lowest = v;
    }
    if (ps[lowest].r > report.hub_radius_limit) return report;
    report.hub_witness = lowest;
    report.hub_adjacent_to_all = true;
    for (Vertex v = 0; v < ps.size(); ++v) {
        if (v == lowest || ps.type(v) < report.hub_radius_limit) continue;
        ++report.hub_targets;
        if (!g.is_adjacent(lowest, v)) report.hub_adjacent_to_all = false;
    }
    return report;
}

double exploding_path_length_bound(const ModelParams& params, double zeta) {
    const auto delta = params.delta();
    if (!delta) throw InvalidArgument("exploding paths need 1/2 < alpha < 1");
    return std::log(params.big_r()) / std::log(1.0 + *delta - zeta) + 2.0;
}

std::optional<ExplodingPath> find_exploding_path(const Graph& g, Vertex v, double zeta) {
    check_vertex(g, v);
    const PointSet& ps = g.points();
    const ModelParams& params = ps.params();
    const auto delta = params.delta();
    if (!delta) throw InvalidArgument("find_exploding_path: requires 1/2 < alpha < 1");
    if (!(zeta > 0.0 && zeta < *delta)) throw InvalidArgument("find_exploding_path: requires 0 < zeta < delta");
    const double half_r = params.big_r() / 2.0;

    ExplodingPath path;
    path.delta_used = *delta - zeta;
    path.zeta_used = zeta;
    path.vertices.push_back(v);
    if (ps.type(v) >= half_r) {
        path.terminal_in_core = true;
        return path;
    }
    if (!(ps.type(v) > 0.0)) throw InvalidArgument("find_exploding_path: start vertex has type 0");

    Vertex current = v;
    for (;;) {
        const double t = ps.type(current);
        const double lo = (1.0 + *delta - zeta) * t;
        const double hi = (1.0 + *delta + zeta) * t;
        std::optional<Vertex> core_pick, band_pick;
        double core_angle = std::numeric_limits<double>::infinity();
        double band_angle = core_angle;
        for (Vertex w : g.neighbors(current)) {
            const double tw = ps.type(w);
            const double a = relative_angle(ps[current], ps[w]);
            // neighbour lists are sorted, so strict < keeps the smaller index on ties
            if (tw >= half_r) {
                if (a < core_angle) {
                    core_angle = a;
                    core_pick = w;
                }
            } else if (tw >= lo && tw <= hi && a < band_angle) {
                band_angle = a;
                band_pick = w;
            }
        }
        if (core_pick) {
            path.vertices.push_back(*core_pick);
            path.terminal_in_core = true;
            return path;
        }
        if (!band_pick) return std::nullopt;
        path.vertices.push_back(*band_pick);
        current = *band_pick;
    }
}

std::vector<std::string> validate_exploding_path(const Graph& g, const ExplodingPath& path) {
    std::vector<std::string> problems;
    const PointSet& ps = g.points();
    const ModelParams& params = ps.params();
    const auto& vs = path.vertices;
    if (vs.empty()) {
        problems.emplace_back("empty path");
        return problems;
    }
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
        if (!g.is_adjacent(vs[i], vs[i + 1])) problems.push_back("step " + std::to_string(i) + " is not an edge");
    }
    for (std::size_t i = 0; i + 2 < vs.size(); ++i) {
        if (ps.type(vs[i + 1]) < (1.0 + path.delta_used) * ps.type(vs[i]))
            problems.push_back("type growth fails at step " + std::to_string(i));
    }
    if (ps.type(vs.back()) < params.big_r() / 2.0) problems.emplace_back("last vertex is not in the core");
    if (!path.terminal_in_core) problems.emplace_back("path not marked as ending in the core");
    if (ps.type(vs.front()) >= 0.5) {
        const double bound = std::log(params.big_r()) / std::log(1.0 + path.delta_used) + 2.0;
        if (static_cast<double>(vs.size()) > bound)
            problems.push_back("length " + std::to_string(vs.size()) + " exceeds bound " + std::to_string(bound));
    }
    return problems;
}

double core_distance_threshold(double big_r) { return big_r / 2.0 - 2.0 * log_log(big_r); }

std::int32_t distance_to_core(const Graph& g, Vertex v) {
    check_vertex(g, v);
    const PointSet& ps = g.points();
    const double threshold = core_distance_threshold(ps.params().big_r());
    if (ps.type(v) >= threshold) return 0;
    std::unordered_map<Vertex, std::int32_t> dist{{v, 0}};
    std::vector<Vertex> queue{v};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex x = queue[head];
        const std::int32_t dx = dist[x];
        for (Vertex y : g.neighbors(x)) {
            if (dist.count(y)) continue;
            if (ps.type(y) >= threshold) return dx + 1;
            dist.emplace(y, dx + 1);
            queue.push_back(y);
        }
    }
    return kUnreachable;
}

LayerTrace layer_max_type_trace(const Graph& g, Vertex v, int max_rounds) {
    check_vertex(g, v);
    const PointSet& ps = g.points();
    if (max_rounds <= 0) max_rounds = default_round_cap(ps.params().big_r());
    LayerTrace trace;
    trace.root = v;
    std::unordered_set<Vertex> seen{v};
    trace.discovered.push_back(v);
    double theta_l = 0.0, theta_r = 0.0, max_type = ps.type(v);
    trace.entries.push_back({0, max_type, 0.0, 0.0});

    std::vector<Vertex> frontier{v}, next;
    for (int round = 1; round <= max_rounds; ++round) {
        next.clear();
        double new_l = theta_l, new_r = theta_r;
        for (Vertex x : frontier) {
            for (Vertex y : g.neighbors(x)) {
                if (seen.count(y)) continue;
                const double s = signed_angle(ps[v], ps[y]);
                if ((s < 0.0 && -s > theta_l) || (s > 0.0 && s > theta_r)) {
                    seen.insert(y);
                    next.push_back(y);
                    trace.discovered.push_back(y);
                    if (s < 0.0) new_l = std::max(new_l, -s);
                    else new_r = std::max(new_r, s);
                    max_type = std::max(max_type, ps.type(y));
                }
            }
        }
        if (next.empty()) return trace;
        theta_l = new_l;
        theta_r = new_r;
        trace.entries.push_back({round, max_type, theta_l, theta_r});
        frontier.swap(next);
    }
    trace.hit_round_cap = true;
    return trace;
}

std::size_t non_skip_violations(const Graph& g, const LayerTrace& trace, bool* applicable) {
    const PointSet& ps = g.points();
    const TraceEntry& last = trace.entries.back();
    const bool ok = last.theta_l + last.theta_r < kPi;
    if (applicable) *applicable = ok;
    if (!ok) return 0;
    std::unordered_set<Vertex> seen(trace.discovered.begin(), trace.discovered.end());
    const PolarPoint& root = ps[trace.root];
    std::size_t violations = 0;
    for (Vertex x = 0; x < ps.size(); ++x) {
        if (seen.count(x)) continue;
        const double s = signed_angle(root, ps[x]);
        const bool inside = (s > 0.0 && s <= last.theta_r) || (s < 0.0 && -s <= last.theta_l);
        if (inside && ps.type(x) > last.max_type) ++violations;
    }
    return violations;
}

std::vector<StepGrowthCell> step_growth_diagnostic(const Graph& g, const std::vector<LayerTrace>& traces, double zeta) {
    const ModelParams& params = g.points().params();
    const auto delta = params.delta();
    if (!delta) throw InvalidArgument("step-growth diagnostic needs 1/2 < alpha < 1");
    const double factor = 1.0 + *delta + zeta;
    const double alpha = params.alpha();
    const double ceiling = core_distance_threshold(params.big_r()) / factor;
    std::vector<StepGrowthCell> cells;
    std::vector<double> bound_sum;
    for (const LayerTrace& tr : traces) {
        const double t0 = tr.entries.front().max_type;
        auto t_at = [&](int i) {
            return tr.entries[std::min<std::size_t>(static_cast<std::size_t>(i), tr.entries.size() - 1)].max_type;
        };
        double t_hat = t0;
        for (int i = 1; t_hat < ceiling; ++i, t_hat *= factor) {
            if (cells.size() < static_cast<std::size_t>(i)) {
                cells.push_back({i, 0.0, 0, 0, 0.0});
                bound_sum.push_back(0.0);
            }
            StepGrowthCell& c = cells[i - 1];
            // at i = 1 the conditioning event t^(0) <= t_hat^(0) always holds
            if (!(t_at(i - 1) <= t_hat)) continue;
            ++c.conditioned;
            c.t_hat += t_hat;
            bound_sum[i - 1] += std::exp(-(2.0 * params.nu() / ((alpha - 0.5) * kPi)) *
                                         std::exp(-(alpha - 0.5) * zeta * t_hat));
            if (t_at(i) < factor * t_hat) ++c.stayed_below;
        }
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].conditioned > 0) {
            cells[i].t_hat /= static_cast<double>(cells[i].conditioned);
            cells[i].bound = bound_sum[i] / static_cast<double>(cells[i].conditioned);
        }
    }
    return cells;
}

bool Umbrella::contains(Vertex v) const {
    return std::find(spanning_path.begin(), spanning_path.end(), v) != spanning_path.end() ||
           std::find(connector.begin(), connector.end(), v) != connector.end();
}

int Umbrella::distance_from_root(Vertex v) const {
    for (std::size_t j = 0; j + 1 < connector.size(); ++j) {
        if (connector[j] == v) return static_cast<int>(j);
    }
    const auto attach = std::find(spanning_path.begin(), spanning_path.end(), connector.back());
    const auto pos = std::find(spanning_path.begin(), spanning_path.end(), v);
    if (pos == spanning_path.end() || attach == spanning_path.end())
        throw InvalidArgument("vertex is not on the umbrella");
    return static_cast<int>(connector.size() - 1) + static_cast<int>(std::abs(pos - attach));
}

const char* to_string(UmbrellaOutcome o) {
    switch (o) {
    case UmbrellaOutcome::ok: return "ok";
    case UmbrellaOutcome::wrapped_component: return "wrapped_component";
    case UmbrellaOutcome::round_cap: return "round_cap";
    case UmbrellaOutcome::validation_failed: return "validation_failed";
    }
    return "unknown";
}

double angular_extent(const PointSet& points, const std::vector<Vertex>& vertices) {
    if (vertices.size() < 2) return 0.0;
    std::vector<double> th;
    th.reserve(vertices.size());
    for (Vertex v : vertices) th.push_back(points[v].theta);
    std::sort(th.begin(), th.end());
    double gap = kTwoPi - th.back() + th.front();
    for (std::size_t i = 1; i < th.size(); ++i) gap = std::max(gap, th[i] - th[i - 1]);
    return kTwoPi - gap;
}

namespace {

// Keeps the first occurrence of every vertex by cutting out each cycle.
std::vector<Vertex> erase_loops(const std::vector<Vertex>& walk) {
    std::vector<Vertex> out;
    std::unordered_map<Vertex, std::size_t> pos;
    for (Vertex v : walk) {
        auto it = pos.find(v);
        if (it != pos.end()) {
            for (std::size_t k = it->second + 1; k < out.size(); ++k) pos.erase(out[k]);
            out.resize(it->second + 1);
        } else {
            pos.emplace(v, out.size());
            out.push_back(v);
        }
    }
    return out;
}

int umbrella_size(const Umbrella& u) {
    return std::max(u.distance_from_root(u.spanning_path.front()), u.distance_from_root(u.spanning_path.back()));
}

} // namespace

UmbrellaResult simultaneous_breadth_exploration(const Graph& g, Vertex v, int max_rounds) {
    check_vertex(g, v);
    const PointSet& ps = g.points();
    if (max_rounds <= 0) max_rounds = default_round_cap(ps.params().big_r());
    UmbrellaResult result;
    ExplorationState& state = result.state;
    state.root = v;
    state.rounds.push_back({{v}, {v}, 0.0, 0.0, ps.type(v)});

    const std::vector<Vertex> component = component_of(g, v);
    if (angular_extent(ps, component) >= kPi) {
        result.outcome = UmbrellaOutcome::wrapped_component;
        result.problems.emplace_back("component spans an angle of at least pi");
        return result;
    }
    // inside an arc shorter than pi, angles to the root order the component
    auto phi = [&](Vertex x) { return signed_angle(ps[v], ps[x]); };

    std::unordered_map<Vertex, Vertex> parent;
    std::unordered_map<Vertex, int> round_of{{v, 0}};
    double lo = 0.0, hi = 0.0;
    std::vector<Vertex> frontier{v};
    for (int i = 1;; ++i) {
        if (i > max_rounds) {
            result.outcome = UmbrellaOutcome::round_cap;
            result.problems.push_back("no stop within " + std::to_string(max_rounds) + " rounds");
            return result;
        }
        std::sort(frontier.begin(), frontier.end());
        ExplorationRound round;
        round.max_type = -std::numeric_limits<double>::infinity();
        double new_lo = lo, new_hi = hi;
        for (Vertex x : frontier) {
            for (Vertex y : g.neighbors(x)) {
                if (round_of.count(y)) continue;
                const double s = phi(y);
                if (s < lo) {
                    round.left.push_back(y);
                    new_lo = std::min(new_lo, s);
                } else if (s > hi) {
                    round.right.push_back(y);
                    new_hi = std::max(new_hi, s);
                } else {
                    continue;
                }
                round_of.emplace(y, i);
                parent.emplace(y, x); // frontier is sorted, so the first parent has the smallest index
                round.max_type = std::max(round.max_type, ps.type(y));
            }
        }
        if (round.left.empty() && round.right.empty()) {
            state.stop_round = i;
            state.stopped = true;
            break;
        }
        lo = new_lo;
        hi = new_hi;
        round.theta_l = -lo;
        round.theta_r = hi;
        frontier = round.left;
        frontier.insert(frontier.end(), round.right.begin(), round.right.end());
        state.rounds.push_back(std::move(round));
    }

    // extreme discovered vertices, ties to the smaller index
    Vertex left_end = v, right_end = v;
    for (const auto& [x, r] : round_of) {
        const double s = phi(x);
        const double sl = phi(left_end), sr = phi(right_end);
        if (s < sl || (s == sl && x < left_end)) left_end = x;
        if (s > sr || (s == sr && x < right_end)) right_end = x;
    }
    auto chain_to_root = [&](Vertex x) {
        std::vector<Vertex> out{x};
        while (x != v) {
            x = parent.at(x);
            out.push_back(x);
        }
        return out;
    };
    const std::vector<Vertex> p_left = chain_to_root(left_end); // left_end .. v
    std::vector<Vertex> p_right = chain_to_root(right_end);
    std::reverse(p_right.begin(), p_right.end()); // v .. right_end

    std::vector<Vertex> walk = p_left;
    walk.insert(walk.end(), p_right.begin() + 1, p_right.end());
    Umbrella best;
    best.root = v;
    best.spanning_path = erase_loops(walk);
    const std::unordered_set<Vertex> on_path(best.spanning_path.begin(), best.spanning_path.end());
    auto connector_along = [&](const std::vector<Vertex>& from_root) {
        std::vector<Vertex> c;
        for (Vertex x : from_root) {
            c.push_back(x);
            if (on_path.count(x)) break;
        }
        return c;
    };
    best.connector = connector_along(p_right);
    best.size = umbrella_size(best);
    {
        Umbrella alt = best;
        alt.connector = connector_along(std::vector<Vertex>(p_left.rbegin(), p_left.rend()));
        alt.size = umbrella_size(alt);
        if (alt.size < best.size) best = std::move(alt);
    }

    result.problems = validate_umbrella(g, best, component);
    if (best.size > state.stop_round)
        result.problems.push_back("size " + std::to_string(best.size) + " exceeds stop round " +
                                  std::to_string(state.stop_round));
    result.outcome = result.problems.empty() ? UmbrellaOutcome::ok : UmbrellaOutcome::validation_failed;
    result.umbrella = std::move(best);
    return result;
}

std::vector<std::string> validate_umbrella(const Graph& g, const Umbrella& u, const std::vector<Vertex>& component) {
    std::vector<std::string> problems;
    const PointSet& ps = g.points();
    const auto& sp = u.spanning_path;
    const auto& cn = u.connector;
    if (sp.empty() || cn.empty()) {
        problems.emplace_back("empty spanning path or connector");
        return problems;
    }
    if (std::unordered_set<Vertex>(sp.begin(), sp.end()).size() != sp.size())
        problems.emplace_back("spanning path repeats a vertex");
    for (std::size_t i = 0; i + 1 < sp.size(); ++i) {
        if (!g.is_adjacent(sp[i], sp[i + 1])) problems.push_back("spanning path step " + std::to_string(i) + " is not an edge");
    }
    if (cn.front() != u.root) problems.emplace_back("connector does not start at the root");
    for (std::size_t i = 0; i + 1 < cn.size(); ++i) {
        if (!g.is_adjacent(cn[i], cn[i + 1])) problems.push_back("connector step " + std::to_string(i) + " is not an edge");
        if (std::find(sp.begin(), sp.end(), cn[i]) != sp.end())
            problems.emplace_back("connector meets the spanning path before its end");
    }
    if (std::find(sp.begin(), sp.end(), cn.back()) == sp.end())
        problems.emplace_back("connector does not end on the spanning path");
    if (angular_extent(ps, component) < kPi) {
        double lo = 0.0, hi = 0.0;
        for (Vertex x : component) {
            const double s = signed_angle(ps[u.root], ps[x]);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        if (signed_angle(ps[u.root], ps[sp.front()]) != lo)
            problems.emplace_back("spanning path does not start at the clockwise-most vertex");
        if (signed_angle(ps[u.root], ps[sp.back()]) != hi)
            problems.emplace_back("spanning path does not end at the anticlockwise-most vertex");
    } else {
        problems.emplace_back("component wraps around the disk");
    }
    if (problems.empty() && umbrella_size(u) != u.size)
        problems.push_back("stored size " + std::to_string(u.size) + " differs from " + std::to_string(umbrella_size(u)));
    return problems;
}

bool verify_spanning_overlap(const ComponentLabeling& labeling, const Umbrella& a, const Umbrella& b) {
    if (!labeling.same_component(a.root, b.root)) throw InvalidArgument("umbrellas belong to different components");
    const std::unordered_set<Vertex> in_a(a.spanning_path.begin(), a.spanning_path.end());
    return std::any_of(b.spanning_path.begin(), b.spanning_path.end(), [&](Vertex x) { return in_a.count(x) > 0; });
}

namespace {

std::map<Vertex, std::vector<Vertex>> umbrella_tree(const Umbrella& u) {
    std::map<Vertex, std::vector<Vertex>> adj;
    auto link = [&](const std::vector<Vertex>& path) {
        adj[path.front()];
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            adj[path[i]].push_back(path[i + 1]);
            adj[path[i + 1]].push_back(path[i]);
        }
    };
    link(u.spanning_path);
    link(u.connector);
    return adj;
}

// Tree path from `from` to the first vertex satisfying `stop`, by BFS.
template <typename Stop>
std::vector<Vertex> tree_walk(const std::map<Vertex, std::vector<Vertex>>& adj, Vertex from, Stop stop) {
    std::map<Vertex, Vertex> prev{{from, from}};
    std::vector<Vertex> queue{from};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex x = queue[head];
        if (stop(x)) {
            std::vector<Vertex> out{x};
            for (Vertex y = x; y != from;) {
                y = prev.at(y);
                out.push_back(y);
            }
            std::reverse(out.begin(), out.end());
            return out;
        }
        for (Vertex y : adj.at(x)) {
            if (prev.emplace(y, x).second) queue.push_back(y);
        }
    }
    return {};
}

} // namespace

std::vector<Vertex> stitch_umbrella_path(const Umbrella& a, const Umbrella& b) {
    const auto tree_a = umbrella_tree(a);
    const auto tree_b = umbrella_tree(b);
    std::vector<Vertex> first = tree_walk(tree_a, a.root, [&](Vertex x) { return tree_b.count(x) > 0; });
    if (first.empty()) throw InvalidArgument("umbrellas do not meet");
    const std::vector<Vertex> second = tree_walk(tree_b, first.back(), [&](Vertex x) { return x == b.root; });
    first.insert(first.end(), second.begin() + 1, second.end());
    return first;
}

std::size_t umbrella_coverage_violations(const Graph& g, const Umbrella& u, const std::vector<Vertex>& component) {
    const PointSet& ps = g.points();
    const double big_r = ps.params().big_r();
    const auto& sp = u.spanning_path;
    const std::unordered_set<Vertex> on_path(sp.begin(), sp.end());
    std::size_t violations = 0;
    for (Vertex w : component) {
        if (on_path.count(w)) continue;
        bool above = false;
        for (std::size_t i = 0; i + 1 < sp.size() && !above; ++i) above = above_edge(ps[w], ps[sp[i]], ps[sp[i + 1]], big_r);
        if (!above) continue;
        const bool touches = std::any_of(sp.begin(), sp.end(), [&](Vertex x) { return g.is_adjacent(w, x); });
        if (!touches) ++violations;
    }
    return violations;
}

} // namespace hrg
