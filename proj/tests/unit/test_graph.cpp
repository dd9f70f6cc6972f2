#include "doctest.h"
#include "helpers.hpp"

#include "hrg/error.hpp"
#include "hrg/graph.hpp"

#include <cmath>
#include <fstream>
#include <string>

using namespace hrg;

namespace {

std::shared_ptr<const PointSet> make_points(const ModelParams& p, std::vector<PolarPoint> pts) {
    return std::make_shared<const PointSet>(p, std::move(pts), Provenance::binomial, SeedRecord{});
}

} // namespace

TEST_CASE("naive builder examples") {
    const auto p = ModelParams::create(100, 0.75, 1.0);
    const double big_r = p.big_r();
    CHECK(build_naive(make_points(p, {{big_r / 2, 1.0}, {big_r / 2, 1.0}})).num_edges() == 1);
    CHECK(build_naive(make_points(p, {{0.6 * big_r, 0.5}, {0.6 * big_r, 0.5 + kPi}})).num_edges() == 0);
    const Graph tri = build_naive(make_points(p, {{0.3 * big_r, 0.1}, {0.4 * big_r, 2.0}, {0.45 * big_r, 4.0}}));
    CHECK(tri.num_edges() == 3);
    CHECK(build_naive(make_points(p, {})).num_vertices() == 0);
    CHECK(build_bucketed(make_points(p, {})).num_edges() == 0);
    BuildOptions tight;
    tight.naive_cap = 10;
    CHECK_THROWS_AS(build_naive(sample_binomial(p, 11, 1), tight), InvalidArgument);
}

TEST_CASE("bucketed and naive builders agree exactly") {
    int builds = 0;
    for (double alpha : {0.6, 0.75, 0.9, 1.1, 1.5}) {
        for (double nu : {0.5, 1.0, 2.0}) {
            const auto p = ModelParams::create(2000, alpha, nu);
            for (std::uint64_t seed = 0; seed < 20; ++seed) {
                auto ps = std::make_shared<const PointSet>(sample_binomial(p, 2000, 100 * seed + 7));
                const Graph a = build_naive(ps);
                const Graph b = build_bucketed(ps);
                CAPTURE(alpha);
                CAPTURE(nu);
                CAPTURE(seed);
                REQUIRE(a.num_edges() == b.num_edges());
                CHECK(a.offsets() == b.offsets());
                CHECK(a.neighbor_array() == b.neighbor_array());
                ++builds;
            }
        }
    }
    CHECK(builds == 300);
}

TEST_CASE("every true edge lies inside the bucket window") {
    for (double alpha : {0.6, 0.75, 1.5}) {
        const auto p = ModelParams::create(2000, alpha, 1.0);
        const PointSet ps = sample_poisson(p, 31);
        const Graph g = build_naive(ps);
        const double big_r = p.big_r();
        int violations = 0;
        for (const auto& [u, v] : g.edge_list()) {
            for (auto [a, b] : {std::pair{u, v}, std::pair{v, u}}) {
                const int band = std::min(static_cast<int>(std::floor(ps.type(b))), static_cast<int>(std::floor(big_r)));
                if (relative_angle(ps[a], ps[b]) > bucket_window(ps[a].r, band, big_r)) ++violations;
            }
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("graph invariants and adjacency queries") {
    const auto p = ModelParams::create(5000, 0.75, 1.0);
    auto ps = std::make_shared<const PointSet>(sample_poisson(p, 8));
    const Graph g = build_bucketed(ps);
    const auto report = validate_graph(g);
    CHECK(report.ok);
    std::size_t degree_sum = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) degree_sum += g.degree(v);
    CHECK(degree_sum == 2 * g.num_edges());
    for (Vertex v = 0; v < 50; ++v) CHECK_FALSE(g.is_adjacent(v, v));
    for (const auto& [u, v] : g.edge_list()) {
        CHECK(u < v);
        CHECK(g.is_adjacent(u, v));
        CHECK(g.is_adjacent(v, u));
    }
    testutil::PointDrawer draw(p, 4);
    const auto n = g.num_vertices();
    for (int i = 0; i < 10000; ++i) {
        const auto u = static_cast<Vertex>(draw.engine()() % n);
        const auto v = static_cast<Vertex>(draw.engine()() % n);
        const bool expect = u != v && hyperbolic_distance((*ps)[u], (*ps)[v]) <= p.big_r();
        CHECK(g.is_adjacent(u, v) == expect);
    }
    CHECK_THROWS_AS(g.is_adjacent(static_cast<Vertex>(n), 0), InvalidArgument);
}

TEST_CASE("CSR constructor rejects malformed structures") {
    using V = std::vector<Vertex>;
    using O = std::vector<std::uint64_t>;
    CHECK_NOTHROW(Graph(nullptr, O{0, 1, 2}, V{1, 0}, BuildMethod::explicit_edges));
    CHECK_THROWS_AS(Graph(nullptr, O{0, 1, 1}, V{1}, BuildMethod::explicit_edges), InvalidArgument);
    CHECK_THROWS_AS(Graph(nullptr, O{0, 1, 2}, V{0, 1}, BuildMethod::explicit_edges), InvalidArgument);
    CHECK_THROWS_AS(Graph(nullptr, O{0, 2, 2}, V{1, 1}, BuildMethod::explicit_edges), InvalidArgument);
    CHECK_THROWS_AS(Graph(nullptr, O{0, 1, 3}, V{2, 0}, BuildMethod::explicit_edges), InvalidArgument);
    const std::vector<std::pair<Vertex, Vertex>> edges = {{0, 1}, {1, 0}, {1, 2}};
    const Graph g = Graph::from_edges(3, edges);
    CHECK(g.num_edges() == 2);
    const std::vector<std::pair<Vertex, Vertex>> loop = {{1, 1}};
    CHECK_THROWS_AS(Graph::from_edges(3, loop), InvalidArgument);
    CHECK_THROWS_AS(g.points(), InvalidArgument);
}

TEST_CASE("validator catches edges longer than R") {
    const auto p = ModelParams::create(100, 0.75, 1.0);
    auto ps = make_points(p, {{p.big_r(), 0.0}, {p.big_r(), kPi}});
    const std::vector<std::pair<Vertex, Vertex>> edges = {{0, 1}};
    const Graph g = Graph::from_edges(2, edges, ps);
    CHECK_FALSE(validate_graph(g).ok);
}

TEST_CASE("graph files") {
    const auto p = ModelParams::create(3000, 0.75, 1.0);
    auto ps = std::make_shared<const PointSet>(sample_poisson(p, 19));
    const Graph g = build_bucketed(ps);
    const auto path = testutil::temp_path("graph.hrgg");
    write_graph_binary(g, path);
    CHECK(std::filesystem::file_size(path) == 4 + 4 + 8 + 8 + 1 + 8 * (g.num_vertices() + 1) + 8 * 2 * g.num_edges());
    const Graph back = read_graph_binary(path, ps);
    CHECK(back.offsets() == g.offsets());
    CHECK(back.neighbor_array() == g.neighbor_array());
    CHECK(back.build_method() == BuildMethod::bucketed);
    CHECK(read_graph_binary(path).num_edges() == g.num_edges());

    auto small = std::make_shared<const PointSet>(sample_binomial(p, 10, 1));
    CHECK_THROWS_AS(read_graph_binary(path, small), FormatError);

    auto corrupt = [&](const std::string& name, auto&& mutate) {
        std::ifstream in(path, std::ios::binary);
        std::string data((std::istreambuf_iterator<char>(in)), {});
        mutate(data);
        const auto out = testutil::temp_path(name);
        std::ofstream(out, std::ios::binary) << data;
        return out;
    };
    CHECK_THROWS_AS(read_graph_binary(corrupt("magic.hrgg", [](std::string& d) { d[3] = 'P'; })), FormatError);
    CHECK_THROWS_AS(read_graph_binary(corrupt("version.hrgg", [](std::string& d) { d[4] = 2; })), FormatError);
    CHECK_THROWS_AS(read_graph_binary(corrupt("short.hrgg", [](std::string& d) { d.resize(d.size() - 8); })),
                    FormatError);
    CHECK_THROWS_AS(read_graph_binary(corrupt("method.hrgg", [](std::string& d) { d[24] = 7; })), FormatError);
    CHECK_THROWS_AS(read_graph_binary(testutil::temp_path("missing.hrgg")), IoError);

    const auto csv = testutil::temp_path("edges.csv");
    write_edges_csv(g, csv);
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "u,v");
    std::size_t rows = 0;
    const auto edges = g.edge_list();
    while (std::getline(in, line)) {
        REQUIRE(rows < edges.size());
        CHECK(line == std::to_string(edges[rows].first) + "," + std::to_string(edges[rows].second));
        ++rows;
    }
    CHECK(rows == g.num_edges());
}
