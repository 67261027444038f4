#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gffm/network.hpp"

#include <cmath>

using namespace gffm;

namespace {

std::pair<Network, BoundarySpec> three_star() {
    Network net({"x1", "x2", "x3", "y"}, {{0, 3, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}});
    BoundarySpec bc;
    bc.boundary = {0, 1, 2};
    bc.values = {0.0, 0.0, 0.0};
    return {std::move(net), std::move(bc)};
}

std::pair<Network, BoundarySpec> cyclic7() {
    Network net({"b1", "b2", "b3", "b4", "i1", "i2", "i3"},
                {{0, 4, 1.0},
                 {1, 4, 1.5},
                 {1, 5, 1.0},
                 {2, 5, 2.0},
                 {3, 6, 1.0},
                 {4, 5, 0.8},
                 {5, 6, 1.2},
                 {4, 6, 0.5},
                 {2, 6, 0.7}});
    BoundarySpec bc;
    bc.boundary = {0, 1, 2, 3};
    bc.values = {0.2, 0.6, 0.1, 0.4};
    return {std::move(net), std::move(bc)};
}

}  // namespace

TEST_CASE("graph JSON parsing and validation") {
    const std::string doc = R"({
        "vertices": ["a", "b", "c"],
        "edges": [{"u":"a","v":"b","conductance":2.0},
                  {"u":"b","v":"c","conductance":0.5}],
        "boundary": {"a": 1.0, "c": -0.25},
        "partition": {"hat": ["a"], "check": ["c"]}
    })";
    auto [net, bc] = load_network(doc);
    CHECK(net.vertex_count() == 3);
    CHECK(net.edges().size() == 2);
    CHECK(bc.value_at(net.index_of("a")) == 1.0);
    CHECK(bc.has_partition());

    CHECK_THROWS(load_network(R"({"vertices":["a","b"],"edges":[],"boundary":{"a":0}})"));
    CHECK_THROWS(load_network(
        R"({"vertices":["a","b"],"edges":[{"u":"a","v":"a","conductance":1}],"boundary":{"a":0}})"));
    CHECK_THROWS(load_network(
        R"({"vertices":["a","b"],"edges":[{"u":"a","v":"b","conductance":-1}],"boundary":{"a":0}})"));
    CHECK_THROWS(load_network(
        R"({"vertices":["a","b"],"edges":[{"u":"a","v":"b","conductance":1}],"boundary":{"z":0}})"));
    CHECK_THROWS(load_network(
        R"({"vertices":["a","b","c","d"],
            "edges":[{"u":"a","v":"b","conductance":1},{"u":"c","v":"d","conductance":1}],
            "boundary":{"a":0}})"));
}

TEST_CASE("series and parallel resistance") {
    Network series({"a", "b", "c"}, {{0, 1, 1.0}, {1, 2, 0.5}});
    CHECK(two_point_resistance(series, 0, 2) == doctest::Approx(3.0).epsilon(1e-12));
    Network parallel({"a", "b"}, {{0, 1, 1.0}, {0, 1, 0.5}});
    CHECK(two_point_resistance(parallel, 0, 1) == doctest::Approx(1.0 / 1.5).epsilon(1e-12));
}

TEST_CASE("unit 3-star kernel is the 1/3 triangle") {
    auto [net, bc] = three_star();
    KernelMatrix k = effective_kernel(net, bc.boundary);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(k.entries(i, j) ==
                  doctest::Approx(i == j ? 0.0 : 1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("star-mesh transform matches the Schur complement") {
    auto [net, bc] = cyclic7();
    Network reduced = star_mesh(net, net.index_of("i2"));
    std::vector<int> keep;
    std::vector<int> keep_reduced;
    for (const char* n : {"b1", "b2", "b3", "b4", "i1", "i3"}) {
        keep.push_back(net.index_of(n));
        keep_reduced.push_back(reduced.index_of(n));
    }
    KernelMatrix before = effective_kernel(net, keep);
    KernelMatrix after = effective_kernel(reduced, keep_reduced);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(after.entries(i, j) ==
                  doctest::Approx(before.entries(i, j)).epsilon(1e-10));
}

TEST_CASE("grounded conductance agrees with two-point resistance") {
    auto [net, bc] = cyclic7();
    for (int x = 0; x < net.vertex_count(); ++x)
        for (int y = x + 1; y < net.vertex_count(); ++y)
            CHECK(1.0 / grounded_conductance(net, {x}, {y}) ==
                  doctest::Approx(two_point_resistance(net, x, y)).epsilon(1e-10));
    CHECK(std::isinf(grounded_conductance(net, {0, 1}, {1, 2})));
}

TEST_CASE("Green diagonal equals grounded effective resistance") {
    auto [net, bc] = cyclic7();
    GreenMatrix g = green_matrix(net, bc);
    for (std::size_t i = 0; i < g.interior.size(); ++i) {
        const double r = 1.0 / grounded_conductance(net, {g.interior[i]}, bc.boundary);
        CHECK(g.entries(i, i) == doctest::Approx(r).epsilon(1e-11));
        for (std::size_t j = 0; j < g.interior.size(); ++j)
            CHECK(g.entries(i, j) == doctest::Approx(g.entries(j, i)).epsilon(1e-12));
    }
}

TEST_CASE("Rayleigh monotonicity") {
    auto [net, bc] = cyclic7();
    const double base = two_point_resistance(net, 0, 3);
    Network boosted({"b1", "b2", "b3", "b4", "i1", "i2", "i3"},
                    {{0, 4, 2.0},
                     {1, 4, 1.5},
                     {1, 5, 1.0},
                     {2, 5, 2.0},
                     {3, 6, 1.0},
                     {4, 5, 0.8},
                     {5, 6, 1.2},
                     {4, 6, 0.5},
                     {2, 6, 0.7}});
    CHECK(two_point_resistance(boosted, 0, 3) < base);
}

TEST_CASE("harmonic extension satisfies the mean value property") {
    auto [net, bc] = cyclic7();
    std::vector<double> h = harmonic_extension(net, bc);
    for (std::size_t i = 0; i < bc.boundary.size(); ++i)
        CHECK(h[bc.boundary[i]] == bc.values[i]);
    for (int v : bc.interior(net)) {
        double total = 0.0, weighted = 0.0;
        for (const auto& [w, c] : net.adjacency()[v]) {
            total += c;
            weighted += c * h[w];
        }
        CHECK(h[v] == doctest::Approx(weighted / total).epsilon(1e-10));
    }
}

TEST_CASE("eroded kernel with zero erosion is the boundary kernel") {
    auto [net, bc] = three_star();
    KernelMatrix base = effective_kernel(net, bc.boundary);
    KernelMatrix eroded = eroded_kernel(net, bc, {});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(eroded.entries(i, j) == doctest::Approx(base.entries(i, j)).epsilon(1e-12));
}

TEST_CASE("eroded kernel matches an explicitly rebuilt network") {
    auto [net, bc] = three_star();
    // Erode the first leg by r: its remaining resistance is 1 - r.
    const double r = 0.35;
    KernelMatrix eroded = eroded_kernel(net, bc, {{0, r}});
    Network rebuilt({"p", "x2", "x3", "y"},
                    {{0, 3, 1.0 / (1.0 - r)}, {1, 3, 1.0}, {2, 3, 1.0}});
    KernelMatrix oracle = effective_kernel(rebuilt, {0, 1, 2});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(eroded.entries(i, j) ==
                  doctest::Approx(oracle.entries(i, j)).epsilon(1e-12));
}

TEST_CASE("kernel derivative identities hold under finite differences") {
    auto [net, bc] = three_star();
    std::map<int, double> erosions{{0, 0.2}, {1, 0.3}, {2, 0.25}};
    double worst_coarse = 0.0, worst_fine = 0.0;
    for (const auto& h : hadamard_check(net, bc, erosions, 2e-4))
        worst_coarse = std::max(worst_coarse, h.rel_error);
    for (const auto& h : hadamard_check(net, bc, erosions, 1e-4))
        worst_fine = std::max(worst_fine, h.rel_error);
    CHECK(worst_fine < 1e-5);
    // Central differences are second order: halving the step should shrink
    // the residual by roughly four.
    CHECK(worst_coarse / worst_fine > 2.0);
    CHECK(worst_coarse / worst_fine < 8.0);
}

TEST_CASE("boundary mean weights the hat values by cross conductance") {
    Network net({"l1", "l2", "l3", "l4", "y"},
                {{0, 4, 1.0}, {1, 4, 1.0}, {2, 4, 1.0}, {3, 4, 1.0}});
    BoundarySpec bc;
    bc.boundary = {0, 1, 2, 3};
    bc.values = {0.3, 0.5, 0.2, 0.4};
    bc.hat = std::vector<int>{0, 1};
    bc.check = std::vector<int>{2, 3};
    // Equal cross conductances: m is the plain average over the hat block.
    CHECK(boundary_mean(net, bc) == doctest::Approx(0.4).epsilon(1e-12));
    KernelMatrix k = effective_kernel(net, bc.boundary);
    CHECK(cross_conductance(k, bc) == doctest::Approx(1.0).epsilon(1e-12));
}
