#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gffm/metric.hpp"

#include <cmath>
#include <functional>

using namespace gffm;

TEST_CASE("delta_from accumulates shortest local time paths") {
    Network net({"a", "b", "c"}, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
    std::vector<double> L{0.5, 0.2, 0.4};
    std::vector<double> d = delta_from(net, L, {0});
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 0.5);
    CHECK(d[2] == 0.4);
    CHECK(delta_between(net, L, {0}, {2}) == 0.4);
    std::vector<double> L2{0.5, 0.2, 0.9};
    CHECK(delta_from(net, L2, {0})[2] == 0.5 + 0.2);
}

TEST_CASE("infimum_itilde is the bottleneck over paths") {
    Network net({"a", "b", "c", "d"},
                {{0, 1, 1.0}, {1, 3, 1.0}, {0, 2, 1.0}, {2, 3, 1.0}});
    std::vector<double> minima{-0.2, 0.6, 0.3, -0.8};
    std::vector<double> best = infimum_itilde(net, minima, {0}, {1.0});
    CHECK(best[0] == 1.0);
    CHECK(best[1] == doctest::Approx(-0.2));
    CHECK(best[2] == doctest::Approx(0.3));
    // to d: max(min(-0.2, 0.6), min(0.3, -0.8)) = -0.2
    CHECK(best[3] == doctest::Approx(-0.2));
}

TEST_CASE("pseudo-metric properties on a sampled annotation") {
    Network net({"a", "b", "c", "d", "e"},
                {{0, 1, 1.0}, {1, 2, 2.0}, {2, 3, 0.5}, {3, 4, 1.0}, {0, 4, 0.7},
                 {1, 3, 1.3}});
    BoundarySpec bc;
    bc.boundary = {0};
    bc.values = {0.4};
    stats::RandomStream s(5);
    for (int rep = 0; rep < 200; ++rep) {
        FieldSample f = sample_field(net, bc, s);
        AnnotatedSample a = annotate_local_times(net, std::move(f), s);
        for (int x = 0; x < 5; ++x) {
            std::vector<double> dx = delta_from(net, a.edge_local_times, {x});
            CHECK(dx[x] == 0.0);
            for (int y = 0; y < 5; ++y) {
                std::vector<double> dy = delta_from(net, a.edge_local_times, {y});
                CHECK(dx[y] == doctest::Approx(dy[x]).epsilon(1e-12));
                for (int z = 0; z < 5; ++z)
                    CHECK(dx[z] <= dx[y] + dy[z] + 1e-12);
            }
        }
    }
}

TEST_CASE("zero distance between blocks means a shared sign cluster") {
    Network net({"a", "b", "c", "d"},
                {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {0, 3, 1.0}});
    BoundarySpec bc;
    bc.boundary = {0, 3};
    bc.values = {0.3, 0.2};
    stats::RandomStream s(6);
    for (int rep = 0; rep < 2000; ++rep) {
        FieldSample f = sample_field(net, bc, s);
        AnnotatedSample a = annotate_local_times(net, std::move(f), s);
        std::vector<int> comp = sign_clusters(net, a.edge_local_times);
        std::vector<double> d = delta_from(net, a.edge_local_times, {0});
        for (int v = 0; v < 4; ++v)
            CHECK((d[v] == 0.0) == (comp[v] == comp[0]));
    }
}

TEST_CASE("local time atom frequency on one edge") {
    Network net({"a", "b"}, {{0, 1, 0.5}});
    BoundarySpec bc;
    bc.boundary = {0, 1};
    bc.values = {1.0, 1.0};
    stats::RandomStream s(7);
    const int n = 40000;
    std::vector<double> zero(n);
    for (int rep = 0; rep < n; ++rep) {
        FieldSample f = sample_field(net, bc, s);
        AnnotatedSample a = annotate_local_times(net, std::move(f), s);
        zero[rep] = a.edge_local_times[0] == 0.0 ? 1.0 : 0.0;
    }
    CHECK(stats::mean_z("atom", zero, 1.0 - std::exp(-1.0)).pass);
}

TEST_CASE("levy pair samples are thread-count invariant") {
    Network net({"a", "b", "c", "d"},
                {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {1, 3, 0.5}});
    BoundarySpec bc;
    bc.boundary = {0};
    bc.values = {0.2};
    LevySamples one = levy_pair_samples(net, bc, 500, 9, 1);
    LevySamples four = levy_pair_samples(net, bc, 500, 9, 4);
    CHECK(one.abs_phi == four.abs_phi);
    CHECK(one.delta == four.delta);
    CHECK(one.phi_minus_i == four.phi_minus_i);
    CHECK(one.neg_i == four.neg_i);
    for (std::size_t rep = 0; rep < 500; ++rep) {
        CHECK(one.delta[0][rep] == 0.0);
        for (int v = 1; v < 4; ++v) CHECK(one.neg_i[v][rep] >= 0.0);
    }
}

TEST_CASE("negative boundary data is rejected for the reflection pair") {
    Network net({"a", "b"}, {{0, 1, 1.0}});
    BoundarySpec bc;
    bc.boundary = {0};
    bc.values = {-0.1};
    CHECK_THROWS(levy_pair_samples(net, bc, 10, 1));
}
