#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gffm/fps.hpp"

#include <cmath>

using namespace gffm;

namespace {

std::pair<Network, BoundarySpec> one_edge(double h0, double h1) {
    Network net({"xh", "xc"}, {{0, 1, 1.0}});
    BoundarySpec bc;
    bc.boundary = {0, 1};
    bc.values = {h0, h1};
    bc.hat = std::vector<int>{0};
    bc.check = std::vector<int>{1};
    return {std::move(net), std::move(bc)};
}

std::pair<Network, BoundarySpec> wheat5(double h0, double h1, bool partition) {
    Network net({"xh", "p", "q", "r", "xc"},
                {{0, 1, 1.0}, {1, 2, 1.0}, {2, 4, 1.0}, {0, 3, 1.0}, {3, 4, 1.0}, {1, 3, 1.0}});
    BoundarySpec bc;
    bc.boundary = {0, 4};
    bc.values = {h0, h1};
    if (partition) {
        bc.hat = std::vector<int>{0};
        bc.check = std::vector<int>{4};
    }
    return {std::move(net), std::move(bc)};
}

}  // namespace

TEST_CASE("bracket ordering holds on every sample") {
    auto [net, bc] = wheat5(0.0, 0.0, true);
    RefinedNetwork rn = refine(net, bc, 8);
    const FieldSampler sampler(rn.net, rn.bc);
    stats::RandomStream root(3);
    for (int rep = 0; rep < 500; ++rep) {
        stats::RandomStream s = root.substream(rep);
        FieldSample f = sampler.sample(s);
        AnnotatedSample ann = annotate_minima(rn.net, std::move(f), s);
        FirstPassageSet fps = grow_fps(rn, ann.field.values, ann.edge_minima, -0.7);
        for (int v = 0; v < rn.net.vertex_count(); ++v)
            CHECK(fps.lower[v] <= fps.upper[v]);
        FpsObservables obs = fps_observables(rn, fps);
        CHECK(obs.c_lower <= obs.c_upper);
        CHECK(obs.r_lower >= obs.r_upper);
    }
}

TEST_CASE("level above the growth boundary is rejected") {
    auto [net, bc] = one_edge(0.0, 0.0);
    RefinedNetwork rn = refine(net, bc, 4);
    std::vector<double> phi(rn.net.vertex_count(), 0.0);
    std::vector<double> minima(rn.net.edges().size(), 0.0);
    CHECK_THROWS(grow_fps(rn, phi, minima, 0.5));
}

TEST_CASE("very low level swallows the component") {
    auto [net, bc] = wheat5(0.0, 0.0, true);
    RefinedNetwork rn = refine(net, bc, 4);
    const FieldSampler sampler(rn.net, rn.bc);
    stats::RandomStream s(4);
    FieldSample f = sampler.sample(s);
    AnnotatedSample ann = annotate_minima(rn.net, std::move(f), s);
    double low = -1.0;
    for (double m : ann.edge_minima) low = std::min(low, m);
    FirstPassageSet fps = grow_fps(rn, ann.field.values, ann.edge_minima, low - 1.0);
    FpsObservables obs = fps_observables(rn, fps);
    CHECK(std::isinf(obs.c_lower));
    CHECK(std::isinf(obs.c_upper));
}

TEST_CASE("Laplace estimate tends to one as u vanishes") {
    auto [net, bc] = one_edge(0.0, 0.0);
    auto ests = fps_laplace_estimate(net, bc, -0.5, {1e-12}, 8, 2000, 5);
    // Samples reaching the check block contribute exp(-inf) = 0; the rest
    // contribute essentially 1.
    const double reach = laws::bridge_min_survival({0.0, 0.0, 1.0}, -0.5);
    CHECK(ests[0].lower == doctest::Approx(1.0 - reach).epsilon(0.05));
    CHECK(ests[0].closed_form == doctest::Approx(1.0 - reach).epsilon(1e-6));
}

TEST_CASE("nonconstant check-side boundary data is rejected") {
    auto [net, bc] = wheat5(0.0, 0.3, true);
    bc.check = std::vector<int>{0, 4};
    bc.hat = std::vector<int>{};
    CHECK_THROWS(fps_laplace_estimate(net, bc, -1.0, {1.0}, 4, 100, 1));
}

TEST_CASE("bracket gap shrinks as the refinement doubles") {
    auto [net, bc] = one_edge(0.0, 0.0);
    double prev_gap = 1e9;
    for (int refinement : {8, 16, 32}) {
        auto ests = fps_laplace_estimate(net, bc, -1.0, {1.0}, refinement, 20000, 7, 4);
        const double gap = std::abs(ests[0].lower - ests[0].upper);
        CHECK(gap < prev_gap + 4.0 * (ests[0].lower_se + ests[0].upper_se));
        CHECK(ests[0].closed_form > ests[0].upper - 4.0 * ests[0].upper_se);
        CHECK(ests[0].closed_form < ests[0].lower + 4.0 * ests[0].lower_se);
        prev_gap = gap;
    }
}

TEST_CASE("one-edge set resistance follows the last visit law") {
    auto [net, bc] = one_edge(0.8, 0.6);
    const double a = -0.3;
    RefinedNetwork rn = refine(net, bc, 64);
    const FieldSampler sampler(rn.net, rn.bc);
    const std::size_t n = 20000;
    std::vector<double> r_mid(n);
    stats::RandomStream root(8);
    stats::parallel_replicates(n, 4, [&](std::size_t rep) {
        stats::RandomStream s = root.substream(rep);
        FieldSample f = sampler.sample(s);
        AnnotatedSample ann = annotate_minima(rn.net, std::move(f), s);
        FirstPassageSet fps = grow_fps(rn, ann.field.values, ann.edge_minima, a);
        FpsObservables obs = fps_observables(rn, fps);
        r_mid[rep] = (obs.r_lower + obs.r_upper) / 2.0;
    });
    // Reversing the bridge turns the first hit of a from the hat side into
    // the last visit of a seen from the check side.
    const laws::BridgeSpec reversed{0.6, 0.8, 1.0};
    const double atom = laws::bridge_min_survival(reversed, a);
    auto rep = stats::ks_with_zero_atom(
        "last visit", r_mid, atom,
        [&](double t) {
            return (laws::last_visit_cdf(reversed, a, t) - atom) / (1.0 - atom);
        },
        8);
    CHECK(rep.pass);
}

TEST_CASE("nested drops are monotone and capped by the full resistance") {
    auto [net, bc] = wheat5(1.0, 0.8, false);
    RefinedNetwork rn = refine(net, bc, 8);
    const FieldSampler sampler(rn.net, rn.bc);
    const int x0 = net.index_of("q");
    const double r_full = 1.0 / grounded_conductance(net, {x0}, bc.boundary);
    stats::RandomStream root(9);
    for (int rep = 0; rep < 300; ++rep) {
        stats::RandomStream s = root.substream(rep);
        NestedFpsSample sample = nested_fps_once(rn, sampler, {0.2, -0.4, -1.0}, x0, s);
        for (std::size_t i = 0; i + 1 < 3; ++i) {
            CHECK(sample.drops_lower[i] <= sample.drops_lower[i + 1] + 1e-12);
            CHECK(sample.drops_upper[i] <= sample.drops_upper[i + 1] + 1e-12);
        }
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(sample.drops_lower[i] <= sample.drops_upper[i] + 1e-12);
            CHECK(sample.drops_upper[i] <= r_full + 1e-9);
            CHECK(sample.drops_lower[i] >= -1e-12);
        }
        CHECK(sample.terminal_maximin <= 0.8 + 1e-12);
    }
    CHECK_THROWS(nested_fps_once(rn, sampler, {-1.0, -0.5}, x0, root));
}

TEST_CASE("metric balls grow with the radius") {
    auto [net, bc] = wheat5(0.6, 0.4, false);
    RefinedNetwork rn = refine(net, bc, 8);
    const FieldSampler sampler(rn.net, rn.bc);
    const int x0 = net.index_of("q");
    stats::RandomStream root(10);
    for (int rep = 0; rep < 300; ++rep) {
        stats::RandomStream s = root.substream(rep);
        MetricBallSample sample =
            metric_ball_once(rn, sampler, {0.0, 0.3, 0.8, 2.0}, x0, s);
        CHECK(sample.drops[0] >= -1e-12);
        for (std::size_t i = 0; i + 1 < 4; ++i)
            CHECK(sample.drops[i] <= sample.drops[i + 1] + 1e-12);
    }
}
