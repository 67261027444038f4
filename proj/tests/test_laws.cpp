#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gffm/laws.hpp"
#include "gffm/stats.hpp"

#include <cmath>

using namespace gffm;
using namespace gffm::laws;

TEST_CASE("local time survival pinned values") {
    CHECK(local_time_survival({0.0, 0.0, 1.0}, 1.0) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(local_time_survival({1.0, 1.0, 2.0}, 0.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    // Opposite-sign endpoints force the bridge through zero.
    CHECK(local_time_survival({1.0, -1.0, 2.0}, 0.0) == doctest::Approx(1.0));
    CHECK(local_time_survival({1.0, -1.0, 2.0}, 1.0) ==
          doctest::Approx(std::exp(-(9.0 - 4.0) / 4.0)).epsilon(1e-14));
    CHECK(local_time_survival({0.5, 0.25, 1.0}, 0.0) ==
          doctest::Approx(std::exp(-0.25)).epsilon(1e-14));
}

TEST_CASE("local time sampler inverts its survival function") {
    const BridgeSpec b{0.7, 0.4, 1.7};
    for (double u = 0.02; u < 1.0; u += 0.02) {
        const double l = sample_local_time(b, u);
        if (l > 0.0)
            CHECK(local_time_survival(b, l) == doctest::Approx(u).epsilon(1e-12));
        else
            CHECK(u >= local_time_survival(b, 0.0));
    }
}

TEST_CASE("local time survival is monotone in the level") {
    const BridgeSpec b{0.3, 1.1, 2.5};
    double prev = 1.0;
    for (double l = 0.0; l < 6.0; l += 0.1) {
        const double s = local_time_survival(b, l);
        CHECK(s <= prev + 1e-15);
        CHECK(s >= 0.0);
        prev = s;
    }
}

TEST_CASE("bridge minimum sampler inverts its survival function") {
    const BridgeSpec b{0.9, 0.2, 1.3};
    CHECK(bridge_min_survival(b, 0.2) == doctest::Approx(0.0));
    // The sampler inverts u = P(min <= a), so survival returns 1 - u.
    for (double u = 0.02; u < 1.0; u += 0.02) {
        const double a = sample_bridge_min(b, u);
        CHECK(a <= std::min(b.w0, b.wT));
        CHECK(bridge_min_survival(b, a) == doctest::Approx(1.0 - u).epsilon(1e-12));
    }
}

TEST_CASE("bridge minimum law matches the reflection formula") {
    // P(min > a) = 1 - exp(-2 (w0-a)(wT-a)/T) for a below both endpoints.
    const BridgeSpec b{1.0, 0.5, 2.0};
    for (double a = -2.0; a < 0.5; a += 0.25)
        CHECK(bridge_min_survival(b, a) ==
              doctest::Approx(1.0 - std::exp(-2.0 * (1.0 - a) * (0.5 - a) / 2.0))
                  .epsilon(1e-13));
}

TEST_CASE("two-set survival on a single cross pair") {
    Network net({"a", "b"}, {{0, 1, 0.5}});
    BoundarySpec bc;
    bc.boundary = {0, 1};
    bc.values = {0.6, 0.3};
    bc.hat = std::vector<int>{0};
    bc.check = std::vector<int>{1};
    TwoSetLawSpec spec{effective_kernel(net, bc.boundary), bc};
    for (double l = 0.0; l < 3.0; l += 0.4) {
        const double expect =
            std::exp(-0.25 * ((0.9 + l) * (0.9 + l) - 0.09));
        CHECK(two_set_survival(spec, l) == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("fps Laplace transform pinned value and monotonicity") {
    CHECK(fps_laplace(1.0, 0.0, 0.0, -1.0, 0.5) ==
          doctest::Approx(std::exp(-0.5 * std::pow(1.0 + std::sqrt(2.0), 2.0)))
              .epsilon(1e-14));
    double prev = 1.0;
    for (double u = 1e-9; u < 20.0; u *= 2.0) {
        const double v = fps_laplace(0.7, 0.1, 0.0, -0.8, u);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
    // The u -> 0 limit is the probability that the set stops short of the
    // check block: samples that reach it carry infinite conductance and
    // contribute zero for every positive u.
    const double limit =
        std::exp(-0.5 * 0.7 * ((0.9 + 0.8) * (0.9 + 0.8) - 0.1 * 0.1));
    CHECK(fps_laplace(0.7, 0.1, 0.0, -0.8, 1e-14) ==
          doctest::Approx(limit).epsilon(1e-5));
}

TEST_CASE("Brownian hitting CDF") {
    CHECK(bm_hitting_cdf(0.0, -1.0, 1.0) == doctest::Approx(0.317310507863).epsilon(1e-10));
    CHECK(bm_hitting_cdf(0.5, 0.5, 0.3) == doctest::Approx(1.0));
    CHECK(bm_hitting_cdf(0.0, -1.0, 0.0) == doctest::Approx(0.0));
    // scaling: T_a from m at time t matches T_{a-m} from 0.
    CHECK(bm_hitting_cdf(0.7, -0.3, 2.0) == doctest::Approx(bm_hitting_cdf(0.0, -1.0, 2.0)));
}

TEST_CASE("last visit CDF endpoints and monotonicity") {
    const BridgeSpec b{0.8, 0.6, 1.5};
    const double a = -0.4;
    CHECK(last_visit_cdf(b, a, 0.0) ==
          doctest::Approx(bridge_min_survival(b, a)).epsilon(1e-12));
    CHECK(last_visit_cdf(b, a, b.T) == doctest::Approx(1.0).epsilon(1e-9));
    double prev = 0.0;
    for (double t = 0.0; t <= b.T + 1e-12; t += b.T / 40.0) {
        const double f = last_visit_cdf(b, a, t);
        CHECK(f >= prev - 1e-12);
        prev = f;
    }
}

TEST_CASE("sampled local times follow the survival law end to end") {
    stats::RandomStream s(21);
    const BridgeSpec b{0.6, 0.9, 2.2};
    std::vector<double> draws;
    for (int i = 0; i < 50000; ++i) draws.push_back(sample_local_time(b, s.uniform()));
    const double pos = local_time_survival(b, 0.0);
    auto r = stats::ks_with_zero_atom(
        "local time", draws, 1.0 - pos,
        [&](double l) { return 1.0 - local_time_survival(b, l) / pos; });
    CHECK(r.pass);
}
