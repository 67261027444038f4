#include "gffm/experiments.hpp"

#include "gffm/grids.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gffm::experiments {

namespace {

using stats::TestReport;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

unsigned resolve_threads(const SuiteOptions& opt) {
    return opt.threads ? opt.threads : stats::default_threads();
}

std::size_t scaled(double base, const SuiteOptions& opt) {
    return std::max<std::size_t>(200, static_cast<std::size_t>(base * opt.scale));
}

std::string reports_csv(const std::vector<TestReport>& reports) {
    std::ostringstream os;
    os << "name,statistic,value,p_value,pass,n1,n2,seed\n";
    for (const auto& r : reports)
        os << r.name << ',' << r.statistic << ',' << r.value << ',' << r.p_value << ','
           << (r.pass ? 1 : 0) << ',' << r.n1 << ',' << r.n2 << ',' << r.seed << '\n';
    return os.str();
}

SuiteResult finish(std::string name, std::vector<TestReport> reports, bool pass,
                   Clock::time_point t0, std::string extra_csv = {}) {
    SuiteResult out;
    out.name = std::move(name);
    out.reports = std::move(reports);
    out.pass = pass;
    out.runtime_ms = ms_since(t0);
    out.data_csv = reports_csv(out.reports);
    if (!extra_csv.empty()) out.data_csv += "\n" + extra_csv;
    return out;
}

/// Runs the per-seed check on every configured seed; the suite passes when
/// at least two of three seeds pass (all seeds when fewer are configured).
bool majority_over_seeds(const SuiteOptions& opt, std::vector<TestReport>& sink,
                         const std::function<bool(std::uint64_t, std::vector<TestReport>&)>& one) {
    std::size_t passes = 0;
    for (std::uint64_t seed : opt.seeds) {
        std::vector<TestReport> rs;
        if (one(seed, rs)) ++passes;
        sink.insert(sink.end(), rs.begin(), rs.end());
    }
    const std::size_t need = std::max<std::size_t>(1, (2 * opt.seeds.size() + 2) / 3);
    return passes >= need;
}

bool all_pass(const std::vector<TestReport>& rs) {
    return std::all_of(rs.begin(), rs.end(), [](const TestReport& r) { return r.pass; });
}

TestReport tolerance_report(const std::string& name, double value, double tol) {
    TestReport r;
    r.name = name;
    r.statistic = "max_rel_err";
    r.value = value;
    r.p_value = tol;
    r.pass = value <= tol;
    return r;
}

// ---- reference graphs -------------------------------------------------

std::pair<Network, BoundarySpec> one_edge(double conductance, double h0, double h1,
                                          bool partition = true) {
    Network net({"xh", "xc"}, {{0, 1, conductance}});
    BoundarySpec bc;
    bc.boundary = {0, 1};
    bc.values = {h0, h1};
    if (partition) {
        bc.hat = std::vector<int>{0};
        bc.check = std::vector<int>{1};
    }
    return {std::move(net), std::move(bc)};
}

std::pair<Network, BoundarySpec> series3(double h0, double h1) {
    Network net({"xh", "mid", "xc"}, {{0, 1, 1.0}, {1, 2, 0.5}});
    BoundarySpec bc;
    bc.boundary = {0, 2};
    bc.values = {h0, h1};
    bc.hat = std::vector<int>{0};
    bc.check = std::vector<int>{2};
    return {std::move(net), std::move(bc)};
}

/// Two parallel routes xh-w-u-xc (R = 1+1+2) and xh-v-xc (R = 4+8),
/// combined effective resistance 4*12/16 = 3.
std::pair<Network, BoundarySpec> two_route5(double h0, double h1) {
    Network net({"xh", "w", "u", "v", "xc"},
                {{0, 1, 1.0}, {1, 2, 1.0}, {2, 4, 0.5}, {0, 3, 0.25}, {3, 4, 0.125}});
    BoundarySpec bc;
    bc.boundary = {0, 4};
    bc.values = {h0, h1};
    bc.hat = std::vector<int>{0};
    bc.check = std::vector<int>{4};
    return {std::move(net), std::move(bc)};
}

std::pair<Network, BoundarySpec> star4() {
    Network net({"l1", "l2", "l3", "l4", "y"},
                {{0, 4, 1.0}, {1, 4, 1.0}, {2, 4, 1.0}, {3, 4, 1.0}});
    BoundarySpec bc;
    bc.boundary = {0, 1, 2, 3};
    bc.values = {0.3, 0.5, 0.2, 0.4};
    bc.hat = std::vector<int>{0, 1};
    bc.check = std::vector<int>{2, 3};
    return {std::move(net), std::move(bc)};
}

/// Four boundary points, three interior vertices, several cycles.
std::pair<Network, BoundarySpec> cyclic7(bool partition = false) {
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
    if (partition) {
        bc.hat = std::vector<int>{0, 1};
        bc.check = std::vector<int>{2, 3};
    }
    return {std::move(net), std::move(bc)};
}

/// Unit-conductance 5-vertex graph with one inner vertex q between the two
/// boundary points and a cross edge.
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

// ---- shared sampling helpers ------------------------------------------

std::vector<double> sample_delta_set(const Network& net, const BoundarySpec& bc,
                                     const std::vector<int>& S, const std::vector<int>& T,
                                     std::size_t n, std::uint64_t seed, unsigned threads) {
    const FieldSampler sampler(net, bc);
    std::vector<double> out(n);
    stats::RandomStream root(seed);
    stats::parallel_replicates(n, threads, [&](std::size_t rep) {
        stats::RandomStream s = root.substream(rep);
        FieldSample f = sampler.sample(s);
        AnnotatedSample a = annotate_local_times(net, std::move(f), s);
        out[rep] = delta_between(net, a.edge_local_times, S, T);
    });
    return out;
}

/// KS distance against a law with a single atom at `atom_at` and continuous
/// CDF below it (the law of T_a truncated at the full resistance).
double mixed_ks_distance(std::vector<double> samples, double atom_at,
                         const std::function<double(double)>& cont_cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    std::size_t below = 0;
    while (below < samples.size() && samples[below] < atom_at - 1e-9) ++below;
    double d = std::abs(cont_cdf(atom_at) - static_cast<double>(below) / n);
    for (std::size_t i = 0; i < below; ++i) {
        const double f = cont_cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    }
    return d;
}

}  // namespace

// ---- criterion 1: deterministic network identities --------------------

SuiteResult network_suite() {
    const auto t0 = Clock::now();
    std::vector<TestReport> reports;

    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-12); };

    auto [net7, bc7] = cyclic7();

    {
        // Eliminating one interior vertex must not move the kernel on the rest.
        std::vector<int> F = {0, 1, 2, 3, 5, 6};
        KernelMatrix before = effective_kernel(net7, F);
        Network reduced = star_mesh(net7, 4);
        std::vector<int> Fr;
        for (int v : F) Fr.push_back(reduced.index_of(net7.name(v)));
        KernelMatrix after = effective_kernel(reduced, Fr);
        double worst = 0.0;
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j)
                worst = std::max(worst, rel(after.entries(i, j), before.entries(i, j)));
        reports.push_back(tolerance_report("network/star_mesh_invariance", worst, 1e-9));
    }

    {
        // Full interior elimination must leave exactly the boundary kernel.
        KernelMatrix target = effective_kernel(net7, bc7.boundary);
        Network reduced = net7;
        for (const char* name : {"i1", "i2", "i3"})
            reduced = star_mesh(reduced, reduced.index_of(name));
        double worst = 0.0;
        for (int i = 0; i < 4; ++i) {
            const int ri = reduced.index_of(net7.name(bc7.boundary[i]));
            for (int j = i + 1; j < 4; ++j) {
                const int rj = reduced.index_of(net7.name(bc7.boundary[j]));
                double c = 0.0;
                for (const auto& [w, cw] : reduced.adjacency()[ri])
                    if (w == rj) c = cw;
                worst = std::max(worst, rel(c, target.entries(i, j)));
            }
        }
        reports.push_back(tolerance_report("network/full_elimination", worst, 1e-9));
    }

    {
        GreenMatrix g = green_matrix(net7, bc7);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.interior.size(); ++i) {
            const double r = 1.0 / grounded_conductance(net7, {g.interior[i]}, bc7.boundary);
            worst = std::max(worst, rel(g.entries(i, i), r));
        }
        reports.push_back(tolerance_report("network/green_diag_reff", worst, 1e-10));
    }

    {
        auto [star, bcs] = star4();
        std::map<int, double> erosions{{0, 0.2}, {1, 0.35}, {2, 0.15}, {3, 0.4}};
        double worst = 0.0;
        for (const auto& h : hadamard_check(star, bcs, erosions, 1e-4))
            worst = std::max(worst, h.rel_error);
        std::map<int, double> erosions7{{0, 0.1}, {3, 0.2}};
        for (const auto& h : hadamard_check(net7, bc7, erosions7, 5e-5))
            worst = std::max(worst, h.rel_error);
        reports.push_back(tolerance_report("network/hadamard_fd", worst, 1e-4));
    }

    const bool pass = all_pass(reports);
    return finish("network", std::move(reports), pass, t0);
}

// ---- criterion 2: one-edge local time law -----------------------------

SuiteResult eq1_suite(const SuiteOptions& opt) {
    const auto t0 = Clock::now();
    const unsigned threads = resolve_threads(opt);
    const std::size_t n = scaled(1e5, opt);
    std::vector<TestReport> reports;

    auto [net0, bc0] = one_edge(1.0, 0.0, 0.0);
    auto [net1, bc1] = one_edge(0.5, 1.0, 1.0);

    const bool pass = majority_over_seeds(opt, reports, [&](std::uint64_t seed,
                                                            std::vector<TestReport>& rs) {
        std::vector<double> d0 =
            sample_delta_set(net0, bc0, {0}, {1}, n, seed, threads);
        for (double& x : d0) x = x * x / 2.0;
        rs.push_back(stats::ks_one_sample("eq1/zero_boundary_exp", std::move(d0),
                                          [](double t) { return 1.0 - std::exp(-t); }, seed));

        std::vector<double> d1 =
            sample_delta_set(net1, bc1, {0}, {1}, n, seed, threads);
        const laws::BridgeSpec b{1.0, 1.0, 2.0};
        const double positive_mass = laws::local_time_survival(b, 0.0);  // e^{-1}
        rs.push_back(stats::ks_with_zero_atom(
            "eq1/unit_boundary_atom", d1, 1.0 - positive_mass,
            [&](double l) { return 1.0 - laws::local_time_survival(b, l) / positive_mass; },
            seed));
        return all_pass(rs);
    });
    return finish("eq1", std::move(reports), pass, t0);
}

// ---- criterion 3: two-point law across equal-resistance networks ------

SuiteResult two_point_suite(const SuiteOptions& opt) {
    const auto t0 = Clock::now();
    const unsigned threads = resolve_threads(opt);
    const std::size_t n = scaled(1e5, opt);
    std::vector<TestReport> reports;

    std::vector<std::pair<Network, BoundarySpec>> nets;
    nets.push_back(one_edge(1.0 / 3.0, 1.0, 0.8));
    nets.push_back(series3(1.0, 0.8));
    nets.push_back(two_route5(1.0, 0.8));
    const char* labels[] = {"edge", "series", "route5"};

    double worst = 0.0;
    for (auto& [net, bc] : nets) {
        const double r = two_point_resistance(net, bc.boundary[0], bc.boundary[1]);
        worst = std::max(worst, std::abs(r - 3.0));
    }
    reports.push_back(tolerance_report("two-point/reff_equal_3", worst, 1e-12));
    bool pass = reports.back().pass;

    const laws::BridgeSpec b{1.0, 0.8, 3.0};
    const double positive_mass = laws::local_time_survival(b, 0.0);

    pass = majority_over_seeds(opt, reports, [&](std::uint64_t seed,
                                                 std::vector<TestReport>& rs) {
        std::vector<std::vector<double>> d;
        for (auto& [net, bc] : nets)
            d.push_back(sample_delta_set(net, bc, *bc.hat, *bc.check, n, seed, threads));
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                rs.push_back(stats::ks_two_sample(
                    std::string("two-point/pair_") + labels[i] + "_" + labels[j], d[i], d[j],
                    seed));
        for (int i = 0; i < 3; ++i)
            rs.push_back(stats::ks_with_zero_atom(
                std::string("two-point/law_") + labels[i], d[i], 1.0 - positive_mass,
                [&](double l) { return 1.0 - laws::local_time_survival(b, l) / positive_mass; },
                seed));
        return all_pass(rs);
    }) && pass;
    return finish("two-point", std::move(reports), pass, t0);
}

// ---- criterion 4: star-mesh rewiring invariance -----------------------

SuiteResult rewire_suite(const SuiteOptions& opt) {
    const auto t0 = Clock::now();
    const unsigned threads = resolve_threads(opt);
    const std::size_t n = scaled(1e5, opt);
    std::vector<TestReport> reports;

    auto [star, bcs] = star4();
    Network reduced = star_mesh(star, 4);
    BoundarySpec bcr = bcs;
    for (std::size_t i = 0; i < bcr.boundary.size(); ++i)
        bcr.boundary[i] = reduced.index_of(star.name(bcs.boundary[i]));
    bcr.hat = std::vector<int>{reduced.index_of("l1"), reduced.index_of("l2")};
    bcr.check = std::vector<int>{reduced.index_of("l3"), reduced.index_of("l4")};

    laws::TwoSetLawSpec law{effective_kernel(star, bcs.boundary), bcs};
    const double s0 = laws::two_set_survival(law, 0.0);
    const std::vector<double> levels{0.2, 0.5, 1.0};

    const bool pass = majority_over_seeds(opt, reports, [&](std::uint64_t seed,
                                                            std::vector<TestReport>& rs) {
        std::vector<double> ds =
            sample_delta_set(star, bcs, *bcs.hat, *bcs.check, n, seed, threads);
        std::vector<double> dr =
            sample_delta_set(reduced, bcr, *bcr.hat, *bcr.check, n, seed + 101, threads);
        rs.push_back(stats::ks_two_sample("rewire/star_vs_mesh", ds, dr, seed));
        for (double l : levels) {
            std::vector<double> ind(ds.size());
            for (std::size_t i = 0; i < ds.size(); ++i) ind[i] = ds[i] > l ? 1.0 : 0.0;
            std::ostringstream name;
            name << "rewire/survival_l" << l;
            rs.push_back(stats::mean_z(name.str(), ind, laws::two_set_survival(law, l), 4.0,
                                       seed));
        }
        for (const auto* d : {&ds, &dr}) {
            std::vector<double> ind(d->size());
            for (std::size_t i = 0; i < d->size(); ++i) ind[i] = (*d)[i] > 0.0 ? 1.0 : 0.0;
            rs.push_back(stats::mean_z(d == &ds ? "rewire/pos_prob_star" : "rewire/pos_prob_mesh",
                                       ind, s0, 4.0, seed));
        }
        return all_pass(rs);
    });
    return finish("rewire", std::move(reports), pass, t0);
}

// ---- connectivity probability and sign clusters -----------------------

SuiteResult connect_suite(const SuiteOptions& opt) {
    const auto t0 = Clock::now();
    const unsigned threads = resolve_threads(opt);
    const std::size_t n = scaled(1e5, opt);
    std::vector<TestReport> reports;

    auto [net, bc] = cyclic7(true);
    laws::TwoSetLawSpec law{effective_kernel(net, bc.boundary), bc};
    const double s0 = laws::two_set_survival(law, 0.0);
    const FieldSampler sampler(net, bc);

    const bool pass = majority_over_seeds(opt, reports, [&](std::uint64_t seed,
                                                            std::vector<TestReport>& rs) {
        std::vector<double> positive(n);
        std::vector<double> mismatch(n);
        stats::RandomStream root(seed);
        stats::parallel_replicates(n, threads, [&](std::size_t rep) {
            stats::RandomStream s = root.substream(rep);
            FieldSample f = sampler.sample(s);
            AnnotatedSample a = annotate_local_times(net, std::move(f), s);
            const double d = delta_between(net, a.edge_local_times, *bc.hat, *bc.check);
            positive[rep] = d > 0.0 ? 1.0 : 0.0;
            std::vector<int> comp = sign_clusters(net, a.edge_local_times);
            bool touching = false;
            for (int u : *bc.hat)
                for (int v : *bc.check)
                    if (comp[u] == comp[v]) touching = true;
            mismatch[rep] = (touching == (d == 0.0)) ? 0.0 : 1.0;
        });
        rs.push_back(stats::mean_z("connect/pos_prob", positive, s0, 4.0, seed));
        TestReport exact;
        exact.name = "connect/cluster_consistency";
        exact.statistic = "exact";
        exact.value = std::accumulate(mismatch.begin(), mismatch.end(), 0.0);
        exact.pass = exact.value == 0.0;
        exact.n1 = n;
        exact.seed = seed;
        rs.push_back(exact);
        return all_pass(rs);
    });
    return finish("connect", std::move(reports), pass, t0);
}

// ---- criterion 5: star vs triangle joint disconnection exponents ------

SuiteResult star_joint_suite(const SuiteOptions& opt) {
    const auto t0 = Clock::now();
    const unsigned threads = resolve_threads(opt);
    const std::size_t n = scaled(1e6, opt);
    const std::vector<double> levels{0.4, 0.2, 0.1, 0.05};
    std::vector<TestReport> reports;
    std::ostringstream csv;
    csv << "seed,a,p_star,se_star,p_tri,se_tri\n";

    const bool pass = majority_over_seeds(opt, reports, [&](std::uint64_t seed,
                                                            std::vector<TestReport>& rs) {
        std::vector<double> log_a, log_star, log_tri;
        stats::RandomStream root(seed);
        for (std::size_t ai = 0; ai < levels.size(); ++ai) {
            const double a = levels[ai];
            // Unit 3-star: both pseudo-distances vanish iff every leg carries
            // zero local time. Conditioning on the centre value keeps the
            // relative error flat across levels.
            std::vector<double> vals(n);
            stats::parallel_replicates(n, threads, [&](std::size_t rep) {
                stats::RandomStream s = root.substream(n * (2 * ai) + rep);
                const double w = a + std::sqrt(1.0 / 3.0) * s.normal();
                vals[rep] = w > 0.0 ? std::pow(1.0 - std::exp(-2.0 * a * w), 3.0) : 0.0;
            });
            double p_star = std::accumulate(vals.begin(), vals.end(), 0.0) / n;
            double var = 0.0;
            for (double v : vals) var += (v - p_star) * (v - p_star);
            const double se_star = std::sqrt(var / (n - 1.0) / n);

            // Y-Delta triangle (edge resistance 3): joint disconnection needs
            // at least two of the three independent zero-local-time edges.
            const double p0 = 1.0 - std::exp(-2.0 * a * a / 3.0);
            stats::parallel_replicates(n, threads, [&](std::size_t rep) {
                stats::RandomStream s = root.substream(n * (2 * ai + 1) + rep);
                const bool z12 = s.uniform() < p0;
                vals[rep] = z12 ? (2.0 * p0 - p0 * p0) : p0 * p0;
            });
            double p_tri = std::accumulate(vals.begin(), vals.end(), 0.0) / n;
            var = 0.0;
            for (double v : vals) var += (v - p_tri) * (v - p_tri);
            const double se_tri = std::sqrt(var / (n - 1.0) / n);

            csv << seed << ',' << a << ',' << p_star << ',' << se_star << ',' << p_tri << ','
                << se_tri << '\n';
            log_a.push_back(std::log(a));
            log_star.push_back(std::log(p_star));
            log_tri.push_back(std::log(p_tri));
        }
        const double slope_star = stats::slope_fit(log_a, log_star).slope;
        const double slope_tri = stats::slope_fit(log_a, log_tri).slope;

        auto slope_report = [&](const std::string& name, double slope, double target) {
            TestReport r;
            r.name = name;
            r.statistic = "slope";
            r.value = slope;
            r.p_value = target;
            r.pass = std::abs(slope - target) <= 0.6;
            r.n1 = n;
            r.seed = seed;
            return r;
        };
        rs.push_back(slope_report("star-joint/star_exponent", slope_star, 3.0));
        rs.push_back(slope_report("star-joint/triangle_exponent", slope_tri, 4.0));
        TestReport gap;
        gap.name = "star-joint/exponent_gap";
        gap.statistic = "slope";
        gap.value = slope_tri - slope_star;
        gap.pass = gap.value >= 0.5;
        gap.n1 = n;
        gap.seed = seed;
        rs.push_back(gap);
        return all_pass(rs);
    });
    return finish("star-joint", std::move(reports), pass, t0, csv.str());
}

// ---- criterion 6: pathwise reflection identity ------------------------

SuiteResult levy_suite(const SuiteOptions& opt) {
    const auto t0 = Clock::now();
    const unsigned threads = resolve_threads(opt);
    const std::size_t n = scaled(1e5, opt);
    std::vector<TestReport> reports;

    auto [net, bc] = cyclic7();
    const FieldSampler sampler(net, bc);
    const std::vector<int> inner = bc.interior(net);

    const bool pass = majority_over_seeds(opt, reports, [&](std::uint64_t seed,
                                                            std::vector<TestReport>& rs) {
        LevySamples ls = levy_pair_samples(net, bc, n, seed, threads);
        std::vector<std::vector<double>> fresh(net.vertex_count(), std::vector<double>(n));
        stats::RandomStream root(seed);
        stats::parallel_replicates(n, threads, [&](std::size_t rep) {
            stats::RandomStream s = root.substream(2 * n + rep);
            FieldSample f = sampler.sample(s);
            for (int v = 0; v < net.vertex_count(); ++v) fresh[v][rep] = f.values[v];
        });
        for (int v : inner) {
            const std::string tag = "levy/" + net.name(v);
            rs.push_back(stats::ks_two_sample(tag + "_abs_phi", ls.abs_phi[v],
                                              ls.phi_minus_i[v], seed));
            rs.push_back(stats::ks_two_sample(tag + "_delta", ls.delta[v], ls.neg_i[v], seed));
            std::vector<double> diff(n);
            for (std::size_t i = 0; i < n; ++i) diff[i] = ls.abs_phi[v][i] - ls.delta[v][i];
            rs.push_back(stats::ks_two_sample(tag + "_reflected", diff, fresh[v], seed));
        }
        return all_pass(rs);
    });
    return finish("levy", std::move(reports), pass, t0);
}

// ---- criterion 7: Laplace transform of the set-to-check conductance ---

SuiteResult fps_laplace_suite(const SuiteOptions& opt) {
    const auto t0 = Clock::now();
    const unsigned threads = resolve_threads(opt);
    const std::size_t n = scaled(1e5, opt);
    const double a = -1.0;
    const std::vector<double> u_grid{0.25, 1.0, 4.0};
    const std::vector<int> refinements{32, 64};
    std::vector<TestReport> reports;
    std::ostringstream csv;
    csv << "seed,net,refinement,u,lower,lower_se,upper,upper_se,closed_form\n";

    std::vector<std::pair<Network, BoundarySpec>> nets;
    nets.push_back(one_edge(1.0, 0.0, 0.0));
    nets.push_back(wheat5(0.0, 0.0, true));
    const char* labels[] = {"edge", "wheat5"};

    const bool pass = majority_over_seeds(opt, reports, [&](std::uint64_t seed,
                                                            std::vector<TestReport>& rs) {
        for (std::size_t g = 0; g < nets.size(); ++g) {
            for (int refinement : refinements) {
                auto ests = fps_laplace_estimate(nets[g].first, nets[g].second, a, u_grid,
                                                 refinement, n, seed + 313 * g, threads);
                for (const auto& e : ests) {
                    csv << seed << ',' << labels[g] << ',' << refinement << ',' << e.u << ','
                        << e.lower << ',' << e.lower_se << ',' << e.upper << ',' << e.upper_se
                        << ',' << e.closed_form << '\n';
                    const bool lower_is_min = e.lower <= e.upper;
                    const double lo = lower_is_min ? e.lower : e.upper;
                    const double lo_se = lower_is_min ? e.lower_se : e.upper_se;
                    const double hi = lower_is_min ? e.upper : e.lower;
                    const double hi_se = lower_is_min ? e.upper_se : e.lower_se;
                    TestReport r;
                    std::ostringstream name;
                    name << "fps-laplace/" << labels[g] << "_n" << refinement << "_u" << e.u;
                    r.name = name.str();
                    r.statistic = "bracket";
                    r.value = std::min(e.closed_form - (lo - 4.0 * lo_se),
                                       (hi + 4.0 * hi_se) - e.closed_form);
                    r.pass = r.value >= 0.0;
                    r.n1 = n;
                    r.seed = seed;
                    std::ostringstream det;
                    det << "closed=" << e.closed_form << " bracket=[" << lo << ',' << hi << ']';
                    r.detail = det.str();
                    rs.push_back(r);
                }
            }
        }
        return all_pass(rs);
    });
    return finish("fps-laplace", std::move(reports), pass, t0, csv.str());
}

// ---- criterion 8: resistance drop vs truncated hitting time -----------

SuiteResult cor34_suite(const SuiteOptions& opt) {
    const auto t0 = Clock::now();
    const unsigned threads = resolve_threads(opt);
    const std::size_t n = scaled(5e3, opt);
    const double a = -0.4;
    std::vector<TestReport> reports;

    auto [net, bc] = wheat5(1.0, 0.8, false);
    const int x0 = net.index_of("q");
    const double m = harmonic_extension(net, bc)[x0];
    const double r_full = 1.0 / grounded_conductance(net, {x0}, bc.boundary);
    auto cont_cdf = [&](double t) { return laws::bm_hitting_cdf(m, a, t); };

    const bool pass = majority_over_seeds(opt, reports, [&](std::uint64_t seed,
                                                            std::vector<TestReport>& rs) {
        std::map<int, std::vector<double>> drops;
        std::vector<double> phis;
        for (int refinement : {8, 32, 64}) {
            RefinedNetwork rn = refine(net, bc, refinement);
            const FieldSampler sampler(rn.net, rn.bc);
            std::vector<double> d(n), p(n);
            stats::RandomStream root(seed + refinement);
            stats::parallel_replicates(n, threads, [&](std::size_t rep) {
                stats::RandomStream s = root.substream(rep);
                NestedFpsSample sample = nested_fps_once(rn, sampler, {a}, x0, s);
                d[rep] = sample.drops_upper[0];
                p[rep] = sample.phi_x0;
            });
            drops[refinement] = std::move(d);
            if (refinement == 64) phis = std::move(p);
        }
        const double d8 = mixed_ks_distance(drops[8], r_full, cont_cdf);
        const double d32 = mixed_ks_distance(drops[32], r_full, cont_cdf);

        TestReport conv;
        conv.name = "cor34/bracket_convergence";
        conv.statistic = "ks_dist";
        conv.value = d32 - d8;
        conv.pass = d32 <= d8;
        conv.n1 = n;
        conv.seed = seed;
        std::ostringstream det;
        det << "d8=" << d8 << " d32=" << d32;
        conv.detail = det.str();
        rs.push_back(conv);

        const double atom_mass = 1.0 - cont_cdf(r_full);
        std::vector<double> shifted;  // positive on the continuous part, 0 on the atom
        for (double v : drops[64]) shifted.push_back(v >= r_full - 1e-9 ? 0.0 : r_full - v);
        const double f_below = cont_cdf(r_full);
        rs.push_back(stats::ks_with_zero_atom(
            "cor34/drop_law_n64", shifted, atom_mass,
            [&](double s) { return 1.0 - cont_cdf(r_full - s) / f_below; }, seed));

        rs.push_back(stats::ks_one_sample(
            "cor34/phi_marginal", phis,
            [&](double x) { return stats::normal_cdf((x - m) / std::sqrt(r_full)); }, seed));
        return all_pass(rs);
    });
    return finish("cor34", std::move(reports), pass, t0);
}

// ---- criterion 9: lattice probe ---------------------------------------

SuiteResult lattice_suite(const SuiteOptions& opt, int rows, int cols, bool periodic_rows) {
    const auto t0 = Clock::now();
    const unsigned threads = resolve_threads(opt);
    const std::size_t n = scaled(1e4, opt);
    std::vector<TestReport> reports;

    auto [net, bc] = rectangle_grid(rows, cols, 0.0, periodic_rows);
    const double r_eff = 1.0 / grounded_conductance(net, *bc.hat, *bc.check);
    const double extremal = static_cast<double>(cols - 1) / rows;
    const FieldSampler sampler(net, bc);

    TestReport diag;
    diag.name = "lattice/reff_vs_extremal_distance";
    diag.statistic = "diagnostic";
    diag.value = r_eff;
    diag.pass = true;
    {
        std::ostringstream det;
        det << "reff=" << r_eff << " extremal_distance=" << extremal;
        diag.detail = det.str();
    }
    reports.push_back(diag);

    const bool pass = majority_over_seeds(opt, reports, [&](std::uint64_t seed,
                                                            std::vector<TestReport>& rs) {
        std::vector<double> vals(n);
        stats::RandomStream root(seed);
        stats::parallel_replicates(n, threads, [&](std::size_t rep) {
            stats::RandomStream s = root.substream(rep);
            FieldSample f = sampler.sample(s);
            AnnotatedSample a = annotate_local_times(net, std::move(f), s);
            const double d = delta_between(net, a.edge_local_times, *bc.hat, *bc.check);
            vals[rep] = d * d / (2.0 * r_eff);
        });
        rs.push_back(stats::ks_one_sample("lattice/delta_sq_exp", std::move(vals),
                                          [](double t) { return 1.0 - std::exp(-t); }, seed));
        return all_pass(rs);
    });
    return finish("lattice", std::move(reports), pass, t0);
}

// ---- criterion 10: exhaustive small-graph path oracles ----------------

namespace {

struct SmallGraph {
    int k;
    std::vector<std::tuple<int, int, double>> edges;
};

std::vector<SmallGraph> connected_unit_graphs(int max_k) {
    std::vector<SmallGraph> out;
    for (int k = 2; k <= max_k; ++k) {
        std::vector<std::pair<int, int>> pairs;
        for (int u = 0; u < k; ++u)
            for (int v = u + 1; v < k; ++v) pairs.emplace_back(u, v);
        const int m = static_cast<int>(pairs.size());
        for (unsigned mask = 1; mask < (1u << m); ++mask) {
            std::vector<int> parent(k);
            std::iota(parent.begin(), parent.end(), 0);
            std::function<int(int)> find = [&](int x) {
                while (parent[x] != x) x = parent[x] = parent[parent[x]];
                return x;
            };
            SmallGraph g{k, {}};
            for (int e = 0; e < m; ++e)
                if (mask & (1u << e)) {
                    g.edges.emplace_back(pairs[e].first, pairs[e].second, 1.0);
                    parent[find(pairs[e].first)] = find(pairs[e].second);
                }
            bool connected = true;
            for (int v = 1; v < k; ++v)
                if (find(v) != find(0)) connected = false;
            if (connected) out.push_back(std::move(g));
        }
    }
    return out;
}

}  // namespace

SuiteResult oracle_suite(const SuiteOptions& opt) {
    const auto t0 = Clock::now();
    const unsigned threads = resolve_threads(opt);
    const std::size_t n = scaled(1e3, opt);
    const std::uint64_t seed = opt.seeds.empty() ? 7 : opt.seeds.front();
    std::vector<TestReport> reports;

    const std::vector<SmallGraph> graphs = connected_unit_graphs(5);
    std::vector<long> mismatches(graphs.size(), 0);
    stats::RandomStream root(seed);

    stats::parallel_replicates(graphs.size(), threads, [&](std::size_t gi) {
        std::vector<std::string> names;
        for (int v = 0; v < graphs[gi].k; ++v) names.push_back("v" + std::to_string(v));
        Network net(std::move(names), graphs[gi].edges);
        BoundarySpec bc;
        bc.boundary = {0};
        bc.values = {0.25};
        const FieldSampler sampler(net, bc);
        const int k = net.vertex_count();
        stats::RandomStream s = root.substream(gi);
        long bad = 0;
        for (std::size_t rep = 0; rep < n; ++rep) {
            FieldSample f = sampler.sample(s);
            AnnotatedSample lt = annotate_local_times(net, FieldSample(f), s);
            AnnotatedSample mn = annotate_minima(net, std::move(f), s);

            std::vector<double> d = delta_from(net, lt.edge_local_times, {0});
            std::vector<double> itld =
                infimum_itilde(net, mn.edge_minima, {0}, {bc.values[0]});

            const double inf = std::numeric_limits<double>::infinity();
            std::vector<double> best_sum(k, inf);
            std::vector<double> best_min(k, -inf);
            std::vector<char> visited(k, 0);
            // Exhaustive simple-path enumeration with the same left-to-right
            // accumulation order as the heap searches.
            std::function<void(int, double, double)> dfs = [&](int v, double sum, double mn_v) {
                best_sum[v] = std::min(best_sum[v], sum);
                best_min[v] = std::max(best_min[v], mn_v);
                visited[v] = 1;
                for (const auto& [w, ei] : net.edge_adjacency()[v]) {
                    if (visited[w]) continue;
                    dfs(w, sum + lt.edge_local_times[ei],
                        std::min(mn_v, mn.edge_minima[ei]));
                }
                visited[v] = 0;
            };
            dfs(0, 0.0, bc.values[0]);
            for (int v = 0; v < k; ++v) {
                if (d[v] != best_sum[v]) ++bad;
                if (itld[v] != best_min[v]) ++bad;
            }
        }
        mismatches[gi] = bad;
    });

    TestReport r;
    r.name = "oracle/path_enumeration";
    r.statistic = "exact";
    r.value = static_cast<double>(std::accumulate(mismatches.begin(), mismatches.end(), 0L));
    r.pass = r.value == 0.0;
    r.n1 = graphs.size() * n;
    r.seed = seed;
    {
        std::ostringstream det;
        det << graphs.size() << " graphs, " << n << " samples each";
        r.detail = det.str();
    }
    const bool pass = r.pass;
    reports.push_back(r);
    return finish("oracle", std::move(reports), pass, t0);
}

// ---- registry ---------------------------------------------------------

std::vector<std::string> suite_names() {
    return {"eq1",  "two-point",   "rewire", "connect", "star-joint",
            "levy", "fps-laplace", "cor34",  "lattice"};
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opt) {
    if (name == "network") return network_suite();
    if (name == "eq1") return eq1_suite(opt);
    if (name == "two-point") return two_point_suite(opt);
    if (name == "rewire") return rewire_suite(opt);
    if (name == "connect") return connect_suite(opt);
    if (name == "star-joint") return star_joint_suite(opt);
    if (name == "levy") return levy_suite(opt);
    if (name == "fps-laplace") return fps_laplace_suite(opt);
    if (name == "cor34") return cor34_suite(opt);
    if (name == "lattice") return lattice_suite(opt);
    if (name == "oracle") return oracle_suite(opt);
    throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace gffm::experiments
