#include "gffm/fps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gffm {

namespace {

const std::vector<int>& growth_sources(const BoundarySpec& bc) {
    return bc.has_partition() ? *bc.hat : bc.boundary;
}

void require_level_below_sources(const RefinedNetwork& rn, double a) {
    for (int v : growth_sources(rn.bc))
        if (a >= rn.bc.value_at(v))
            throw std::invalid_argument("fps: level must lie below h on the growth boundary");
}

}  // namespace

FirstPassageSet grow_fps(const RefinedNetwork& rn, const std::vector<double>& phi,
                         const std::vector<double>& edge_minima, double a) {
    require_level_below_sources(rn, a);
    if (edge_minima.size() != rn.net.edges().size())
        throw std::invalid_argument("grow_fps: missing minima annotation");
    (void)phi;
    const auto& adj = rn.net.edge_adjacency();
    FirstPassageSet out;
    out.level = a;
    out.lower.assign(rn.net.vertex_count(), 0);
    out.upper.assign(rn.net.vertex_count(), 0);
    std::vector<int> stack;
    for (int v : growth_sources(rn.bc)) {
        out.lower[v] = 1;
        stack.push_back(v);
    }
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const auto& [w, ei] : adj[v]) {
            if (out.lower[w] || edge_minima[ei] < a) continue;
            out.lower[w] = 1;
            stack.push_back(w);
        }
    }
    out.upper = out.lower;
    for (int v = 0; v < rn.net.vertex_count(); ++v) {
        if (!out.lower[v]) continue;
        for (const auto& [w, ei] : adj[v]) {
            (void)ei;
            if (out.upper[w]) continue;
            out.upper[w] = 1;
            out.frontier.push_back(w);
        }
    }
    return out;
}

namespace {

double set_check_conductance(const RefinedNetwork& rn, const std::vector<char>& member) {
    if (!rn.bc.has_partition())
        throw std::invalid_argument("fps: check block required for set observables");
    std::vector<int> S;
    for (int v = 0; v < rn.net.vertex_count(); ++v)
        if (member[v]) S.push_back(v);
    return grounded_conductance(rn.net, S, *rn.bc.check);
}

}  // namespace

FpsObservables fps_observables(const RefinedNetwork& rn, const FirstPassageSet& fps) {
    FpsObservables obs;
    obs.c_lower = set_check_conductance(rn, fps.lower);
    obs.c_upper = set_check_conductance(rn, fps.upper);
    obs.r_lower = std::isinf(obs.c_lower) ? 0.0 : 1.0 / obs.c_lower;
    obs.r_upper = std::isinf(obs.c_upper) ? 0.0 : 1.0 / obs.c_upper;
    return obs;
}

double resistance_drop(const RefinedNetwork& rn, const FirstPassageSet& fps, int x0,
                       bool upper_bracket) {
    const std::vector<char>& member = upper_bracket ? fps.upper : fps.lower;
    const double r_full = 1.0 / grounded_conductance(rn.net, {x0}, rn.bc.boundary);
    if (member[x0]) return r_full;
    std::vector<int> S;
    for (int v = 0; v < rn.net.vertex_count(); ++v)
        if (member[v]) S.push_back(v);
    return r_full - 1.0 / grounded_conductance(rn.net, {x0}, S);
}

std::vector<LaplaceEstimate> fps_laplace_estimate(const Network& net, const BoundarySpec& bc,
                                                  double a, const std::vector<double>& u_grid,
                                                  int refinement, std::size_t replicates,
                                                  std::uint64_t seed, unsigned threads) {
    if (!bc.has_partition())
        throw std::invalid_argument("fps_laplace_estimate: partition required");
    const double h_check = bc.value_at((*bc.check)[0]);
    for (int v : *bc.check)
        if (bc.value_at(v) != h_check)
            throw std::invalid_argument("fps_laplace_estimate: h must be constant on the check block");

    const KernelMatrix kernel = effective_kernel(net, bc.boundary);
    const double c_hat_check = cross_conductance(kernel, bc);
    const double m = boundary_mean(kernel, bc);

    const RefinedNetwork rn = refine(net, bc, refinement);
    const FieldSampler sampler(rn.net, rn.bc);

    const std::size_t nu = u_grid.size();
    std::vector<std::vector<double>> lower_vals(nu, std::vector<double>(replicates));
    std::vector<std::vector<double>> upper_vals(nu, std::vector<double>(replicates));

    stats::RandomStream root(seed);
    stats::parallel_replicates(replicates, threads, [&](std::size_t rep) {
        stats::RandomStream s = root.substream(rep);
        FieldSample f = sampler.sample(s);
        AnnotatedSample ann = annotate_minima(rn.net, std::move(f), s);
        FirstPassageSet fps = grow_fps(rn, ann.field.values, ann.edge_minima, a);
        FpsObservables obs = fps_observables(rn, fps);
        for (std::size_t k = 0; k < nu; ++k) {
            lower_vals[k][rep] = std::isinf(obs.c_lower) ? 0.0 : std::exp(-u_grid[k] * obs.c_lower);
            upper_vals[k][rep] = std::isinf(obs.c_upper) ? 0.0 : std::exp(-u_grid[k] * obs.c_upper);
        }
    });

    std::vector<LaplaceEstimate> out(nu);
    for (std::size_t k = 0; k < nu; ++k) {
        auto mean_se = [&](const std::vector<double>& v) {
            double mean = 0.0;
            for (double x : v) mean += x;
            mean /= static_cast<double>(v.size());
            double var = 0.0;
            for (double x : v) var += (x - mean) * (x - mean);
            var /= static_cast<double>(v.size() - 1);
            return std::make_pair(mean, std::sqrt(var / static_cast<double>(v.size())));
        };
        out[k].u = u_grid[k];
        std::tie(out[k].lower, out[k].lower_se) = mean_se(lower_vals[k]);
        std::tie(out[k].upper, out[k].upper_se) = mean_se(upper_vals[k]);
        out[k].closed_form = laws::fps_laplace(c_hat_check, m, h_check, a, u_grid[k]);
    }
    return out;
}

NestedFpsSample nested_fps_once(const RefinedNetwork& rn, const FieldSampler& sampler,
                                const std::vector<double>& levels, int x0,
                                stats::RandomStream& stream) {
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i] >= levels[i - 1])
            throw std::invalid_argument("nested_fps: level schedule must be strictly decreasing");

    NestedFpsSample out;
    FieldSample f = sampler.sample(stream);
    out.phi_x0 = f.values[x0];
    AnnotatedSample ann = annotate_minima(rn.net, std::move(f), stream);
    for (double a : levels) {
        FirstPassageSet fps = grow_fps(rn, ann.field.values, ann.edge_minima, a);
        out.drops_lower.push_back(resistance_drop(rn, fps, x0, false));
        out.drops_upper.push_back(resistance_drop(rn, fps, x0, true));
    }
    std::vector<double> source_values;
    for (int v : rn.bc.boundary) source_values.push_back(rn.bc.value_at(v));
    std::vector<double> itld =
        infimum_itilde(rn.net, ann.edge_minima, rn.bc.boundary, source_values);
    double min_h = *std::min_element(source_values.begin(), source_values.end());
    out.terminal_maximin = std::min(itld[x0], min_h);
    return out;
}

MetricBallSample metric_ball_once(const RefinedNetwork& rn, const FieldSampler& sampler,
                                  const std::vector<double>& radii, int x0,
                                  stats::RandomStream& stream) {
    for (double h : rn.bc.values)
        if (h < 0.0) throw std::invalid_argument("metric_ball: boundary condition must be nonnegative");
    MetricBallSample out;
    FieldSample f = sampler.sample(stream);
    out.phi_x0 = f.values[x0];
    AnnotatedSample ann = annotate_local_times(rn.net, std::move(f), stream);
    std::vector<double> d = delta_from(rn.net, ann.edge_local_times, rn.bc.boundary);
    out.delta_x0 = d[x0];
    const double r_full = 1.0 / grounded_conductance(rn.net, {x0}, rn.bc.boundary);
    for (double radius : radii) {
        if (radius < 0.0) throw std::invalid_argument("metric_ball: negative radius");
        if (d[x0] <= radius) {
            out.drops.push_back(r_full);
            continue;
        }
        std::vector<int> ball;
        for (int v = 0; v < rn.net.vertex_count(); ++v)
            if (d[v] <= radius) ball.push_back(v);
        out.drops.push_back(r_full - 1.0 / grounded_conductance(rn.net, {x0}, ball));
    }
    return out;
}

}  // namespace gffm
