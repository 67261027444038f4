#pragma once

#include "gffm/metric.hpp"

namespace gffm {

/// First-passage set on a refined graph. Growth runs through sub-edges
/// whose sampled bridge minimum stays >= a, so `lower` is exactly the
/// vertex set of the continuum first-passage set; the set also owns a
/// partial piece of each frontier sub-edge, so grounding on `lower`
/// under-counts its conductance and grounding on `upper` (frontier
/// endpoints absorbed) over-counts it.
struct FirstPassageSet {
    double level = 0.0;
    std::vector<char> lower;   // per refined vertex
    std::vector<char> upper;   // lower plus frontier
    std::vector<int> frontier;
};

/// Grows the first-passage set from the hat block (or the whole boundary
/// when no partition is present) through sub-edges with minimum >= a.
FirstPassageSet grow_fps(const RefinedNetwork& rn, const std::vector<double>& phi,
                         const std::vector<double>& edge_minima, double a);

struct FpsObservables {
    double c_lower = 0.0;  // +inf when the set touches the check block
    double c_upper = 0.0;
    double r_lower = 0.0;
    double r_upper = 0.0;
};

/// Effective conductance/resistance between each bracket set and the check
/// block, by grounding the set into one terminal.
FpsObservables fps_observables(const RefinedNetwork& rn, const FirstPassageSet& fps);

/// R^eff(x0, A) - R^eff(x0, set) for the chosen bracket.
double resistance_drop(const RefinedNetwork& rn, const FirstPassageSet& fps, int x0,
                       bool upper_bracket);

struct LaplaceEstimate {
    double u = 0.0;
    double lower = 0.0;       // empirical mean of exp(-u C) for the lower bracket
    double lower_se = 0.0;
    double upper = 0.0;
    double upper_se = 0.0;
    double closed_form = 0.0;
};

std::vector<LaplaceEstimate> fps_laplace_estimate(const Network& net, const BoundarySpec& bc,
                                                  double a, const std::vector<double>& u_grid,
                                                  int refinement, std::size_t replicates,
                                                  std::uint64_t seed, unsigned threads = 1);

struct NestedFpsSample {
    double phi_x0 = 0.0;
    std::vector<double> drops_lower;  // per level, nondecreasing
    std::vector<double> drops_upper;
    double terminal_maximin = 0.0;    // sup over paths of min field, capped by min_A h
};

/// One refined field sample explored along a decreasing level schedule.
NestedFpsSample nested_fps_once(const RefinedNetwork& rn, const FieldSampler& sampler,
                                const std::vector<double>& levels, int x0,
                                stats::RandomStream& stream);

struct MetricBallSample {
    double phi_x0 = 0.0;
    double delta_x0 = 0.0;
    std::vector<double> drops;  // per radius, nondecreasing
};

/// Pseudo-metric balls B(A, l) on a refined sample with per-sub-edge local
/// times; resistance drops at x0 per radius.
MetricBallSample metric_ball_once(const RefinedNetwork& rn, const FieldSampler& sampler,
                                  const std::vector<double>& radii, int x0,
                                  stats::RandomStream& stream);

}  // namespace gffm
