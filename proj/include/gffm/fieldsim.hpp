#pragma once

#include "gffm/network.hpp"
#include "gffm/stats.hpp"

#include <Eigen/SparseCholesky>

#include <memory>

namespace gffm {

struct FieldSample {
    std::vector<double> values;  // per vertex, equals h on A exactly
    std::uint64_t seed = 0;
    std::uint64_t replicate = 0;
};

/// Exact Gaussian sampler for the field at vertices. Factorizes the
/// interior precision block once; each draw is a triangular solve of
/// i.i.d. inverse-CDF normals.
class FieldSampler {
public:
    FieldSampler(const Network& net, const BoundarySpec& bc);

    FieldSample sample(stats::RandomStream& stream) const;

    const std::vector<double>& mean() const { return mean_; }
    const std::vector<int>& interior() const { return interior_; }

private:
    std::vector<double> mean_;  // harmonic extension
    std::vector<int> interior_;
    std::vector<int> interior_pos_;
    std::unique_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> llt_;
};

FieldSample sample_field(const Network& net, const BoundarySpec& bc,
                         stats::RandomStream& stream);

/// Metric-graph refinement: every edge e subdivided into n_e sub-edges of
/// resistance R(e)/n_e. Base vertices keep their indices; boundary unchanged.
struct RefinedNetwork {
    Network net;
    BoundarySpec bc;
    std::vector<int> base_vertex;   // refined vertex -> base index, -1 if new
    std::vector<int> parent_edge;   // refined vertex -> base edge, -1 for base vertices
    std::vector<double> arc_pos;    // resistance distance from the edge's u endpoint
    std::vector<int> edge_parent;   // refined edge -> base edge index
};

RefinedNetwork refine(const Network& net, const BoundarySpec& bc, int n);
RefinedNetwork refine(const Network& net, const BoundarySpec& bc,
                      const std::vector<int>& per_edge);

/// Log of the Gaussian density of field values w at points B, up to an
/// additive constant, expressed through the kernel on A union B.
double log_density(const Network& net, const BoundarySpec& bc,
                   const std::vector<int>& B, const std::vector<double>& w);

}  // namespace gffm
