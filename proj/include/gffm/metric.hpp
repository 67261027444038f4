#pragma once

#include "gffm/fieldsim.hpp"
#include "gffm/laws.hpp"

namespace gffm {

struct AnnotatedSample {
    FieldSample field;
    std::vector<double> edge_local_times;  // per edge index, empty if absent
    std::vector<double> edge_minima;       // per edge index, empty if absent
};

/// Conditionally on the vertex values, each edge carries an independent
/// bridge; draws its local time at zero exactly (atoms included).
AnnotatedSample annotate_local_times(const Network& net, FieldSample field,
                                     stats::RandomStream& stream);

/// Per-edge exact bridge-minimum draws.
AnnotatedSample annotate_minima(const Network& net, FieldSample field,
                                stats::RandomStream& stream);

/// Accumulated local time distance from the source set to every vertex
/// (multi-source shortest path over edge local times).
std::vector<double> delta_from(const Network& net, const std::vector<double>& local_times,
                               const std::vector<int>& sources);

/// delta between two vertex sets.
double delta_between(const Network& net, const std::vector<double>& local_times,
                     const std::vector<int>& S, const std::vector<int>& T);

/// Bottleneck field value: best achievable minimum of the field over paths
/// from each vertex to A, using sampled in-edge minima as capacities.
/// boundary_seed[v] is the field value at source v.
std::vector<double> infimum_itilde(const Network& net, const std::vector<double>& edge_minima,
                                   const std::vector<int>& sources,
                                   const std::vector<double>& source_values);

/// Connected components of the zero-local-time relation; returns a
/// component id per vertex.
std::vector<int> sign_clusters(const Network& net, const std::vector<double>& local_times);

/// Per-vertex empirical collections for the two sides of the pathwise
/// reflection identity: (|phi|, delta_to_A) vs (phi - I, -I), drawn from
/// independent replicate sets.
struct LevySamples {
    // indexed [vertex][replicate]
    std::vector<std::vector<double>> abs_phi;
    std::vector<std::vector<double>> delta;
    std::vector<std::vector<double>> phi_minus_i;
    std::vector<std::vector<double>> neg_i;
};

LevySamples levy_pair_samples(const Network& net, const BoundarySpec& bc,
                              std::size_t replicates, std::uint64_t seed,
                              unsigned threads = 1);

}  // namespace gffm
