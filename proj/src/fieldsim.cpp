#include "gffm/fieldsim.hpp"

#include <stdexcept>

namespace gffm {

FieldSampler::FieldSampler(const Network& net, const BoundarySpec& bc)
    : mean_(harmonic_extension(net, bc)), interior_(bc.interior(net)),
      interior_pos_(net.vertex_count(), -1) {
    const int ni = static_cast<int>(interior_.size());
    for (int a = 0; a < ni; ++a) interior_pos_[interior_[a]] = a;
    if (ni == 0) return;

    std::vector<Eigen::Triplet<double>> trips;
    for (const Edge& e : net.edges()) {
        const int iu = interior_pos_[e.u], iv = interior_pos_[e.v];
        if (iu >= 0) trips.emplace_back(iu, iu, e.conductance);
        if (iv >= 0) trips.emplace_back(iv, iv, e.conductance);
        if (iu >= 0 && iv >= 0) {
            trips.emplace_back(iu, iv, -e.conductance);
            trips.emplace_back(iv, iu, -e.conductance);
        }
    }
    Eigen::SparseMatrix<double> prec(ni, ni);
    prec.setFromTriplets(trips.begin(), trips.end());
    llt_ = std::make_unique<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>(prec);
    if (llt_->info() != Eigen::Success)
        throw std::runtime_error("field sampler: interior precision factorization failed");
}

FieldSample FieldSampler::sample(stats::RandomStream& stream) const {
    FieldSample out;
    out.values = mean_;
    out.seed = stream.seed();
    out.replicate = stream.replicate();
    const int ni = static_cast<int>(interior_.size());
    if (ni == 0) return out;
    Eigen::VectorXd z(ni);
    for (int i = 0; i < ni; ++i) z(i) = stream.normal();
    // Covariance of x is the inverse of the interior precision block:
    // with P*Q*P^T = L L^T, x = P^T L^{-T} z.
    Eigen::VectorXd y = llt_->matrixU().solve(z);
    Eigen::VectorXd x = llt_->permutationPinv() * y;
    for (int i = 0; i < ni; ++i) out.values[interior_[i]] += x(i);
    return out;
}

FieldSample sample_field(const Network& net, const BoundarySpec& bc,
                         stats::RandomStream& stream) {
    return FieldSampler(net, bc).sample(stream);
}

RefinedNetwork refine(const Network& net, const BoundarySpec& bc, int n) {
    if (n < 1) throw std::invalid_argument("refine: subdivision count must be >= 1");
    return refine(net, bc, std::vector<int>(net.edges().size(), n));
}

RefinedNetwork refine(const Network& net, const BoundarySpec& bc,
                      const std::vector<int>& per_edge) {
    if (per_edge.size() != net.edges().size())
        throw std::invalid_argument("refine: per-edge count size mismatch");
    for (int c : per_edge)
        if (c < 1) throw std::invalid_argument("refine: subdivision count must be >= 1");

    std::vector<std::string> names = net.names();
    std::vector<int> base_vertex(net.vertex_count());
    std::vector<int> parent_vertex_edge(net.vertex_count(), -1);
    std::vector<double> arc_pos(net.vertex_count(), 0.0);
    for (int v = 0; v < net.vertex_count(); ++v) base_vertex[v] = v;

    std::vector<std::tuple<int, int, double>> edges;
    std::vector<int> edge_parent;
    for (int ei = 0; ei < static_cast<int>(net.edges().size()); ++ei) {
        const Edge& e = net.edges()[ei];
        const int k = per_edge[ei];
        const double sub_c = e.conductance * k;  // resistance R(e)/k per sub-edge
        int prev = e.u;
        for (int s = 1; s < k; ++s) {
            const int nv = static_cast<int>(names.size());
            names.push_back("e" + std::to_string(ei) + "#" + std::to_string(s));
            base_vertex.push_back(-1);
            parent_vertex_edge.push_back(ei);
            arc_pos.push_back(e.resistance() * s / k);
            edges.emplace_back(prev, nv, sub_c);
            edge_parent.push_back(ei);
            prev = nv;
        }
        edges.emplace_back(prev, e.v, sub_c);
        edge_parent.push_back(ei);
    }

    RefinedNetwork out{Network(std::move(names), std::move(edges)), bc,
                       std::move(base_vertex), std::move(parent_vertex_edge),
                       std::move(arc_pos), std::move(edge_parent)};
    return out;
}

double log_density(const Network& net, const BoundarySpec& bc,
                   const std::vector<int>& B, const std::vector<double>& w) {
    if (B.size() != w.size()) throw std::invalid_argument("log_density: B/w size mismatch");
    for (int z : B)
        if (bc.is_boundary(z)) throw std::invalid_argument("log_density: B intersects A");

    std::vector<int> F = bc.boundary;
    F.insert(F.end(), B.begin(), B.end());
    KernelMatrix k = effective_kernel(net, F);
    const int na = static_cast<int>(bc.boundary.size());
    const int nb = static_cast<int>(B.size());
    double q = 0.0;
    for (int i = 0; i < na; ++i) {
        const double h = bc.values[i];
        for (int j = 0; j < nb; ++j) {
            const double d = w[j] - h;
            q += k.entries(i, na + j) * d * d;
        }
    }
    for (int j = 0; j < nb; ++j) {
        for (int jp = j + 1; jp < nb; ++jp) {
            const double d = w[j] - w[jp];
            q += k.entries(na + j, na + jp) * d * d;
        }
    }
    return -0.5 * q;
}

}  // namespace gffm
