#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace gffm {

struct Edge {
    int u;
    int v;
    double conductance;
    double resistance() const { return 1.0 / conductance; }
};

/// Weighted undirected multigraph with positive conductances. Connected,
/// no self-loops; multi-edges are kept for sampling and merged for
/// Laplacian assembly.
class Network {
public:
    Network(std::vector<std::string> names,
            std::vector<std::tuple<int, int, double>> edges);

    int vertex_count() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(int v) const { return names_[v]; }
    int index_of(const std::string& name) const;  // throws on unknown vertex
    const std::vector<Edge>& edges() const { return edges_; }

    /// Weighted graph Laplacian with parallel edges merged.
    Eigen::SparseMatrix<double> laplacian() const;

    /// adjacency()[v] lists (neighbor, merged conductance).
    const std::vector<std::vector<std::pair<int, double>>>& adjacency() const;

    /// edge_adjacency()[v] lists (neighbor, edge index), one entry per edge.
    const std::vector<std::vector<std::pair<int, int>>>& edge_adjacency() const;

private:
    std::vector<std::string> names_;
    std::vector<Edge> edges_;
    std::map<std::string, int> index_;
    mutable std::vector<std::vector<std::pair<int, double>>> adjacency_;
    mutable std::vector<std::vector<std::pair<int, int>>> edge_adjacency_;
};

struct BoundarySpec {
    std::vector<int> boundary;   // vertex indices of A, in document order
    std::vector<double> values;  // h, aligned with boundary
    std::optional<std::vector<int>> hat;    // partition block containing hat vertices
    std::optional<std::vector<int>> check;  // partition block containing check vertices

    bool has_partition() const { return hat.has_value() && check.has_value(); }
    bool is_boundary(int v) const;
    double value_at(int v) const;  // throws if v not in A
    std::vector<int> interior(const Network& net) const;

    void validate(const Network& net) const;
    /// Two-set laws need h of constant sign on each partition block.
    void require_sign_constancy() const;
};

/// Effective conductance matrix on an ordered point set F: zero diagonal,
/// symmetric nonnegative off-diagonal.
struct KernelMatrix {
    std::vector<int> points;
    std::vector<std::string> labels;
    Eigen::MatrixXd entries;

    double entry(int i, int j) const { return entries(i, j); }
};

struct GreenMatrix {
    std::vector<int> interior;
    Eigen::MatrixXd entries;
};

/// Parses the graph-description JSON document.
std::pair<Network, BoundarySpec> load_network(const std::string& json_text);
std::pair<Network, BoundarySpec> load_network_file(const std::string& path);

/// Schur complement of the Laplacian onto F, reported as conductances.
KernelMatrix effective_kernel(const Network& net, const std::vector<int>& F);

/// R^eff(x,y) = 1 / C^eff_{x,y}(x,y).
double two_point_resistance(const Network& net, int x, int y);

/// Effective conductance between two disjoint vertex sets (S grounded at 0,
/// T held at 1). Returns +inf when the sets intersect.
double grounded_conductance(const Network& net, const std::vector<int>& S,
                            const std::vector<int>& T);

/// Eliminates interior vertex v by the star-mesh transform.
Network star_mesh(const Network& net, int v);

/// Harmonic extension of boundary data to every vertex.
std::vector<double> harmonic_extension(const Network& net, const BoundarySpec& bc);

/// Inverse of the interior block of the Laplacian (Dirichlet Green function).
GreenMatrix green_matrix(const Network& net, const BoundarySpec& bc);

/// Erodes boundary-adjacent edges from their A-side by the given amounts
/// (edge index -> r in [0, R(e))) and returns C^eff on the erosion points.
/// Unlisted boundary-adjacent edges are eroded by 0.
KernelMatrix eroded_kernel(const Network& net, const BoundarySpec& bc,
                           const std::map<int, double>& erosions);

struct HadamardResidual {
    int i;          // differentiated erosion coordinate
    int j;          // first kernel index
    int jprime;     // second kernel index, or -1 for the d/dr_i C_ij identity
    double fd;      // central finite difference
    double rhs;     // closed-form right-hand side
    double rel_error;
};

/// Central finite differences of eroded_kernel entries in each r_i compared
/// against the closed-form derivative identities of the kernel.
std::vector<HadamardResidual> hadamard_check(const Network& net, const BoundarySpec& bc,
                                             const std::map<int, double>& erosions,
                                             double step);

/// Kernel-weighted boundary mean m over the (hat, check) partition.
double boundary_mean(const Network& net, const BoundarySpec& bc);
double boundary_mean(const KernelMatrix& kernel, const BoundarySpec& bc);

/// C^eff(hat, check): sum of cross-pair kernel entries.
double cross_conductance(const KernelMatrix& kernel, const BoundarySpec& bc);

std::string kernel_to_csv(const KernelMatrix& k);

}  // namespace gffm
