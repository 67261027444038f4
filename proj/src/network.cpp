#include "gffm/network.hpp"

#include <json.hpp>

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gffm {

namespace {

constexpr int kDenseLimit = 2048;

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

Eigen::MatrixXd dense_laplacian(const Network& net) {
    const int n = net.vertex_count();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : net.edges()) {
        L(e.u, e.u) += e.conductance;
        L(e.v, e.v) += e.conductance;
        L(e.u, e.v) -= e.conductance;
        L(e.v, e.u) -= e.conductance;
    }
    return L;
}

}  // namespace

Network::Network(std::vector<std::string> names,
                 std::vector<std::tuple<int, int, double>> edges)
    : names_(std::move(names)) {
    const int n = vertex_count();
    if (n == 0) throw std::invalid_argument("network: no vertices");
    for (int i = 0; i < n; ++i) {
        if (!index_.emplace(names_[i], i).second)
            throw std::invalid_argument("network: duplicate vertex id '" + names_[i] + "'");
    }
    edges_.reserve(edges.size());
    DisjointSet ds(n);
    for (const auto& [u, v, c] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw std::invalid_argument("network: edge endpoint out of range");
        if (u == v) throw std::invalid_argument("network: self-loop at '" + names_[u] + "'");
        if (!(c > 0.0) || !std::isfinite(c))
            throw std::invalid_argument("network: nonpositive conductance");
        edges_.push_back(Edge{u, v, c});
        ds.unite(u, v);
    }
    for (int i = 1; i < n; ++i)
        if (ds.find(i) != ds.find(0)) throw std::invalid_argument("network: disconnected");
}

int Network::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::invalid_argument("network: unknown vertex '" + name + "'");
    return it->second;
}

Eigen::SparseMatrix<double> Network::laplacian() const {
    const int n = vertex_count();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(edges_.size() * 4);
    for (const Edge& e : edges_) {
        trips.emplace_back(e.u, e.u, e.conductance);
        trips.emplace_back(e.v, e.v, e.conductance);
        trips.emplace_back(e.u, e.v, -e.conductance);
        trips.emplace_back(e.v, e.u, -e.conductance);
    }
    Eigen::SparseMatrix<double> L(n, n);
    L.setFromTriplets(trips.begin(), trips.end());
    return L;
}

const std::vector<std::vector<std::pair<int, double>>>& Network::adjacency() const {
    if (adjacency_.empty()) {
        std::vector<std::map<int, double>> acc(vertex_count());
        for (const Edge& e : edges_) {
            acc[e.u][e.v] += e.conductance;
            acc[e.v][e.u] += e.conductance;
        }
        adjacency_.resize(vertex_count());
        for (int v = 0; v < vertex_count(); ++v)
            adjacency_[v].assign(acc[v].begin(), acc[v].end());
    }
    return adjacency_;
}

const std::vector<std::vector<std::pair<int, int>>>& Network::edge_adjacency() const {
    if (edge_adjacency_.empty()) {
        edge_adjacency_.resize(vertex_count());
        for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
            edge_adjacency_[edges_[i].u].emplace_back(edges_[i].v, i);
            edge_adjacency_[edges_[i].v].emplace_back(edges_[i].u, i);
        }
    }
    return edge_adjacency_;
}

bool BoundarySpec::is_boundary(int v) const {
    return std::find(boundary.begin(), boundary.end(), v) != boundary.end();
}

double BoundarySpec::value_at(int v) const {
    for (std::size_t i = 0; i < boundary.size(); ++i)
        if (boundary[i] == v) return values[i];
    throw std::invalid_argument("boundary: vertex not in A");
}

std::vector<int> BoundarySpec::interior(const Network& net) const {
    std::vector<char> in_a(net.vertex_count(), 0);
    for (int v : boundary) in_a[v] = 1;
    std::vector<int> out;
    for (int v = 0; v < net.vertex_count(); ++v)
        if (!in_a[v]) out.push_back(v);
    return out;
}

void BoundarySpec::validate(const Network& net) const {
    if (boundary.empty()) throw std::invalid_argument("boundary: empty boundary set");
    if (boundary.size() != values.size())
        throw std::invalid_argument("boundary: values misaligned");
    std::set<int> seen;
    for (int v : boundary) {
        if (v < 0 || v >= net.vertex_count())
            throw std::invalid_argument("boundary: vertex out of range");
        if (!seen.insert(v).second) throw std::invalid_argument("boundary: duplicate vertex");
    }
    if (hat.has_value() != check.has_value())
        throw std::invalid_argument("boundary: incomplete partition");
    if (has_partition()) {
        if (hat->empty() || check->empty())
            throw std::invalid_argument("boundary: empty partition block");
        std::set<int> all(hat->begin(), hat->end());
        for (int v : *check)
            if (!all.insert(v).second)
                throw std::invalid_argument("boundary: partition blocks overlap");
        if (all != seen) throw std::invalid_argument("boundary: partition does not cover A");
    }
}

void BoundarySpec::require_sign_constancy() const {
    if (!has_partition()) throw std::invalid_argument("boundary: partition required");
    auto check_block = [this](const std::vector<int>& block, const char* which) {
        int sign = 0;
        for (int v : block) {
            const double h = value_at(v);
            if (h == 0.0) continue;
            const int s = h > 0.0 ? 1 : -1;
            if (sign == 0)
                sign = s;
            else if (sign != s)
                throw std::invalid_argument(std::string("boundary: sign of h not constant on ") + which);
        }
    };
    check_block(*hat, "hat block");
    check_block(*check, "check block");
}

std::pair<Network, BoundarySpec> load_network(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("graph document: parse error: ") + e.what());
    }
    if (!doc.contains("vertices") || !doc.contains("edges") || !doc.contains("boundary"))
        throw std::invalid_argument("graph document: missing vertices/edges/boundary");

    std::vector<std::string> names = doc.at("vertices").get<std::vector<std::string>>();
    std::map<std::string, int> index;
    for (int i = 0; i < static_cast<int>(names.size()); ++i) index[names[i]] = i;
    auto lookup = [&](const std::string& s) {
        auto it = index.find(s);
        if (it == index.end())
            throw std::invalid_argument("graph document: unknown vertex '" + s + "'");
        return it->second;
    };

    std::vector<std::tuple<int, int, double>> edges;
    for (const auto& e : doc.at("edges")) {
        edges.emplace_back(lookup(e.at("u").get<std::string>()),
                           lookup(e.at("v").get<std::string>()),
                           e.at("conductance").get<double>());
    }
    Network net(names, std::move(edges));

    BoundarySpec bc;
    // Boundary in document vertex order for reproducibility.
    std::map<int, double> bvals;
    for (const auto& [k, v] : doc.at("boundary").items()) bvals[lookup(k)] = v.get<double>();
    for (const auto& [v, h] : bvals) {
        bc.boundary.push_back(v);
        bc.values.push_back(h);
    }
    if (doc.contains("partition")) {
        const auto& p = doc.at("partition");
        std::vector<int> hat, check;
        for (const auto& s : p.at("hat")) hat.push_back(lookup(s.get<std::string>()));
        for (const auto& s : p.at("check")) check.push_back(lookup(s.get<std::string>()));
        bc.hat = std::move(hat);
        bc.check = std::move(check);
    }
    bc.validate(net);
    return {std::move(net), std::move(bc)};
}

std::pair<Network, BoundarySpec> load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("graph document: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_network(buf.str());
}

KernelMatrix effective_kernel(const Network& net, const std::vector<int>& F) {
    if (F.size() < 2) throw std::invalid_argument("effective_kernel: |F| must be >= 2");
    const int n = net.vertex_count();
    std::vector<int> pos(n, -1);
    for (int i = 0; i < static_cast<int>(F.size()); ++i) {
        if (F[i] < 0 || F[i] >= n) throw std::invalid_argument("effective_kernel: F out of range");
        if (pos[F[i]] != -1) throw std::invalid_argument("effective_kernel: duplicate in F");
        pos[F[i]] = i;
    }
    std::vector<int> inner;
    for (int v = 0; v < n; ++v)
        if (pos[v] == -1) inner.push_back(v);

    const int nf = static_cast<int>(F.size());
    const int ni = static_cast<int>(inner.size());
    Eigen::MatrixXd S;
    if (ni == 0) {
        S = Eigen::MatrixXd::Zero(nf, nf);
        for (const Edge& e : net.edges()) {
            const int i = pos[e.u], j = pos[e.v];
            S(i, i) += e.conductance;
            S(j, j) += e.conductance;
            S(i, j) -= e.conductance;
            S(j, i) -= e.conductance;
        }
    } else if (n <= kDenseLimit) {
        Eigen::MatrixXd L = dense_laplacian(net);
        Eigen::MatrixXd Lff(nf, nf), Lfi(nf, ni), Lii(ni, ni);
        for (int a = 0; a < nf; ++a) {
            for (int b = 0; b < nf; ++b) Lff(a, b) = L(F[a], F[b]);
            for (int b = 0; b < ni; ++b) Lfi(a, b) = L(F[a], inner[b]);
        }
        for (int a = 0; a < ni; ++a)
            for (int b = 0; b < ni; ++b) Lii(a, b) = L(inner[a], inner[b]);
        Eigen::LDLT<Eigen::MatrixXd> solver(Lii);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("effective_kernel: singular interior block");
        S = Lff - Lfi * solver.solve(Lfi.transpose());
    } else {
        std::vector<int> inner_pos(n, -1);
        for (int a = 0; a < ni; ++a) inner_pos[inner[a]] = a;
        std::vector<Eigen::Triplet<double>> trips;
        Eigen::MatrixXd Lff = Eigen::MatrixXd::Zero(nf, nf);
        Eigen::MatrixXd Lif = Eigen::MatrixXd::Zero(ni, nf);
        for (const Edge& e : net.edges()) {
            const int pu = pos[e.u], pv = pos[e.v];
            const int iu = inner_pos[e.u], iv = inner_pos[e.v];
            if (pu >= 0) Lff(pu, pu) += e.conductance;
            if (pv >= 0) Lff(pv, pv) += e.conductance;
            if (iu >= 0) trips.emplace_back(iu, iu, e.conductance);
            if (iv >= 0) trips.emplace_back(iv, iv, e.conductance);
            if (pu >= 0 && pv >= 0) {
                Lff(pu, pv) -= e.conductance;
                Lff(pv, pu) -= e.conductance;
            } else if (iu >= 0 && iv >= 0) {
                trips.emplace_back(iu, iv, -e.conductance);
                trips.emplace_back(iv, iu, -e.conductance);
            } else if (pu >= 0) {
                Lif(iv, pu) -= e.conductance;
            } else {
                Lif(iu, pv) -= e.conductance;
            }
        }
        Eigen::SparseMatrix<double> Lii(ni, ni);
        Lii.setFromTriplets(trips.begin(), trips.end());
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(Lii);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("effective_kernel: singular interior block");
        S = Lff - Lif.transpose() * solver.solve(Lif);
    }

    KernelMatrix k;
    k.points = F;
    for (int v : F) k.labels.push_back(net.name(v));
    k.entries = Eigen::MatrixXd::Zero(nf, nf);
    for (int i = 0; i < nf; ++i)
        for (int j = 0; j < nf; ++j)
            if (i != j) k.entries(i, j) = -0.5 * (S(i, j) + S(j, i));
    return k;
}

double two_point_resistance(const Network& net, int x, int y) {
    if (x == y) throw std::invalid_argument("two_point_resistance: x == y");
    return 1.0 / grounded_conductance(net, {x}, {y});
}

double grounded_conductance(const Network& net, const std::vector<int>& S,
                            const std::vector<int>& T) {
    if (S.empty() || T.empty())
        throw std::invalid_argument("grounded_conductance: empty terminal set");
    const int n = net.vertex_count();
    // role: 0 interior, 1 in S (potential 0), 2 in T (potential 1)
    std::vector<char> role(n, 0);
    for (int v : S) role[v] = 1;
    for (int v : T) {
        if (role[v] == 1) return std::numeric_limits<double>::infinity();
        role[v] = 2;
    }
    std::vector<int> inner_pos(n, -1);
    int ni = 0;
    for (int v = 0; v < n; ++v)
        if (role[v] == 0) inner_pos[v] = ni++;

    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni);
    for (const Edge& e : net.edges()) {
        const int ru = role[e.u], rv = role[e.v];
        const int iu = inner_pos[e.u], iv = inner_pos[e.v];
        if (ru == 0) trips.emplace_back(iu, iu, e.conductance);
        if (rv == 0) trips.emplace_back(iv, iv, e.conductance);
        if (ru == 0 && rv == 0) {
            trips.emplace_back(iu, iv, -e.conductance);
            trips.emplace_back(iv, iu, -e.conductance);
        } else if (ru == 0 && rv == 2) {
            rhs(iu) += e.conductance;
        } else if (rv == 0 && ru == 2) {
            rhs(iv) += e.conductance;
        }
    }
    Eigen::VectorXd u;
    if (ni > 0) {
        Eigen::SparseMatrix<double> Lii(ni, ni);
        Lii.setFromTriplets(trips.begin(), trips.end());
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(Lii);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("grounded_conductance: singular interior block");
        u = solver.solve(rhs);
    }
    auto potential = [&](int v) {
        if (role[v] == 1) return 0.0;
        if (role[v] == 2) return 1.0;
        return u(inner_pos[v]);
    };
    double energy = 0.0;
    for (const Edge& e : net.edges()) {
        const double d = potential(e.u) - potential(e.v);
        energy += e.conductance * d * d;
    }
    return energy;
}

Network star_mesh(const Network& net, int v) {
    if (v < 0 || v >= net.vertex_count()) throw std::invalid_argument("star_mesh: bad vertex");
    std::map<int, double> star;  // merged conductances of v's incident edges
    for (const Edge& e : net.edges()) {
        if (e.u == v) star[e.v] += e.conductance;
        if (e.v == v) star[e.u] += e.conductance;
    }
    double total = 0.0;
    for (const auto& [w, c] : star) total += c;

    std::vector<std::string> names;
    std::vector<int> remap(net.vertex_count(), -1);
    for (int w = 0; w < net.vertex_count(); ++w) {
        if (w == v) continue;
        remap[w] = static_cast<int>(names.size());
        names.push_back(net.name(w));
    }
    std::vector<std::tuple<int, int, double>> edges;
    std::map<std::pair<int, int>, std::size_t> first_parallel;
    for (const Edge& e : net.edges()) {
        if (e.u == v || e.v == v) continue;
        const int a = remap[e.u], b = remap[e.v];
        edges.emplace_back(a, b, e.conductance);
        auto key = std::minmax(a, b);
        first_parallel.emplace(std::make_pair(key.first, key.second), edges.size() - 1);
    }
    for (auto it = star.begin(); it != star.end(); ++it) {
        for (auto jt = std::next(it); jt != star.end(); ++jt) {
            const double c = it->second * jt->second / total;
            const int a = remap[it->first], b = remap[jt->first];
            auto key = std::minmax(a, b);
            auto fp = first_parallel.find(std::make_pair(key.first, key.second));
            if (fp != first_parallel.end()) {
                std::get<2>(edges[fp->second]) += c;
            } else {
                edges.emplace_back(a, b, c);
                first_parallel.emplace(std::make_pair(key.first, key.second), edges.size() - 1);
            }
        }
    }
    return Network(std::move(names), std::move(edges));
}

std::vector<double> harmonic_extension(const Network& net, const BoundarySpec& bc) {
    const int n = net.vertex_count();
    std::vector<double> out(n, 0.0);
    std::vector<char> in_a(n, 0);
    for (std::size_t i = 0; i < bc.boundary.size(); ++i) {
        in_a[bc.boundary[i]] = 1;
        out[bc.boundary[i]] = bc.values[i];
    }
    std::vector<int> inner_pos(n, -1);
    int ni = 0;
    for (int v = 0; v < n; ++v)
        if (!in_a[v]) inner_pos[v] = ni++;
    if (ni == 0) return out;

    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni);
    for (const Edge& e : net.edges()) {
        const int iu = inner_pos[e.u], iv = inner_pos[e.v];
        if (iu >= 0) trips.emplace_back(iu, iu, e.conductance);
        if (iv >= 0) trips.emplace_back(iv, iv, e.conductance);
        if (iu >= 0 && iv >= 0) {
            trips.emplace_back(iu, iv, -e.conductance);
            trips.emplace_back(iv, iu, -e.conductance);
        } else if (iu >= 0) {
            rhs(iu) += e.conductance * out[e.v];
        } else if (iv >= 0) {
            rhs(iv) += e.conductance * out[e.u];
        }
    }
    Eigen::SparseMatrix<double> Lii(ni, ni);
    Lii.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(Lii);
    Eigen::VectorXd u = solver.solve(rhs);
    for (int v = 0; v < n; ++v)
        if (inner_pos[v] >= 0) out[v] = u(inner_pos[v]);
    return out;
}

GreenMatrix green_matrix(const Network& net, const BoundarySpec& bc) {
    std::vector<int> inner = bc.interior(net);
    if (inner.empty()) throw std::invalid_argument("green_matrix: no interior vertices");
    const int ni = static_cast<int>(inner.size());
    std::vector<int> inner_pos(net.vertex_count(), -1);
    for (int a = 0; a < ni; ++a) inner_pos[inner[a]] = a;
    Eigen::MatrixXd Lii = Eigen::MatrixXd::Zero(ni, ni);
    for (const Edge& e : net.edges()) {
        const int iu = inner_pos[e.u], iv = inner_pos[e.v];
        if (iu >= 0) Lii(iu, iu) += e.conductance;
        if (iv >= 0) Lii(iv, iv) += e.conductance;
        if (iu >= 0 && iv >= 0) {
            Lii(iu, iv) -= e.conductance;
            Lii(iv, iu) -= e.conductance;
        }
    }
    GreenMatrix g;
    g.interior = std::move(inner);
    Eigen::LDLT<Eigen::MatrixXd> solver(Lii);
    g.entries = solver.solve(Eigen::MatrixXd::Identity(ni, ni));
    g.entries = 0.5 * (g.entries + g.entries.transpose().eval());
    return g;
}

namespace {

/// Boundary-adjacent edges in A-endpoint order; edges inside A are ignored.
std::vector<int> boundary_adjacent_edges(const Network& net, const BoundarySpec& bc) {
    std::vector<char> in_a(net.vertex_count(), 0);
    for (int v : bc.boundary) in_a[v] = 1;
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(net.edges().size()); ++i) {
        const Edge& e = net.edges()[i];
        if (in_a[e.u] != in_a[e.v]) idx.push_back(i);
    }
    return idx;
}

Network erased_network(const Network& net, const BoundarySpec& bc,
                       const std::map<int, double>& erosions,
                       std::vector<std::string>* z_labels) {
    std::vector<char> in_a(net.vertex_count(), 0);
    for (int v : bc.boundary) in_a[v] = 1;
    const std::vector<int> bedges = boundary_adjacent_edges(net, bc);
    std::set<int> bset(bedges.begin(), bedges.end());
    for (const auto& [ei, r] : erosions) {
        if (!bset.count(ei))
            throw std::invalid_argument("eroded_kernel: erosion on a non-boundary-adjacent edge");
        if (r < 0.0 || r >= net.edges()[ei].resistance())
            throw std::invalid_argument("eroded_kernel: erosion outside [0, R(e))");
    }

    std::vector<std::string> names;
    std::vector<int> remap(net.vertex_count(), -1);
    for (int v = 0; v < net.vertex_count(); ++v) {
        if (in_a[v]) continue;
        remap[v] = static_cast<int>(names.size());
        names.push_back(net.name(v));
    }
    std::vector<std::tuple<int, int, double>> edges;
    for (int i = 0; i < static_cast<int>(net.edges().size()); ++i) {
        const Edge& e = net.edges()[i];
        if (in_a[e.u] || in_a[e.v]) continue;
        edges.emplace_back(remap[e.u], remap[e.v], e.conductance);
    }
    for (int ei : bedges) {
        const Edge& e = net.edges()[ei];
        const int x = in_a[e.u] ? e.u : e.v;  // A-side endpoint
        const int y = in_a[e.u] ? e.v : e.u;
        double r = 0.0;
        if (auto it = erosions.find(ei); it != erosions.end()) r = it->second;
        const int z = static_cast<int>(names.size());
        std::string label = net.name(x) + "#" + std::to_string(ei);
        names.push_back(label);
        if (z_labels) z_labels->push_back(label);
        edges.emplace_back(z, remap[y], 1.0 / (e.resistance() - r));
    }
    return Network(std::move(names), std::move(edges));
}

}  // namespace

KernelMatrix eroded_kernel(const Network& net, const BoundarySpec& bc,
                           const std::map<int, double>& erosions) {
    std::vector<std::string> z_labels;
    Network erased = erased_network(net, bc, erosions, &z_labels);
    std::vector<int> B;
    for (const auto& lbl : z_labels) B.push_back(erased.index_of(lbl));
    return effective_kernel(erased, B);
}

std::vector<HadamardResidual> hadamard_check(const Network& net, const BoundarySpec& bc,
                                             const std::map<int, double>& erosions,
                                             double step) {
    const std::vector<int> bedges = boundary_adjacent_edges(net, bc);
    const int nb = static_cast<int>(bedges.size());
    std::vector<HadamardResidual> out;
    if (nb < 2) return out;

    std::map<int, double> base = erosions;
    for (int ei : bedges) base.emplace(ei, 0.0);

    KernelMatrix center = eroded_kernel(net, bc, base);
    for (int i = 0; i < nb; ++i) {
        const int ei = bedges[i];
        const double r = base.at(ei);
        const double rmax = net.edges()[ei].resistance();
        double h = step;
        if (r - h <= 0.0 || r + h >= rmax) {
            // shrink toward the feasible open interval
            h = 0.25 * std::min(r > 0.0 ? r : rmax, rmax - r);
            if (h <= 0.0) throw std::invalid_argument("hadamard_check: step underflow");
        }
        std::map<int, double> up = base, down = base;
        up[ei] = r + h;
        down[ei] = r - h;
        if (down[ei] <= 0.0) continue;  // derivative identities hold on the open interval
        KernelMatrix kup = eroded_kernel(net, bc, up);
        KernelMatrix kdown = eroded_kernel(net, bc, down);

        for (int j = 0; j < nb; ++j) {
            if (j == i) continue;
            const double fd = (kup.entries(i, j) - kdown.entries(i, j)) / (2.0 * h);
            double rhs = 0.0;
            for (int jp = 0; jp < nb; ++jp)
                if (jp != i) rhs += center.entries(i, jp);
            rhs *= center.entries(i, j);
            const double scale = std::max(std::abs(rhs), 1e-12);
            out.push_back(HadamardResidual{i, j, -1, fd, rhs, std::abs(fd - rhs) / scale});
        }
        for (int j = 0; j < nb; ++j) {
            for (int jp = j + 1; jp < nb; ++jp) {
                if (j == i || jp == i) continue;
                const double fd = (kup.entries(j, jp) - kdown.entries(j, jp)) / (2.0 * h);
                const double rhs = -center.entries(i, j) * center.entries(i, jp);
                const double scale = std::max(std::abs(rhs), 1e-12);
                out.push_back(HadamardResidual{i, j, jp, fd, rhs, std::abs(fd - rhs) / scale});
            }
        }
    }
    return out;
}

double cross_conductance(const KernelMatrix& kernel, const BoundarySpec& bc) {
    if (!bc.has_partition()) throw std::invalid_argument("cross_conductance: partition required");
    std::vector<int> pos(kernel.points.size());
    std::map<int, int> where;
    for (int i = 0; i < static_cast<int>(kernel.points.size()); ++i)
        where[kernel.points[i]] = i;
    double total = 0.0;
    for (int xh : *bc.hat)
        for (int xc : *bc.check) total += kernel.entries(where.at(xh), where.at(xc));
    return total;
}

double boundary_mean(const KernelMatrix& kernel, const BoundarySpec& bc) {
    if (!bc.has_partition()) throw std::invalid_argument("boundary_mean: partition required");
    std::map<int, int> where;
    for (int i = 0; i < static_cast<int>(kernel.points.size()); ++i)
        where[kernel.points[i]] = i;
    double total = 0.0, weighted = 0.0;
    for (int xh : *bc.hat) {
        const double h = bc.value_at(xh);
        for (int xc : *bc.check) {
            const double c = kernel.entries(where.at(xh), where.at(xc));
            total += c;
            weighted += c * h;
        }
    }
    if (total <= 0.0) throw std::runtime_error("boundary_mean: blocks not connected through the kernel");
    return weighted / total;
}

double boundary_mean(const Network& net, const BoundarySpec& bc) {
    return boundary_mean(effective_kernel(net, bc.boundary), bc);
}

std::string kernel_to_csv(const KernelMatrix& k) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < k.labels.size(); ++i)
        os << (i ? "," : "") << k.labels[i];
    os << "\n";
    for (int i = 0; i < k.entries.rows(); ++i) {
        for (int j = 0; j < k.entries.cols(); ++j) os << (j ? "," : "") << k.entries(i, j);
        os << "\n";
    }
    return os.str();
}

}  // namespace gffm
