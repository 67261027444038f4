#include "gffm/metric.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace gffm {

AnnotatedSample annotate_local_times(const Network& net, FieldSample field,
                                     stats::RandomStream& stream) {
    AnnotatedSample out;
    out.edge_local_times.reserve(net.edges().size());
    for (const Edge& e : net.edges()) {
        laws::BridgeSpec b{field.values[e.u], field.values[e.v], e.resistance()};
        out.edge_local_times.push_back(laws::sample_local_time(b, stream.uniform()));
    }
    out.field = std::move(field);
    return out;
}

AnnotatedSample annotate_minima(const Network& net, FieldSample field,
                                stats::RandomStream& stream) {
    AnnotatedSample out;
    out.edge_minima.reserve(net.edges().size());
    for (const Edge& e : net.edges()) {
        laws::BridgeSpec b{field.values[e.u], field.values[e.v], e.resistance()};
        out.edge_minima.push_back(laws::sample_bridge_min(b, stream.uniform()));
    }
    out.field = std::move(field);
    return out;
}

std::vector<double> delta_from(const Network& net, const std::vector<double>& local_times,
                               const std::vector<int>& sources) {
    if (local_times.size() != net.edges().size())
        throw std::invalid_argument("delta_from: missing local-time annotation");
    const auto& adj = net.edge_adjacency();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(net.vertex_count(), inf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    for (int s : sources) {
        dist[s] = 0.0;
        heap.emplace(0.0, s);
    }
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        for (const auto& [w, ei] : adj[v]) {
            const double nd = d + local_times[ei];
            if (nd < dist[w]) {
                dist[w] = nd;
                heap.emplace(nd, w);
            }
        }
    }
    return dist;
}

double delta_between(const Network& net, const std::vector<double>& local_times,
                     const std::vector<int>& S, const std::vector<int>& T) {
    const std::vector<double> d = delta_from(net, local_times, S);
    double best = std::numeric_limits<double>::infinity();
    for (int t : T) best = std::min(best, d[t]);
    return best;
}

std::vector<double> infimum_itilde(const Network& net, const std::vector<double>& edge_minima,
                                   const std::vector<int>& sources,
                                   const std::vector<double>& source_values) {
    if (edge_minima.size() != net.edges().size())
        throw std::invalid_argument("infimum_itilde: missing minima annotation");
    const auto& adj = net.edge_adjacency();
    const double ninf = -std::numeric_limits<double>::infinity();
    std::vector<double> best(net.vertex_count(), ninf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item> heap;  // max-heap on the bottleneck value
    for (std::size_t i = 0; i < sources.size(); ++i) {
        best[sources[i]] = source_values[i];
        heap.emplace(source_values[i], sources[i]);
    }
    while (!heap.empty()) {
        auto [b, v] = heap.top();
        heap.pop();
        if (b < best[v]) continue;
        for (const auto& [w, ei] : adj[v]) {
            const double nb = std::min(b, edge_minima[ei]);
            if (nb > best[w]) {
                best[w] = nb;
                heap.emplace(nb, w);
            }
        }
    }
    return best;
}

std::vector<int> sign_clusters(const Network& net, const std::vector<double>& local_times) {
    if (local_times.size() != net.edges().size())
        throw std::invalid_argument("sign_clusters: missing local-time annotation");
    std::vector<int> parent(net.vertex_count());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t ei = 0; ei < net.edges().size(); ++ei) {
        if (local_times[ei] == 0.0)
            parent[find(net.edges()[ei].u)] = find(net.edges()[ei].v);
    }
    std::vector<int> comp(net.vertex_count());
    std::vector<int> label(net.vertex_count(), -1);
    int next = 0;
    for (int v = 0; v < net.vertex_count(); ++v) {
        const int r = find(v);
        if (label[r] < 0) label[r] = next++;
        comp[v] = label[r];
    }
    return comp;
}

LevySamples levy_pair_samples(const Network& net, const BoundarySpec& bc,
                              std::size_t replicates, std::uint64_t seed,
                              unsigned threads) {
    for (double h : bc.values)
        if (h < 0.0) throw std::invalid_argument("levy_pair_samples: negative boundary values");

    const int n = net.vertex_count();
    LevySamples out;
    out.abs_phi.assign(n, std::vector<double>(replicates));
    out.delta.assign(n, std::vector<double>(replicates));
    out.phi_minus_i.assign(n, std::vector<double>(replicates));
    out.neg_i.assign(n, std::vector<double>(replicates));

    const FieldSampler sampler(net, bc);
    std::vector<double> boundary_values(bc.boundary.size());
    for (std::size_t i = 0; i < bc.boundary.size(); ++i) boundary_values[i] = bc.values[i];

    stats::RandomStream root(seed);
    stats::parallel_replicates(replicates, threads, [&](std::size_t rep) {
        // Left side: local-time annotation of one field sample.
        stats::RandomStream s1 = root.substream(2 * rep);
        FieldSample f1 = sampler.sample(s1);
        AnnotatedSample a1 = annotate_local_times(net, std::move(f1), s1);
        std::vector<double> d = delta_from(net, a1.edge_local_times, bc.boundary);
        for (int v = 0; v < n; ++v) {
            out.abs_phi[v][rep] = std::abs(a1.field.values[v]);
            out.delta[v][rep] = d[v];
        }
        // Right side: minima annotation of an independent field sample.
        stats::RandomStream s2 = root.substream(2 * rep + 1);
        FieldSample f2 = sampler.sample(s2);
        AnnotatedSample a2 = annotate_minima(net, std::move(f2), s2);
        std::vector<double> itld = infimum_itilde(net, a2.edge_minima, bc.boundary,
                                                  boundary_values);
        for (int v = 0; v < n; ++v) {
            const double i = std::min(0.0, itld[v]);
            out.phi_minus_i[v][rep] = a2.field.values[v] - i;
            out.neg_i[v][rep] = -i;
        }
    });
    return out;
}

}  // namespace gffm
