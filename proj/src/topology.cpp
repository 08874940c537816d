#include "mbsc/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "mbsc/error.hpp"

namespace mbsc {

void SensorLayout::validate() const {
    if (!names.empty() && names.size() != coords.size()) {
        throw Error(ErrorCode::InvalidLayout, "channel names and coordinates differ in count");
    }
    if (kind == LayoutKind::Direction) {
        for (std::size_t i = 0; i < coords.size(); ++i) {
            const auto& c = coords[i];
            const double norm = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
            if (std::fabs(norm - 1.0) > 1e-6) {
                throw Error(ErrorCode::InvalidLayout, "direction of channel " + std::to_string(i) + " is not unit length");
            }
        }
    }
}

double SensorLayout::distance(std::size_t a, std::size_t b) const {
    const auto& u = coords[a];
    const auto& v = coords[b];
    if (kind == LayoutKind::Position) {
        const double dx = u[0] - v[0], dy = u[1] - v[1], dz = u[2] - v[2];
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }
    // Lead axes are undirected: u and -u measure the same direction.
    const double dot = std::fabs(u[0] * v[0] + u[1] * v[1] + u[2] * v[2]);
    return std::acos(std::min(1.0, dot));
}

CodingTree::CodingTree(ChannelId root, std::vector<TreeEdge> edges) : root_(root), edges_(std::move(edges)) {}

CodingTree CodingTree::from_parents(ChannelId root, std::span<const ChannelId> parents) {
    const std::size_t m = parents.size();
    if (root >= m) throw Error(ErrorCode::InvalidArgument, "root outside channel range");
    std::vector<std::vector<ChannelId>> children(m);
    for (ChannelId c = 0; c < m; ++c) {
        if (c == root) continue;
        if (parents[c] >= m || parents[c] == c) {
            throw Error(ErrorCode::InvalidArgument, "invalid parent for channel " + std::to_string(c));
        }
        children[parents[c]].push_back(c);
    }
    std::vector<TreeEdge> edges;
    std::deque<ChannelId> queue{root};
    while (!queue.empty()) {
        const ChannelId u = queue.front();
        queue.pop_front();
        for (ChannelId c : children[u]) {
            edges.push_back({u, c});
            queue.push_back(c);
        }
    }
    if (edges.size() + 1 != m) throw Error(ErrorCode::InvalidArgument, "parent array contains a cycle");
    return CodingTree(root, std::move(edges));
}

CodingTree CodingTree::star(std::size_t channels, ChannelId root) {
    std::vector<ChannelId> parents(channels, root);
    return from_parents(root, parents);
}

std::vector<ChannelId> CodingTree::parents() const {
    std::vector<ChannelId> p(channel_count(), root_);
    for (const auto& e : edges_) p[e.child] = e.parent;
    return p;
}

std::vector<ChannelId> CodingTree::description_order() const {
    std::vector<ChannelId> order{root_};
    for (const auto& e : edges_) order.push_back(e.child);
    return order;
}

void CodingTree::validate(std::size_t channels) const {
    if (edges_.size() + 1 != channels || root_ >= channels) {
        throw Error(ErrorCode::InvalidArgument, "coding tree does not span " + std::to_string(channels) + " channels");
    }
    std::vector<bool> seen(channels, false);
    seen[root_] = true;
    for (const auto& e : edges_) {
        if (e.parent >= channels || e.child >= channels || !seen[e.parent] || seen[e.child]) {
            throw Error(ErrorCode::InvalidArgument, "coding tree edges are not a breadth-first arborescence");
        }
        seen[e.child] = true;
    }
}

std::vector<TreeEdge> minimum_spanning_tree(const WeightMatrix& weights) {
    const std::size_t m = weights.size();
    struct Candidate {
        double w;
        ChannelId a, b;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(m * (m - 1) / 2 + 1);
    for (ChannelId a = 0; a < m; ++a) {
        for (ChannelId b = a + 1; b < m; ++b) candidates.push_back({weights.at(a, b), a, b});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
        if (x.w != y.w) return x.w < y.w;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });

    std::vector<ChannelId> parent(m);
    std::iota(parent.begin(), parent.end(), ChannelId{0});
    auto find = [&parent](ChannelId x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    std::vector<TreeEdge> tree;
    for (const auto& c : candidates) {
        const ChannelId ra = find(c.a), rb = find(c.b);
        if (ra == rb) continue;
        parent[std::max(ra, rb)] = std::min(ra, rb);
        tree.push_back({c.a, c.b});
        if (tree.size() + 1 == m) break;
    }
    return tree;
}

CodingTree orient_from_root(std::size_t channels, ChannelId root, std::span<const TreeEdge> undirected) {
    if (root >= channels) throw Error(ErrorCode::InvalidArgument, "root outside channel range");
    std::vector<std::vector<ChannelId>> adj(channels);
    for (const auto& e : undirected) {
        adj[e.parent].push_back(e.child);
        adj[e.child].push_back(e.parent);
    }
    std::vector<ChannelId> parents(channels, root);
    std::vector<bool> seen(channels, false);
    std::deque<ChannelId> queue{root};
    seen[root] = true;
    while (!queue.empty()) {
        const ChannelId u = queue.front();
        queue.pop_front();
        for (ChannelId v : adj[u]) {
            if (seen[v]) continue;
            seen[v] = true;
            parents[v] = u;
            queue.push_back(v);
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
        throw Error(ErrorCode::InvalidArgument, "undirected edges do not span all channels");
    }
    return CodingTree::from_parents(root, parents);
}

CodingTree build_geometry_tree(const SensorLayout& layout, ChannelId root) {
    layout.validate();
    const std::size_t m = layout.size();
    if (m == 0) throw Error(ErrorCode::InvalidLayout, "layout has no channels");
    WeightMatrix w(m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) w.at(a, b) = a == b ? 0.0 : layout.distance(a, b);
    }
    const auto undirected = minimum_spanning_tree(w);
    return orient_from_root(m, root, undirected);
}

namespace {

struct ArcCandidate {
    std::size_t from;
    std::size_t to;
    double w;
    ChannelId original_from;
};

// Chosen incoming arc index for every node; root gets npos.
std::vector<std::size_t> edmonds(std::size_t n, std::size_t root, const std::vector<ArcCandidate>& arcs) {
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<std::size_t> in(n, npos);
    for (std::size_t idx = 0; idx < arcs.size(); ++idx) {
        const auto& a = arcs[idx];
        if (a.from == a.to || a.to == root) continue;
        const std::size_t cur = in[a.to];
        if (cur == npos || a.w < arcs[cur].w || (a.w == arcs[cur].w && a.original_from < arcs[cur].original_from)) {
            in[a.to] = idx;
        }
    }

    std::vector<std::size_t> comp(n, npos), visit(n, npos);
    std::size_t cycles = 0;
    for (std::size_t v = 0; v < n; ++v) {
        std::size_t u = v;
        while (u != root && comp[u] == npos && visit[u] != v) {
            visit[u] = v;
            u = arcs[in[u]].from;
        }
        if (u != root && comp[u] == npos && visit[u] == v) {
            for (std::size_t x = arcs[in[u]].from; x != u; x = arcs[in[x]].from) comp[x] = cycles;
            comp[u] = cycles++;
        }
    }
    if (cycles == 0) return in;

    const std::size_t cycle_count = cycles;
    std::vector<bool> on_cycle(n, false);
    for (std::size_t v = 0; v < n; ++v) {
        if (comp[v] != npos) {
            on_cycle[v] = true;
        } else {
            comp[v] = cycles++;
        }
    }

    std::vector<ArcCandidate> contracted;
    std::vector<std::size_t> origin;
    for (std::size_t idx = 0; idx < arcs.size(); ++idx) {
        const auto& a = arcs[idx];
        if (a.to == root) continue;
        const std::size_t cu = comp[a.from], cv = comp[a.to];
        if (cu == cv) continue;
        const double w = on_cycle[a.to] ? a.w - arcs[in[a.to]].w : a.w;
        contracted.push_back({cu, cv, w, a.original_from});
        origin.push_back(idx);
    }

    const auto sub = edmonds(cycles, comp[root], contracted);
    std::vector<std::size_t> result(n, npos);
    std::vector<std::size_t> entering(cycle_count, npos);
    for (std::size_t c = 0; c < cycles; ++c) {
        if (sub[c] == npos) continue;
        const std::size_t idx = origin[sub[c]];
        if (c < cycle_count) {
            entering[c] = idx;
        } else {
            result[arcs[idx].to] = idx;
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (!on_cycle[v]) continue;
        const std::size_t e = entering[comp[v]];
        result[v] = arcs[e].to == v ? e : in[v];
    }
    return result;
}

}  // namespace

CodingTree dmst(const WeightMatrix& weights, ChannelId root) {
    const std::size_t m = weights.size();
    if (root >= m) throw Error(ErrorCode::InvalidArgument, "root outside channel range");
    std::vector<ArcCandidate> arcs;
    arcs.reserve(m * m);
    for (ChannelId to = 0; to < m; ++to) {
        if (to == root) continue;
        for (ChannelId from = 0; from < m; ++from) {
            if (from != to) arcs.push_back({from, to, weights.at(from, to), from});
        }
    }
    const auto chosen = edmonds(m, root, arcs);
    std::vector<ChannelId> parents(m, root);
    for (std::size_t v = 0; v < m; ++v) {
        if (v != root) parents[v] = static_cast<ChannelId>(arcs[chosen[v]].from);
    }
    return CodingTree::from_parents(root, parents);
}

double tree_weight(const CodingTree& tree, const WeightMatrix& weights) {
    double total = 0.0;
    for (const auto& e : tree.edges()) total += weights.at(e.parent, e.child);
    return total;
}

PairStats::PairStats(std::size_t channels, ChannelId root)
    : channels_(channels), root_(root), cumulative_(channels * channels, 0) {}

double PairStats::average(ChannelId reference, ChannelId target) const noexcept {
    return samples_ == 0 ? 0.0 : static_cast<double>(cumulative(reference, target)) / static_cast<double>(samples_);
}

WeightMatrix PairStats::averages() const {
    WeightMatrix w(channels_);
    for (ChannelId j = 0; j < channels_; ++j) {
        for (ChannelId i = 0; i < channels_; ++i) {
            if (i != j && i != root_) w.at(j, i) = average(j, i);
        }
    }
    return w;
}

bool check_stopping(const StoppingState& state, std::size_t block_index) {
    const auto& rule = state.rule;
    if (block_index * std::uint64_t{rule.block} >= rule.max_samples) return true;
    if (block_index <= rule.window || block_index > state.costs.size()) return false;
    double sum = 0.0;
    for (std::size_t k = block_index - rule.window + 1; k <= block_index; ++k) {
        sum += std::fabs(state.costs[k - 1] - state.costs[k - 2]);
    }
    const double mean = sum / rule.window;
    return mean < rule.gamma * state.costs[block_index - 1];
}

}  // namespace mbsc
