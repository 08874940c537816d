#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mbsc {

using ChannelId = std::uint32_t;

enum class LayoutKind { Position, Direction };

// Per-channel sensor geometry: electrode positions or unit lead directions.
struct SensorLayout {
    LayoutKind kind = LayoutKind::Position;
    std::vector<std::string> names;
    std::vector<std::array<double, 3>> coords;

    std::size_t size() const noexcept { return coords.size(); }
    // Throws InvalidLayout on non-unit direction vectors or a name/coord mismatch.
    void validate() const;
    // Euclidean distance for positions, arccos(|u.v|) for lead directions.
    double distance(std::size_t a, std::size_t b) const;
};

struct TreeEdge {
    ChannelId parent;
    ChannelId child;
    friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

// Rooted spanning tree over channels; edges in breadth-first order define the
// description order (root first, then each edge's child).
class CodingTree {
public:
    CodingTree() = default;
    CodingTree(ChannelId root, std::vector<TreeEdge> edges);

    // Builds the breadth-first edge list from a parent array (parent[root]
    // ignored). Siblings are visited in increasing channel order. Throws
    // InvalidArgument if the array is not an arborescence rooted at root.
    static CodingTree from_parents(ChannelId root, std::span<const ChannelId> parents);
    static CodingTree star(std::size_t channels, ChannelId root);

    ChannelId root() const noexcept { return root_; }
    const std::vector<TreeEdge>& edges() const noexcept { return edges_; }
    std::size_t channel_count() const noexcept { return edges_.size() + 1; }
    // Parent of each channel; the root maps to itself.
    std::vector<ChannelId> parents() const;
    // Root followed by every edge's child.
    std::vector<ChannelId> description_order() const;

    // Throws InvalidArgument unless this is a breadth-first-ordered spanning
    // arborescence over `channels` channels.
    void validate(std::size_t channels) const;

    friend bool operator==(const CodingTree&, const CodingTree&) = default;

private:
    ChannelId root_ = 0;
    std::vector<TreeEdge> edges_;
};

// Dense m x m weight matrix; at(from, to).
class WeightMatrix {
public:
    explicit WeightMatrix(std::size_t m = 0, double fill = 0.0) : m_(m), w_(m * m, fill) {}
    std::size_t size() const noexcept { return m_; }
    double& at(std::size_t from, std::size_t to) noexcept { return w_[from * m_ + to]; }
    double at(std::size_t from, std::size_t to) const noexcept { return w_[from * m_ + to]; }

private:
    std::size_t m_;
    std::vector<double> w_;
};

// Undirected minimum spanning tree (Kruskal), ties broken by (weight, min
// endpoint, max endpoint). Uses at(min, max) of a symmetric matrix. Returned
// edges are (min endpoint, max endpoint) in acceptance order.
std::vector<TreeEdge> minimum_spanning_tree(const WeightMatrix& weights);

// Orients an undirected spanning tree away from root, breadth-first.
CodingTree orient_from_root(std::size_t channels, ChannelId root, std::span<const TreeEdge> undirected);

CodingTree build_geometry_tree(const SensorLayout& layout, ChannelId root);

// Minimum spanning arborescence rooted at root (Chu-Liu/Edmonds). Ties are
// broken by smallest parent index. Edges into root are ignored.
CodingTree dmst(const WeightMatrix& weights, ChannelId root);

// Sum of weights.at(parent, child) over the tree's edges.
double tree_weight(const CodingTree& tree, const WeightMatrix& weights);

// Cumulative code lengths of every ordered (reference, target) pair while the
// coding tree is being learned.
class PairStats {
public:
    PairStats(std::size_t channels, ChannelId root);

    void add(ChannelId reference, ChannelId target, std::uint64_t bits) noexcept {
        cumulative_[reference * channels_ + target] += bits;
    }
    // Call once per vector sample after all add() calls for it.
    void advance() noexcept { ++samples_; }

    std::uint64_t samples() const noexcept { return samples_; }
    std::uint64_t cumulative(ChannelId reference, ChannelId target) const noexcept {
        return cumulative_[reference * channels_ + target];
    }
    double average(ChannelId reference, ChannelId target) const noexcept;
    // Averages as a weight matrix; pairs into the root and self pairs are 0.
    WeightMatrix averages() const;

private:
    std::size_t channels_;
    ChannelId root_;
    std::vector<std::uint64_t> cumulative_;
    std::uint64_t samples_ = 0;
};

struct StoppingRule {
    std::uint32_t block = 50;
    std::uint32_t window = 5;
    double gamma = 0.03;
    std::uint32_t max_samples = 3000;
};

// Sequence c_1, c_2, ... of learned-tree costs, one per block.
struct StoppingState {
    StoppingRule rule;
    std::vector<double> costs;
};

// True when block i (1-based, costs[0..i-1] recorded) ends learning: either
// i > V and the mean of the last V cost changes is below gamma * c_i, or
// i * B >= N_s.
bool check_stopping(const StoppingState& state, std::size_t block_index);

}  // namespace mbsc
