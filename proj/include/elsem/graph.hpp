#pragma once

#include <string>
#include <utility>
#include <vector>

#include "elsem/common.hpp"

namespace elsem {

using IndexPair = std::pair<int, int>;

struct DofCounts {
    int q;                    // total estimating-equation count of the direct formulation
    int d;                    // free parameter count: |directed| + |bidirected| + m
    int profile_constraints;  // m mean constraints + one per non-bidirected vertex pair
};

/// Mixed graph: directed edges u -> v (direct effects) and unordered bidirected
/// edges u <-> v (correlated errors) over a fixed, ordered vertex set. The
/// declaration order of the vertices fixes every matrix index convention used
/// elsewhere. Immutable after construction; safe to share across threads.
class MixedGraph {
public:
    /// Builds a graph from vertex names and edge lists given as index pairs.
    /// Bidirected pairs are stored unordered (normalized to u < v, deduplicated).
    /// Throws std::invalid_argument on self-loops, duplicate names, or bad indices.
    static MixedGraph make(std::vector<std::string> names, std::vector<IndexPair> directed,
                           std::vector<IndexPair> bidirected);

    /// Parses the text graph format:
    ///   nodes: A B C
    ///   A -> B
    ///   B <-> C
    /// '#' starts a comment, blank lines are ignored. Throws ParseError with a
    /// 1-based line (and column for token errors).
    static MixedGraph parse(const std::string& text);

    std::string serialize() const;

    int num_vertices() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& vertex_names() const { return names_; }
    /// Index of a named vertex; throws std::invalid_argument if unknown.
    int index_of(const std::string& name) const;
    bool has_vertex(const std::string& name) const;

    const std::vector<IndexPair>& directed_edges() const { return directed_; }
    const std::vector<IndexPair>& bidirected_edges() const { return bidirected_; }

    /// parents(v) = {u : u -> v}; siblings(v) = {u : u <-> v}. Sorted by index.
    const std::vector<int>& parents(int v) const;
    const std::vector<int>& siblings(int v) const;

    bool has_directed(int u, int v) const;
    bool has_bidirected(int u, int v) const;

    /// All pairs {u, v}, u < v, that carry no bidirected edge, in lexicographic
    /// order. These are exactly the pairs whose error covariance is constrained
    /// to zero; a directed edge between u and v does not remove the pair.
    const std::vector<IndexPair>& nonedge_pairs() const { return nonedges_; }

    /// True iff the directed part has no directed cycle.
    bool is_acyclic() const;

    DofCounts dof_counts() const;

    /// True iff `this` has the same vertex names in the same order as `full`
    /// and both edge sets are subsets of the corresponding sets of `full`.
    bool is_nested_in(const MixedGraph& full) const;

    bool operator==(const MixedGraph& other) const;

private:
    MixedGraph() = default;

    std::vector<std::string> names_;
    std::vector<IndexPair> directed_;    // (u, v) meaning u -> v, sorted
    std::vector<IndexPair> bidirected_;  // u < v, sorted
    std::vector<std::vector<int>> parents_;
    std::vector<std::vector<int>> siblings_;
    std::vector<IndexPair> nonedges_;
    std::vector<char> directed_lookup_;    // m*m
    std::vector<char> bidirected_lookup_;  // m*m, symmetric
};

}  // namespace elsem
