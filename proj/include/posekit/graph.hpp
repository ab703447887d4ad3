// Copyright 2026 The posekit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "posekit/errors.hpp"

namespace posekit {

using EntityId = int;

/// Tree of problem entities. Each edge declares that the two entities carry
/// a pairwise compatibility score; the hypothesis graph expands each entity
/// into a group of weighted candidate states.
struct RelationalGraph {
    std::vector<EntityId> entities;
    std::vector<std::pair<EntityId, EntityId>> edges;
    EntityId root = 0;
};

/// Builds the relational chain over `n` consecutive entities 0..n-1,
/// rooted at 0. A single entity yields the degenerate edgeless tree.
inline RelationalGraph make_chain(int n) {
    RelationalGraph g;
    g.entities.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g.entities[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
    g.root = 0;
    return g;
}

/// Checks the tree invariants: |edges| = |entities| - 1, no self-loops or
/// duplicate edges, all endpoints known, connected, root is a member.
/// Throws StructureError on violation.
inline void validate_tree(const RelationalGraph& g) {
    const std::size_t n = g.entities.size();
    if (n == 0) throw StructureError("relational graph has no entities");

    std::unordered_map<EntityId, int> index;
    index.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!index.emplace(g.entities[i], static_cast<int>(i)).second)
            throw StructureError("duplicate entity id " + std::to_string(g.entities[i]));
    }
    if (!index.count(g.root))
        throw StructureError("root " + std::to_string(g.root) + " is not an entity");
    if (g.edges.size() != n - 1)
        throw StructureError("expected " + std::to_string(n - 1) + " edges for a tree over " +
                             std::to_string(n) + " entities, got " + std::to_string(g.edges.size()));

    std::map<std::pair<int, int>, bool> seen;
    std::vector<std::vector<int>> adj(n);
    for (const auto& [a, b] : g.edges) {
        auto ia = index.find(a);
        auto ib = index.find(b);
        if (ia == index.end() || ib == index.end())
            throw StructureError("edge endpoint is not an entity");
        if (a == b) throw StructureError("self-loop on entity " + std::to_string(a));
        auto key = std::minmax(ia->second, ib->second);
        if (!seen.emplace(key, true).second)
            throw StructureError("duplicate edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
        adj[static_cast<std::size_t>(ia->second)].push_back(ib->second);
        adj[static_cast<std::size_t>(ib->second)].push_back(ia->second);
    }

    // |E| = n-1 plus connectivity implies a tree.
    std::vector<char> visited(n, 0);
    std::vector<int> stack = {index.at(g.root)};
    visited[static_cast<std::size_t>(index.at(g.root))] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (!visited[static_cast<std::size_t>(w)]) {
                visited[static_cast<std::size_t>(w)] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    if (reached != n) throw StructureError("relational graph is disconnected");
}

/// One chosen hypothesis per entity, in the order of
/// RelationalGraph::entities, plus the combined objective value.
struct Selection {
    std::vector<int> chosen;
    double objective = 0.0;
};

/// Expansion of a relational tree: each entity owns an ordered group of
/// hypotheses (addressed by their index within the group), every hypothesis
/// carries a unary weight, and every relational edge carries a dense matrix
/// of binary weights over the two groups.
///
/// Hypotheses can be masked out with remove_hypothesis(); removal keeps the
/// original indices stable, which is what the top-k extraction relies on.
class HypothesisGraph {
  public:
    explicit HypothesisGraph(RelationalGraph relational) : rel_(std::move(relational)) {
        validate_tree(rel_);
        const std::size_t n = rel_.entities.size();
        index_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) index_.emplace(rel_.entities[i], static_cast<int>(i));
        unary_.resize(n);
        removed_.resize(n);
        edges_.resize(rel_.edges.size());
        for (std::size_t e = 0; e < rel_.edges.size(); ++e) {
            const int a = entity_index(rel_.edges[e].first);
            const int b = entity_index(rel_.edges[e].second);
            edges_[e].a = a;
            edges_[e].b = b;
            edge_of_pair_.emplace(std::minmax(a, b), static_cast<int>(e));
        }
    }

    const RelationalGraph& relational() const { return rel_; }
    int entity_count() const { return static_cast<int>(rel_.entities.size()); }

    int entity_index(EntityId id) const {
        auto it = index_.find(id);
        if (it == index_.end()) throw DataError("unknown entity id " + std::to_string(id));
        return it->second;
    }

    /// Defines the group of `id` as weights.size() hypotheses with the given
    /// unary weights. Groups must be non-empty and weights finite.
    void set_unary(EntityId id, std::vector<double> weights) {
        if (weights.empty())
            throw DataError("empty hypothesis group for entity " + std::to_string(id));
        for (double w : weights)
            if (!std::isfinite(w)) throw DataError("non-finite unary weight for entity " + std::to_string(id));
        const auto i = static_cast<std::size_t>(entity_index(id));
        unary_[i] = std::move(weights);
        removed_[i].assign(unary_[i].size(), 0);
    }

    /// Sets the binary weights for the relational edge (a, b) as a row-major
    /// |group(a)| x |group(b)| matrix. Both groups must already be defined
    /// and the edge must exist in the relational graph.
    void set_binary(EntityId a, EntityId b, std::vector<double> row_major) {
        const int ia = entity_index(a);
        const int ib = entity_index(b);
        auto it = edge_of_pair_.find(std::minmax(ia, ib));
        if (it == edge_of_pair_.end())
            throw DataError("no relational edge between entities " + std::to_string(a) + " and " +
                            std::to_string(b));
        const std::size_t rows = unary_[static_cast<std::size_t>(ia)].size();
        const std::size_t cols = unary_[static_cast<std::size_t>(ib)].size();
        if (rows == 0 || cols == 0)
            throw DataError("set_unary must precede set_binary for edge (" + std::to_string(a) +
                            "," + std::to_string(b) + ")");
        if (row_major.size() != rows * cols)
            throw DataError("binary weight matrix for edge (" + std::to_string(a) + "," +
                            std::to_string(b) + ") has " + std::to_string(row_major.size()) +
                            " entries, expected " + std::to_string(rows * cols));
        for (double w : row_major)
            if (!std::isfinite(w)) throw DataError("non-finite binary weight on edge (" +
                                                   std::to_string(a) + "," + std::to_string(b) + ")");
        EdgeData& e = edges_[static_cast<std::size_t>(it->second)];
        // Store in the orientation the caller used.
        e.row_entity = ia;
        e.weights = std::move(row_major);
        e.cols = cols;
        e.assigned = true;
    }

    int group_size(EntityId id) const {
        return static_cast<int>(unary_[static_cast<std::size_t>(entity_index(id))].size());
    }

    double unary(EntityId id, int slot) const {
        const auto& u = unary_[static_cast<std::size_t>(entity_index(id))];
        check_slot(u.size(), slot, id);
        return u[static_cast<std::size_t>(slot)];
    }

    /// Binary weight between hypothesis `slot_a` of entity a and `slot_b` of
    /// entity b, for a relational edge {a, b} in either orientation.
    double binary(EntityId a, EntityId b, int slot_a, int slot_b) const {
        const int ia = entity_index(a);
        const int ib = entity_index(b);
        auto it = edge_of_pair_.find(std::minmax(ia, ib));
        if (it == edge_of_pair_.end())
            throw DataError("no relational edge between entities " + std::to_string(a) + " and " +
                            std::to_string(b));
        const EdgeData& e = edges_[static_cast<std::size_t>(it->second)];
        if (!e.assigned)
            throw DataError("missing binary weights for edge (" + std::to_string(a) + "," +
                            std::to_string(b) + ")");
        check_slot(unary_[static_cast<std::size_t>(ia)].size(), slot_a, a);
        check_slot(unary_[static_cast<std::size_t>(ib)].size(), slot_b, b);
        if (e.row_entity == ia)
            return e.weights[static_cast<std::size_t>(slot_a) * e.cols + static_cast<std::size_t>(slot_b)];
        return e.weights[static_cast<std::size_t>(slot_b) * e.cols + static_cast<std::size_t>(slot_a)];
    }

    /// Masks one hypothesis. The slot keeps its index; it just becomes
    /// unavailable to the solver.
    void remove_hypothesis(EntityId id, int slot) {
        auto& r = removed_[static_cast<std::size_t>(entity_index(id))];
        check_slot(r.size(), slot, id);
        r[static_cast<std::size_t>(slot)] = 1;
    }

    bool available(EntityId id, int slot) const {
        const auto& r = removed_[static_cast<std::size_t>(entity_index(id))];
        check_slot(r.size(), slot, id);
        return r[static_cast<std::size_t>(slot)] == 0;
    }

    std::vector<int> available_slots(EntityId id) const {
        const auto& r = removed_[static_cast<std::size_t>(entity_index(id))];
        std::vector<int> out;
        for (std::size_t s = 0; s < r.size(); ++s)
            if (!r[s]) out.push_back(static_cast<int>(s));
        return out;
    }

    /// Verifies that every group is defined with at least one available
    /// hypothesis and that every relational edge has binary weights.
    void validate() const {
        for (std::size_t i = 0; i < unary_.size(); ++i) {
            if (unary_[i].empty())
                throw DataError("no hypothesis group defined for entity " +
                                std::to_string(rel_.entities[i]));
            bool any = false;
            for (char rm : removed_[i]) any = any || !rm;
            if (!any)
                throw DataError("hypothesis group for entity " + std::to_string(rel_.entities[i]) +
                                " is empty");
        }
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            if (!edges_[e].assigned)
                throw DataError("missing binary weights for edge (" +
                                std::to_string(rel_.edges[e].first) + "," +
                                std::to_string(rel_.edges[e].second) + ")");
        }
    }

  private:
    friend Selection solve_tree(const HypothesisGraph&, double);
    friend double evaluate_selection(const HypothesisGraph&, const Selection&, double);

    struct EdgeData {
        int a = -1;               // dense index of edge.first
        int b = -1;               // dense index of edge.second
        int row_entity = -1;      // dense index whose slots index rows
        std::size_t cols = 0;
        std::vector<double> weights;
        bool assigned = false;
    };

    static void check_slot(std::size_t size, int slot, EntityId id) {
        if (slot < 0 || static_cast<std::size_t>(slot) >= size)
            throw DataError("hypothesis index " + std::to_string(slot) +
                            " outside group of entity " + std::to_string(id));
    }

    double binary_by_dense(int edge, int dense_row_entity, int slot_row, int slot_col) const {
        const EdgeData& e = edges_[static_cast<std::size_t>(edge)];
        if (e.row_entity == dense_row_entity)
            return e.weights[static_cast<std::size_t>(slot_row) * e.cols + static_cast<std::size_t>(slot_col)];
        return e.weights[static_cast<std::size_t>(slot_col) * e.cols + static_cast<std::size_t>(slot_row)];
    }

    RelationalGraph rel_;
    std::unordered_map<EntityId, int> index_;
    std::vector<std::vector<double>> unary_;
    std::vector<std::vector<char>> removed_;
    std::vector<EdgeData> edges_;
    std::map<std::pair<int, int>, int> edge_of_pair_;
};

/// Recomputes the combined objective sum(unary) + lambda * sum(binary) of a
/// full selection from scratch. This is the audit oracle for solver outputs;
/// it accepts any structurally valid selection, masked hypotheses included.
inline double evaluate_selection(const HypothesisGraph& g, const Selection& s, double lambda) {
    const auto& rel = g.relational();
    if (s.chosen.size() != rel.entities.size())
        throw DataError("selection covers " + std::to_string(s.chosen.size()) + " entities, expected " +
                        std::to_string(rel.entities.size()));
    double total = 0.0;
    for (std::size_t i = 0; i < rel.entities.size(); ++i)
        total += g.unary(rel.entities[i], s.chosen[i]);
    for (const auto& [a, b] : rel.edges) {
        const auto ia = static_cast<std::size_t>(g.entity_index(a));
        const auto ib = static_cast<std::size_t>(g.entity_index(b));
        total += lambda * g.binary(a, b, s.chosen[ia], s.chosen[ib]);
    }
    return total;
}

/// Exact max-sum inference over the hypothesis graph.
///
/// Processes the tree leaves-to-root; the score of hypothesis k of entity i
/// is its unary weight plus, for every child j, the best achievable
/// lambda-scaled binary weight to j combined with j's own subtree score.
/// Backtracking from the root argmax yields the globally optimal selection.
///
/// Ties resolve to the lowest hypothesis index at every maximization, so
/// identical inputs always produce identical selections. Cost is
/// O(sum over edges of |group_i| * |group_j|).
inline Selection solve_tree(const HypothesisGraph& g, double lambda) {
    g.validate();
    const auto& rel = g.relational();
    const std::size_t n = rel.entities.size();

    std::vector<std::vector<std::pair<int, int>>> adj(n); // (neighbor dense idx, edge idx)
    for (std::size_t e = 0; e < rel.edges.size(); ++e) {
        const int a = g.entity_index(rel.edges[e].first);
        const int b = g.entity_index(rel.edges[e].second);
        adj[static_cast<std::size_t>(a)].emplace_back(b, static_cast<int>(e));
        adj[static_cast<std::size_t>(b)].emplace_back(a, static_cast<int>(e));
    }

    const int root = g.entity_index(rel.root);

    // Iterative DFS order from the root; children visit in adjacency order.
    std::vector<int> order;
    order.reserve(n);
    std::vector<int> parent(n, -1), parent_edge(n, -1);
    {
        std::vector<int> stack = {root};
        std::vector<char> seen(n, 0);
        seen[static_cast<std::size_t>(root)] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (const auto& [w, e] : adj[static_cast<std::size_t>(v)]) {
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    parent[static_cast<std::size_t>(w)] = v;
                    parent_edge[static_cast<std::size_t>(w)] = e;
                    stack.push_back(w);
                }
            }
        }
    }

    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> score(n);      // subtree score per slot
    std::vector<std::vector<int>> pick(n);          // per parent slot: best child slot
    for (std::size_t i = 0; i < n; ++i) {
        const EntityId id = rel.entities[i];
        score[i].assign(static_cast<std::size_t>(g.group_size(id)), kNegInf);
        for (int s : g.available_slots(id)) score[i][static_cast<std::size_t>(s)] = g.unary(id, s);
    }

    // Leaves-to-root accumulation: fold each node into its parent.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int child = *it;
        const int par = parent[static_cast<std::size_t>(child)];
        if (par < 0) continue;
        const int edge = parent_edge[static_cast<std::size_t>(child)];
        const auto& child_score = score[static_cast<std::size_t>(child)];
        auto& parent_score = score[static_cast<std::size_t>(par)];
        auto& child_pick = pick[static_cast<std::size_t>(child)];
        child_pick.assign(parent_score.size(), -1);

        const EntityId child_id = rel.entities[static_cast<std::size_t>(child)];
        const std::vector<int> child_slots = g.available_slots(child_id);
        for (std::size_t k = 0; k < parent_score.size(); ++k) {
            if (parent_score[k] == kNegInf) continue;
            double best = kNegInf;
            int best_slot = -1;
            for (int l : child_slots) {
                const double cand =
                    lambda * g.binary_by_dense(edge, par, static_cast<int>(k), l) +
                    child_score[static_cast<std::size_t>(l)];
                if (cand > best) {
                    best = cand;
                    best_slot = l;
                }
            }
            parent_score[k] += best;
            child_pick[k] = best_slot;
        }
    }

    Selection sel;
    sel.chosen.assign(n, -1);
    {
        const auto& root_score = score[static_cast<std::size_t>(root)];
        double best = kNegInf;
        int best_slot = -1;
        for (std::size_t k = 0; k < root_score.size(); ++k) {
            if (root_score[k] > best) {
                best = root_score[k];
                best_slot = static_cast<int>(k);
            }
        }
        sel.chosen[static_cast<std::size_t>(root)] = best_slot;
        sel.objective = best;
    }
    // Root-to-leaves backtrack along the DFS order.
    for (int v : order) {
        if (v == root) continue;
        const int par = parent[static_cast<std::size_t>(v)];
        const int par_slot = sel.chosen[static_cast<std::size_t>(par)];
        sel.chosen[static_cast<std::size_t>(v)] = pick[static_cast<std::size_t>(v)][static_cast<std::size_t>(par_slot)];
    }
    return sel;
}

/// Iterated extraction: solve, mask the chosen hypotheses, re-solve.
/// Returns up to k selections in extraction order; stops early once any
/// group runs out of hypotheses. k must be at least 1.
inline std::vector<Selection> solve_top_k(const HypothesisGraph& g, double lambda, int k) {
    if (k < 1) throw ArgumentError("k must be >= 1, got " + std::to_string(k));
    HypothesisGraph work = g;
    std::vector<Selection> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int round = 0; round < k; ++round) {
        bool exhausted = false;
        for (EntityId id : work.relational().entities) {
            if (work.available_slots(id).empty()) {
                exhausted = true;
                break;
            }
        }
        if (exhausted) break;
        Selection s = solve_tree(work, lambda);
        for (std::size_t i = 0; i < s.chosen.size(); ++i)
            work.remove_hypothesis(work.relational().entities[i], s.chosen[i]);
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace posekit
