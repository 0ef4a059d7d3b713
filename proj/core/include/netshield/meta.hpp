#pragma once

#include <map>
#include <string>
#include <vector>

#include "netshield/game.hpp"

namespace netshield {

// Contraction of maximal same-immunisation connected regions. Adjacent
// meta-nodes always carry opposite immunisation status.
struct MetaNode {
    int id = 0;
    std::vector<PlayerId> members;  // sorted
    bool immunised = false;
};

struct MetaGraph {
    std::vector<MetaNode> nodes;
    std::vector<std::vector<int>> adj;   // sorted, deduped
    std::vector<int> node_of;            // base node -> meta id
};

enum class MetaTreeKind { Block, Cut };

// Block: a maximal set of meta-nodes that stays connected under removal of
// any single vulnerable meta-node (ordinary biconnected components of the
// meta-graph, merged transitively at immunised articulation meta-nodes).
// Cut: a vulnerable articulation meta-node.
struct MetaTreeNode {
    MetaTreeKind kind = MetaTreeKind::Block;
    int id = 0;
    std::vector<int> meta_ids;  // Block: member meta-nodes incl. boundary cuts; Cut: one id

    int parent = -1;
    std::vector<int> children;  // sorted by tree id

    // Base-node accounting. Cut meta-nodes are owned by their Cut tree node;
    // every other meta-node is owned by its unique Block.
    long long owned = 0;
    long long subtree_mass = 0;     // |T(v)|
    long long complement_mass = 0;  // |T-bar(v)| = n - |T(v)|

    // Blocks only: interior vulnerable meta-nodes that are not articulation
    // points. Their delta value (n - |z|)^2 is independent of u's strategy.
    std::vector<std::pair<int, long long>> interior_u1;  // (meta id, delta)

    // delta0 -> total member count of interior_u1 meta-nodes at that delta.
    std::map<long long, long long> mtilde;

    // Empty-strategy structure of the whole subtree T(v): minimum delta over
    // its vulnerable meta-nodes (LLONG_MAX if none) and, per delta value, the
    // total member count of meta-nodes sitting exactly there.
    long long empty_min_delta = 0;
    std::map<long long, long long> empty_weight_at;
};

struct MetaTree {
    std::vector<MetaTreeNode> nodes;
    int root = -1;

    std::vector<int> tree_of_meta;  // meta id -> owning tree node (-1 for block-interior immunised)
    std::vector<int> tin, tout;     // Euler intervals for ancestor tests

    bool in_subtree(int ancestor, int node) const {
        return tin[ancestor] <= tin[node] && tout[node] <= tout[ancestor];
    }
};

MetaGraph build_meta_graph(const Network& net);

// (U1, Ugeq2): vulnerable meta-nodes split by whether their removal
// disconnects the meta-graph. PreconditionError if the meta-graph is
// disconnected.
std::pair<std::vector<int>, std::vector<int>> classify_meta_nodes(const MetaGraph& meta);

// Rooted at the unique Block containing u's (immunised) meta-node. A
// single-meta-node graph yields the degenerate one-Block tree.
MetaTree build_meta_tree(const MetaGraph& meta, int u_meta);

// A non-root Block annotated with one representative immunised meta-node and
// one base node inside it, used to materialize strategies.
struct PurchasableBlock {
    int tree_id = -1;
    int rep_meta = -1;
    PlayerId rep_node = -1;
};

// All non-root Blocks (each contains an immunised meta-node), sorted by tree
// id. Links into the root Block never change any post-attack component, so
// the root is excluded.
std::vector<PurchasableBlock> purchasable_blocks(const MetaTree& tree, const MetaGraph& meta);

// Delta(z, empty) for every vulnerable meta-node z.
std::map<int, long long> empty_strategy_deltas(const MetaTree& tree, const MetaGraph& meta, const Network& net);

// Deterministic text rendering of the meta-graph and meta-tree for
// golden-file tests.
std::string dump_meta(const MetaGraph& meta, const MetaTree& tree);

}  // namespace netshield
