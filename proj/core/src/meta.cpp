#include "netshield/meta.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <numeric>
#include <sstream>

#include "netshield/errors.hpp"

namespace netshield {

namespace {

bool meta_connected(const MetaGraph& meta) {
    if (meta.nodes.empty()) return true;
    std::vector<char> seen(meta.nodes.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    size_t reached = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ++reached;
        for (int w : meta.adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return reached == meta.nodes.size();
}

struct BccResult {
    std::vector<char> articulation;
    std::vector<std::vector<int>> components;  // vertex sets, each sorted
};

// Ordinary biconnected components (Hopcroft-Tarjan, explicit stack of edges).
BccResult biconnected_components(const MetaGraph& meta) {
    int n = static_cast<int>(meta.nodes.size());
    BccResult res;
    res.articulation.assign(n, 0);
    std::vector<int> disc(n, 0), low(n, 0);
    int timer = 0;
    std::vector<std::pair<int, int>> edge_stack;

    std::function<void(int, int)> dfs = [&](int v, int parent) {
        disc[v] = low[v] = ++timer;
        int children = 0;
        for (int w : meta.adj[v]) {
            if (w == parent) continue;
            if (!disc[w]) {
                ++children;
                edge_stack.emplace_back(v, w);
                dfs(w, v);
                low[v] = std::min(low[v], low[w]);
                if ((parent == -1 && children > 1) || (parent != -1 && low[w] >= disc[v])) {
                    res.articulation[v] = 1;
                }
                if (low[w] >= disc[v]) {
                    std::vector<int> verts;
                    while (true) {
                        auto [a, b] = edge_stack.back();
                        edge_stack.pop_back();
                        verts.push_back(a);
                        verts.push_back(b);
                        if (a == v && b == w) break;
                    }
                    std::sort(verts.begin(), verts.end());
                    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
                    res.components.push_back(std::move(verts));
                }
            } else if (disc[w] < disc[v]) {
                edge_stack.emplace_back(v, w);
                low[v] = std::min(low[v], disc[w]);
            }
        }
    };
    for (int v = 0; v < n; ++v) {
        if (!disc[v]) dfs(v, -1);
    }
    return res;
}

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

MetaGraph build_meta_graph(const Network& net) {
    MetaGraph meta;
    meta.node_of.assign(net.n, -1);
    // Scan base nodes in ascending order so meta ids are sorted by smallest
    // member.
    for (PlayerId s = 0; s < net.n; ++s) {
        if (meta.node_of[s] != -1) continue;
        MetaNode node;
        node.id = static_cast<int>(meta.nodes.size());
        node.immunised = net.immunised[s];
        std::vector<PlayerId> stack{s};
        meta.node_of[s] = node.id;
        while (!stack.empty()) {
            PlayerId v = stack.back();
            stack.pop_back();
            node.members.push_back(v);
            for (PlayerId w : net.adj[v]) {
                if (meta.node_of[w] == -1 && net.immunised[w] == net.immunised[s]) {
                    meta.node_of[w] = node.id;
                    stack.push_back(w);
                }
            }
        }
        std::sort(node.members.begin(), node.members.end());
        meta.nodes.push_back(std::move(node));
    }
    meta.adj.assign(meta.nodes.size(), {});
    for (PlayerId v = 0; v < net.n; ++v) {
        for (PlayerId w : net.adj[v]) {
            int a = meta.node_of[v], b = meta.node_of[w];
            if (a != b) meta.adj[a].push_back(b);
        }
    }
    for (auto& nbrs : meta.adj) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    return meta;
}

std::pair<std::vector<int>, std::vector<int>> classify_meta_nodes(const MetaGraph& meta) {
    if (!meta_connected(meta)) throw PreconditionError("meta-graph is disconnected");
    BccResult bcc = biconnected_components(meta);
    std::vector<int> u1, ugeq2;
    for (const auto& node : meta.nodes) {
        if (node.immunised) continue;
        if (bcc.articulation[node.id]) {
            ugeq2.push_back(node.id);
        } else {
            u1.push_back(node.id);
        }
    }
    return {u1, ugeq2};
}

MetaTree build_meta_tree(const MetaGraph& meta, int u_meta) {
    if (!meta_connected(meta)) throw PreconditionError("meta-graph is disconnected");
    if (u_meta < 0 || u_meta >= static_cast<int>(meta.nodes.size()) || !meta.nodes[u_meta].immunised) {
        throw PreconditionError("meta-tree must be rooted at an immunised meta-node");
    }

    MetaTree tree;
    int mcount = static_cast<int>(meta.nodes.size());
    tree.tree_of_meta.assign(mcount, -1);

    std::vector<std::vector<int>> block_sets;
    std::vector<int> cut_metas;

    if (mcount == 1) {
        // Degenerate whole-graph singleton Block.
        block_sets.push_back({u_meta});
    } else {
        BccResult bcc = biconnected_components(meta);
        // Glue biconnected components that share an immunised articulation
        // meta-node: a union of blocks joined at never-removed vertices stays
        // connected under any single vulnerable-meta-node removal.
        Dsu dsu(static_cast<int>(bcc.components.size()));
        std::vector<std::vector<int>> bccs_of_meta(mcount);
        for (size_t c = 0; c < bcc.components.size(); ++c) {
            for (int v : bcc.components[c]) bccs_of_meta[v].push_back(static_cast<int>(c));
        }
        for (int v = 0; v < mcount; ++v) {
            if (bcc.articulation[v] && meta.nodes[v].immunised) {
                for (size_t i = 1; i < bccs_of_meta[v].size(); ++i) {
                    dsu.unite(bccs_of_meta[v][0], bccs_of_meta[v][i]);
                }
            }
        }
        std::map<int, std::vector<int>> merged;
        for (size_t c = 0; c < bcc.components.size(); ++c) {
            auto& verts = merged[dsu.find(static_cast<int>(c))];
            verts.insert(verts.end(), bcc.components[c].begin(), bcc.components[c].end());
        }
        for (auto& [root, verts] : merged) {
            std::sort(verts.begin(), verts.end());
            verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
            block_sets.push_back(std::move(verts));
        }
        std::sort(block_sets.begin(), block_sets.end());
        for (int v = 0; v < mcount; ++v) {
            if (bcc.articulation[v] && !meta.nodes[v].immunised) cut_metas.push_back(v);
        }
    }

    // Tree node ids: Blocks first (sorted by member list), then Cuts (sorted
    // by meta id).
    std::vector<int> cut_node_of_meta(mcount, -1);
    for (const auto& set : block_sets) {
        MetaTreeNode node;
        node.kind = MetaTreeKind::Block;
        node.id = static_cast<int>(tree.nodes.size());
        node.meta_ids = set;
        tree.nodes.push_back(std::move(node));
    }
    for (int cm : cut_metas) {
        MetaTreeNode node;
        node.kind = MetaTreeKind::Cut;
        node.id = static_cast<int>(tree.nodes.size());
        node.meta_ids = {cm};
        cut_node_of_meta[cm] = node.id;
        tree.nodes.push_back(std::move(node));
    }

    std::vector<std::vector<int>> nbrs(tree.nodes.size());
    for (const auto& node : tree.nodes) {
        if (node.kind != MetaTreeKind::Block) continue;
        for (int m : node.meta_ids) {
            if (cut_node_of_meta[m] != -1) {
                nbrs[node.id].push_back(cut_node_of_meta[m]);
                nbrs[cut_node_of_meta[m]].push_back(node.id);
            }
        }
    }

    for (const auto& node : tree.nodes) {
        if (node.kind == MetaTreeKind::Block &&
            std::binary_search(node.meta_ids.begin(), node.meta_ids.end(), u_meta)) {
            tree.root = node.id;
            break;
        }
    }
    if (tree.root < 0) throw InternalError("no block contains u's meta-node");

    // Orient away from the root.
    {
        std::vector<int> order{tree.root};
        std::vector<char> seen(tree.nodes.size(), 0);
        seen[tree.root] = 1;
        for (size_t i = 0; i < order.size(); ++i) {
            int v = order[i];
            for (int w : nbrs[v]) {
                if (seen[w]) continue;
                seen[w] = 1;
                tree.nodes[w].parent = v;
                tree.nodes[v].children.push_back(w);
                order.push_back(w);
            }
        }
        if (order.size() != tree.nodes.size()) throw InternalError("meta-tree is not connected");
        for (auto& node : tree.nodes) std::sort(node.children.begin(), node.children.end());
    }

    // Ownership: a cut meta-node's base nodes live at its Cut tree node,
    // everything else at its unique Block.
    for (auto& node : tree.nodes) {
        if (node.kind == MetaTreeKind::Cut) {
            int m = node.meta_ids[0];
            node.owned = static_cast<long long>(meta.nodes[m].members.size());
            tree.tree_of_meta[m] = node.id;
        } else {
            for (int m : node.meta_ids) {
                if (cut_node_of_meta[m] != -1) continue;
                if (tree.tree_of_meta[m] != -1) throw InternalError("meta-node owned by two blocks");
                tree.tree_of_meta[m] = node.id;
                node.owned += static_cast<long long>(meta.nodes[m].members.size());
            }
        }
    }

    long long n_total = 0;
    for (const auto& node : meta.nodes) n_total += static_cast<long long>(node.members.size());

    // Post-order pass: masses, interior U1 deltas, empty-strategy aggregates.
    std::vector<int> post;
    {
        std::vector<int> stack{tree.root};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            post.push_back(v);
            for (int c : tree.nodes[v].children) stack.push_back(c);
        }
        std::reverse(post.begin(), post.end());
    }
    for (int v : post) {
        auto& node = tree.nodes[v];
        node.subtree_mass = node.owned;
        for (int c : node.children) node.subtree_mass += tree.nodes[c].subtree_mass;
        node.complement_mass = n_total - node.subtree_mass;
    }
    for (int v : post) {
        auto& node = tree.nodes[v];
        node.empty_min_delta = LLONG_MAX;
        for (int c : node.children) {
            const auto& child = tree.nodes[c];
            node.empty_min_delta = std::min(node.empty_min_delta, child.empty_min_delta);
            for (const auto& [d, w] : child.empty_weight_at) node.empty_weight_at[d] += w;
        }
        if (node.kind == MetaTreeKind::Block) {
            for (int m : node.meta_ids) {
                if (meta.nodes[m].immunised || cut_node_of_meta[m] != -1) continue;
                long long sz = static_cast<long long>(meta.nodes[m].members.size());
                long long delta = (n_total - sz) * (n_total - sz);
                node.interior_u1.emplace_back(m, delta);
                node.mtilde[delta] += sz;
                node.empty_min_delta = std::min(node.empty_min_delta, delta);
                node.empty_weight_at[delta] += sz;
            }
        } else {
            long long delta = node.complement_mass * node.complement_mass;
            for (int c : node.children) {
                delta += tree.nodes[c].subtree_mass * tree.nodes[c].subtree_mass;
            }
            long long sz = node.owned;
            node.empty_min_delta = std::min(node.empty_min_delta, delta);
            node.empty_weight_at[delta] += sz;
        }
    }

    // Euler intervals for subtree-membership tests.
    tree.tin.assign(tree.nodes.size(), 0);
    tree.tout.assign(tree.nodes.size(), 0);
    {
        int timer = 0;
        std::function<void(int)> dfs = [&](int v) {
            tree.tin[v] = timer++;
            for (int c : tree.nodes[v].children) dfs(c);
            tree.tout[v] = timer++;
        };
        dfs(tree.root);
    }
    return tree;
}

std::vector<PurchasableBlock> purchasable_blocks(const MetaTree& tree, const MetaGraph& meta) {
    std::vector<PurchasableBlock> out;
    for (const auto& node : tree.nodes) {
        if (node.kind != MetaTreeKind::Block || node.id == tree.root) continue;
        PurchasableBlock pb;
        pb.tree_id = node.id;
        for (int m : node.meta_ids) {
            if (meta.nodes[m].immunised) {
                pb.rep_meta = m;
                break;  // meta ids sorted: smallest immunised wins
            }
        }
        if (pb.rep_meta < 0) throw InternalError("non-root block without an immunised meta-node");
        pb.rep_node = meta.nodes[pb.rep_meta].members.front();
        out.push_back(pb);
    }
    return out;
}

std::map<int, long long> empty_strategy_deltas(const MetaTree& tree, const MetaGraph&, const Network&) {
    std::map<int, long long> out;
    for (const auto& node : tree.nodes) {
        if (node.kind == MetaTreeKind::Cut) {
            long long delta = node.complement_mass * node.complement_mass;
            for (int c : node.children) {
                delta += tree.nodes[c].subtree_mass * tree.nodes[c].subtree_mass;
            }
            out[node.meta_ids[0]] = delta;
        } else {
            for (const auto& [m, delta] : node.interior_u1) out[m] = delta;
        }
    }
    return out;
}

std::string dump_meta(const MetaGraph& meta, const MetaTree& tree) {
    std::ostringstream os;
    os << "meta-graph nodes=" << meta.nodes.size() << "\n";
    for (const auto& node : meta.nodes) {
        os << "  m" << node.id << " " << (node.immunised ? "I" : "U") << " {";
        for (size_t i = 0; i < node.members.size(); ++i) os << (i ? "," : "") << node.members[i];
        os << "}\n";
    }
    os << "  edges:";
    for (const auto& node : meta.nodes) {
        for (int w : meta.adj[node.id]) {
            if (node.id < w) os << " m" << node.id << "-m" << w;
        }
    }
    os << "\n";
    os << "meta-tree root=t" << tree.root << "\n";
    for (const auto& node : tree.nodes) {
        os << "  t" << node.id << " " << (node.kind == MetaTreeKind::Block ? "Block" : "Cut") << " metas={";
        for (size_t i = 0; i < node.meta_ids.size(); ++i) os << (i ? "," : "") << "m" << node.meta_ids[i];
        os << "} owned=" << node.owned << " mass=" << node.subtree_mass << " comp=" << node.complement_mass;
        os << " children=[";
        for (size_t i = 0; i < node.children.size(); ++i) os << (i ? "," : "") << "t" << node.children[i];
        os << "]";
        if (!node.mtilde.empty()) {
            os << " mtilde={";
            bool first = true;
            for (const auto& [d, w] : node.mtilde) {
                os << (first ? "" : ",") << d << ":" << w;
                first = false;
            }
            os << "}";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace netshield
