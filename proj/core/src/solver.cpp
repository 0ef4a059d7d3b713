#include "netshield/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "netshield/errors.hpp"

namespace netshield {

namespace {

long long isqrt_exact(long long x) {
    long long r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(x))));
    while (r > 0 && r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return r;
}

bool better_entry(const DpEntry& a, const DpEntry& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.links < b.links;
}

template <typename Map, typename Key>
void consider(Map& table, const Key& key, DpEntry&& cand) {
    auto it = table.find(key);
    if (it == table.end()) {
        table.emplace(key, std::move(cand));
    } else if (better_entry(cand, it->second)) {
        it->second = std::move(cand);
    }
}

std::vector<int> postorder_of(const MetaTree& tree) {
    std::vector<int> order{tree.root};
    for (size_t i = 0; i < order.size(); ++i) {
        for (int c : tree.nodes[order[i]].children) order.push_back(c);
    }
    std::reverse(order.begin(), order.end());
    return order;
}

long long empty_weight_at(const MetaTreeNode& node, long long delta0) {
    auto it = node.empty_weight_at.find(delta0);
    return it == node.empty_weight_at.end() ? 0 : it->second;
}

bool empty_valid_node(const MetaTreeNode& node, long long delta0, long long m) {
    return node.empty_min_delta >= delta0 && empty_weight_at(node, delta0) == m;
}

}  // namespace

long long SliceTables::entries() const {
    long long total = 0;
    for (const auto& t : per_node) total += static_cast<long long>(t.size());
    return total;
}

SolverContext make_context(const Instance& inst) {
    validate_instance(inst);
    if (!instance_connected(inst)) {
        throw PreconditionError("base network G(empty,*) is disconnected");
    }
    SolverContext ctx;
    ctx.inst = inst;
    ctx.base = base_network(inst, true);
    ctx.meta = build_meta_graph(ctx.base);
    ctx.tree = build_meta_tree(ctx.meta, ctx.meta.node_of[inst.u]);
    ctx.blocks = purchasable_blocks(ctx.tree, ctx.meta);
    ctx.block_of_tree.assign(ctx.tree.nodes.size(), -1);
    for (size_t i = 0; i < ctx.blocks.size(); ++i) {
        ctx.block_of_tree[ctx.blocks[i].tree_id] = static_cast<int>(i);
    }
    for (const auto& mn : ctx.meta.nodes) {
        if (!mn.immunised) ctx.total_vuln_weight += static_cast<long long>(mn.members.size());
    }
    // Not-immunised branch data: u's vulnerable region in G(empty,0) is u plus
    // the vulnerable meta-nodes adjacent to u, and its delta value does not
    // depend on u's links (they die with u).
    Network g0 = base_network(inst, false);
    for (const auto& region : vulnerable_regions(g0)) {
        if (std::binary_search(region.begin(), region.end(), inst.u)) {
            ctx.du = delta_of_region(g0, region);
            ctx.u_region_weight = static_cast<long long>(region.size());
            break;
        }
    }
    return ctx;
}

SliceTables compute_slice(const SolverContext& ctx, long long delta0, long long a_count) {
    const MetaTree& tree = ctx.tree;
    SliceTables slice;
    slice.delta0 = delta0;
    slice.a_count = a_count;
    slice.per_node.resize(tree.nodes.size());
    const Rational alpha = ctx.inst.alpha;

    for (int v : postorder_of(tree)) {
        const MetaTreeNode& node = tree.nodes[v];
        NodeTable& table = slice.per_node[v];
        if (node.kind == MetaTreeKind::Block) {
            // Interior non-articulation vulnerable meta-nodes have a fixed
            // delta; one of them below delta0 makes the whole subtree
            // infeasible for any strategy.
            bool gated = false;
            for (const auto& [m, delta] : node.interior_u1) {
                if (delta < delta0) {
                    gated = true;
                    break;
                }
            }
            if (gated) continue;

            std::map<long long, DpEntry> acc;
            acc.emplace(0, DpEntry{Rational(0), 0, {}, {}});
            for (int c : node.children) {
                const NodeTable& child = slice.per_node[c];
                std::map<long long, DpEntry> next;
                for (const auto& [m1, e1] : acc) {
                    for (const auto& [mc, ec] : child) {
                        DpEntry cand;
                        cand.value = e1.value + ec.value;
                        cand.links = e1.links + ec.links;
                        cand.child_m = e1.child_m;
                        cand.child_m.push_back(mc);
                        consider(next, m1 + mc, std::move(cand));
                    }
                }
                acc = std::move(next);
                if (acc.empty()) break;
            }
            long long mt = 0;
            if (auto it = node.mtilde.find(delta0); it != node.mtilde.end()) mt = it->second;
            Rational bonus;
            if (mt > 0) bonus = make_rational(isqrt_exact(delta0) * mt, a_count);
            for (auto& [m, e] : acc) {
                DpEntry out = std::move(e);
                out.value += bonus;
                table.emplace(m + mt, std::move(out));
            }
        } else {
            // Cut: one pass per child Block, keyed by (m so far, linked
            // subtree mass t, linked squared mass q). For a child where the
            // empty strategy realizes the guessed m the table max is the
            // empty strategy itself, so u either leaves it alone or buys one
            // bare link into it; otherwise the child's strategy is non-empty
            // and already links the subtree.
            using Key = std::tuple<long long, long long, long long>;
            std::map<Key, DpEntry> prefix;
            prefix.emplace(Key{0, 0, 0}, DpEntry{Rational(0), 0, {}, {}});
            long long q_all = 0;
            for (int c : node.children) {
                q_all += tree.nodes[c].subtree_mass * tree.nodes[c].subtree_mass;
            }
            for (int c : node.children) {
                const MetaTreeNode& child = tree.nodes[c];
                const NodeTable& child_table = slice.per_node[c];
                long long tj = child.subtree_mass;
                std::map<Key, DpEntry> next;
                for (const auto& [key, e] : prefix) {
                    auto [m, t, q] = key;
                    for (const auto& [mc, ec] : child_table) {
                        if (empty_valid_node(child, delta0, mc)) {
                            {
                                DpEntry cand;
                                cand.value = e.value + ec.value;
                                cand.links = e.links + ec.links;
                                cand.child_m = e.child_m;
                                cand.child_m.push_back(mc);
                                cand.child_action = e.child_action;
                                cand.child_action.push_back(CutAction::Skip);
                                consider(next, Key{m + mc, t, q}, std::move(cand));
                            }
                            {
                                DpEntry cand;
                                cand.value = e.value + ec.value - alpha;
                                cand.links = e.links + ec.links + 1;
                                cand.child_m = e.child_m;
                                cand.child_m.push_back(mc);
                                cand.child_action = e.child_action;
                                cand.child_action.push_back(CutAction::PureLink);
                                consider(next, Key{m + mc, t + tj, q + tj * tj}, std::move(cand));
                            }
                        } else {
                            DpEntry cand;
                            cand.value = e.value + ec.value;
                            cand.links = e.links + ec.links;
                            cand.child_m = e.child_m;
                            cand.child_m.push_back(mc);
                            cand.child_action = e.child_action;
                            cand.child_action.push_back(CutAction::UseChildBr);
                            consider(next, Key{m + mc, t + tj, q + tj * tj}, std::move(cand));
                        }
                    }
                }
                prefix = std::move(next);
                if (prefix.empty()) break;
            }
            // The cut's own delta is (|T-bar| + t)^2 + (Q_all - q): its
            // region's removal leaves u's side (complement plus linked
            // subtrees) and each unlinked child subtree as components.
            long long comp = node.complement_mass;
            long long weight = node.owned;
            for (auto& [key, e] : prefix) {
                auto [m, t, q] = key;
                long long d = (comp + t) * (comp + t) + (q_all - q);
                if (d < delta0) continue;
                DpEntry out = std::move(e);
                long long m_out = m;
                if (d == delta0) {
                    m_out += weight;
                    out.value += make_rational(weight * (comp + t), a_count);
                }
                consider(table, m_out, std::move(out));
            }
        }
    }
    return slice;
}

std::vector<int> reconstruct_blocks(const SolverContext& ctx, const SliceTables& slice, int tree_node, long long m) {
    std::vector<int> out;
    struct Frame {
        int node;
        long long m;
    };
    std::vector<Frame> stack{{tree_node, m}};
    while (!stack.empty()) {
        auto [v, mv] = stack.back();
        stack.pop_back();
        const NodeTable& table = slice.per_node[v];
        auto it = table.find(mv);
        if (it == table.end()) throw InternalError("reconstruction walked into a missing table entry");
        const DpEntry& e = it->second;
        const MetaTreeNode& node = ctx.tree.nodes[v];
        if (e.child_m.size() != node.children.size()) {
            throw InternalError("reconstruction record does not match the child list");
        }
        for (size_t i = 0; i < node.children.size(); ++i) {
            int c = node.children[i];
            if (node.kind == MetaTreeKind::Block) {
                stack.push_back({c, e.child_m[i]});
            } else {
                switch (e.child_action[i]) {
                    case CutAction::Skip:
                        break;
                    case CutAction::PureLink:
                        out.push_back(c);
                        break;
                    case CutAction::UseChildBr:
                        stack.push_back({c, e.child_m[i]});
                        break;
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Strategy materialize_strategy(const SolverContext& ctx, const std::vector<int>& block_tree_ids, bool immunised) {
    Strategy s;
    s.immunised = immunised;
    for (int id : block_tree_ids) {
        int idx = ctx.block_of_tree[id];
        if (idx < 0) throw InternalError("materializing a non-purchasable block");
        s.links.push_back(ctx.blocks[idx].rep_node);
    }
    std::sort(s.links.begin(), s.links.end());
    return s;
}

namespace {

Network network_with_blocks(const SolverContext& ctx, const std::vector<int>& block_tree_ids) {
    return build_network(ctx.inst, materialize_strategy(ctx, block_tree_ids, true));
}

// Delta and u's component size when attacking the given meta-node's region,
// by plain search on the materialized network.
std::pair<long long, long long> attack_meta(const SolverContext& ctx, const Network& net, int meta_id) {
    const auto& members = ctx.meta.nodes[meta_id].members;
    std::vector<char> alive(net.n, 1);
    for (PlayerId v : members) alive[v] = 0;
    std::vector<char> seen(net.n, 0);
    long long delta = 0, cc_u = 0;
    std::vector<PlayerId> stack;
    for (PlayerId s = 0; s < net.n; ++s) {
        if (!alive[s] || seen[s]) continue;
        long long size = 0;
        bool holds_u = false;
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            PlayerId v = stack.back();
            stack.pop_back();
            ++size;
            if (v == ctx.inst.u) holds_u = true;
            for (PlayerId w : net.adj[v]) {
                if (alive[w] && !seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        delta += size * size;
        if (holds_u) cc_u = size;
    }
    return {delta, cc_u};
}

// Vulnerable meta-nodes whose owning tree node lies in T(v).
std::vector<int> vulnerable_metas_in_subtree(const SolverContext& ctx, int tree_node) {
    std::vector<int> out;
    for (const auto& mn : ctx.meta.nodes) {
        if (mn.immunised) continue;
        int owner = ctx.tree.tree_of_meta[mn.id];
        if (owner >= 0 && ctx.tree.in_subtree(tree_node, owner)) out.push_back(mn.id);
    }
    return out;
}

}  // namespace

long long delta_of_meta_under(const SolverContext& ctx, const std::vector<int>& block_tree_ids, int meta_id) {
    Network net = network_with_blocks(ctx, block_tree_ids);
    return attack_meta(ctx, net, meta_id).first;
}

std::vector<int> restricted_attack_set(const SolverContext& ctx, const std::vector<int>& block_tree_ids,
                                       long long delta0, int tree_node) {
    Network net = network_with_blocks(ctx, block_tree_ids);
    std::vector<int> out;
    for (int m : vulnerable_metas_in_subtree(ctx, tree_node)) {
        if (attack_meta(ctx, net, m).first == delta0) out.push_back(m);
    }
    return out;
}

std::optional<Rational> restricted_utility_eval(const SolverContext& ctx, const std::vector<int>& block_tree_ids,
                                                long long delta0, long long a_count, int tree_node) {
    Network net = network_with_blocks(ctx, block_tree_ids);
    long long benefit = 0;
    for (int m : vulnerable_metas_in_subtree(ctx, tree_node)) {
        auto [delta, cc_u] = attack_meta(ctx, net, m);
        if (delta < delta0) return std::nullopt;
        if (delta == delta0) {
            benefit += static_cast<long long>(ctx.meta.nodes[m].members.size()) * cc_u;
        }
    }
    long long links_inside = 0;
    for (int id : block_tree_ids) {
        if (ctx.tree.in_subtree(tree_node, id)) ++links_inside;
    }
    return -(ctx.inst.alpha * make_rational(links_inside)) + make_rational(benefit, a_count);
}

bool empty_valid(const SolverContext& ctx, int tree_node, long long delta0, long long m) {
    return empty_valid_node(ctx.tree.nodes[tree_node], delta0, m);
}

namespace {

struct Candidate {
    Rational utility;
    long long links = 0;
    bool immunised = false;
    BrBranch branch = BrBranch::Immunised;
    bool direct = false;   // bare empty-strategy candidate
    long long delta0 = 0;  // slice coordinates for table candidates
    long long a_count = 0;
    long long m = 0;
};

std::vector<int> blocks_of_candidate(const SolverContext& ctx, const Candidate& c) {
    if (c.direct) return {};
    SliceTables slice = compute_slice(ctx, c.delta0, c.a_count);
    return reconstruct_blocks(ctx, slice, ctx.tree.root, c.m);
}

}  // namespace

BestResponse best_response(const SolverContext& ctx) {
    const Instance& inst = ctx.inst;
    const long long n = inst.n;

    bool have_best = false;
    Candidate best;
    std::optional<std::vector<int>> best_blocks;  // reconstructed lazily
    long long slices = 0, table_entries = 0;

    auto offer = [&](const Candidate& cand) {
        if (!have_best) {
            best = cand;
            best_blocks.reset();
            have_best = true;
            return;
        }
        if (cand.utility != best.utility) {
            if (cand.utility < best.utility) return;
        } else if (cand.links != best.links) {
            if (cand.links > best.links) return;
        } else if (cand.immunised != best.immunised) {
            if (cand.immunised) return;
        } else {
            // Full value tie: lexicographically smallest block-id set wins.
            if (!best_blocks) best_blocks = blocks_of_candidate(ctx, best);
            std::vector<int> blocks = blocks_of_candidate(ctx, cand);
            if (!(blocks < *best_blocks)) return;
            best = cand;
            best_blocks = std::move(blocks);
            return;
        }
        best = cand;
        best_blocks.reset();
    };

    // The bare strategies are always candidates: (empty,0) dominates every
    // strategy whose only attacked region is u's own, and (empty,1) covers
    // the no-vulnerable-nodes case.
    for (bool imm : {false, true}) {
        Candidate c;
        c.direct = true;
        c.immunised = imm;
        c.links = 0;
        Strategy s;
        s.immunised = imm;
        c.utility = player_utility(inst, s, inst.u, Adversary::MaxDisruption);
        c.branch = BrBranch::Immunised;
        if (!imm) {
            // u vulnerable: u's own region is attacked iff its delta is the minimum.
            Network net = build_network(inst, s);
            c.branch = BrBranch::NotImmSafe;
            for (const auto& region : attack_targets(net, Adversary::MaxDisruption)) {
                if (std::binary_search(region.begin(), region.end(), inst.u)) {
                    c.branch = BrBranch::NotImmAttacked;
                    break;
                }
            }
        }
        offer(c);
    }

    if (ctx.total_vuln_weight > 0) {
        for (long long delta0 = 0; delta0 <= n * n; ++delta0) {
            for (long long a = 1; a <= n; ++a) {
                SliceTables slice = compute_slice(ctx, delta0, a);
                ++slices;
                table_entries += slice.entries();
                const NodeTable& root = slice.per_node[ctx.tree.root];

                // Immunised: the minimum delta is delta0 and all |A| = a
                // attacked nodes sit in the tree.
                if (auto it = root.find(a); it != root.end()) {
                    Candidate c;
                    c.utility = it->second.value - inst.beta;
                    c.links = it->second.links;
                    c.immunised = true;
                    c.branch = BrBranch::Immunised;
                    c.delta0 = delta0;
                    c.a_count = a;
                    c.m = a;
                    offer(c);
                    // Not immunised and safe: u's fixed region delta exceeds
                    // delta0, so u is never attacked and pays no beta.
                    if (delta0 < ctx.du) {
                        Candidate s = c;
                        s.utility = it->second.value;
                        s.immunised = false;
                        s.branch = BrBranch::NotImmSafe;
                        offer(s);
                    }
                }
                // Not immunised, u's region attacked: denominator a counts
                // u's region too; the other a - |W(u)| attacked nodes come
                // from the tree (at least one by Remark 1).
                if (delta0 == ctx.du && a > ctx.u_region_weight) {
                    long long m = a - ctx.u_region_weight;
                    if (auto it = root.find(m); it != root.end()) {
                        Candidate c;
                        c.utility = it->second.value;
                        c.links = it->second.links;
                        c.immunised = false;
                        c.branch = BrBranch::NotImmAttacked;
                        c.delta0 = delta0;
                        c.a_count = a;
                        c.m = m;
                        offer(c);
                    }
                }
            }
        }
    }

    if (!best_blocks) best_blocks = blocks_of_candidate(ctx, best);
    BestResponse res;
    res.strategy = best.direct ? Strategy{{}, best.immunised}
                               : materialize_strategy(ctx, *best_blocks, best.immunised);
    res.utility = best.utility;
    res.branch = best.branch;
    res.slices = slices;
    res.table_entries = table_entries;

    // Reconstruction must replay to a strategy whose direct evaluation
    // matches the table value exactly.
    Rational check = player_utility(inst, res.strategy, inst.u, Adversary::MaxDisruption);
    if (check != res.utility) {
        throw InternalError("best-response reconstruction does not evaluate to the table value");
    }

    if (best.direct) {
        Network net = build_network(inst, res.strategy);
        auto targets = weighted_target_count(net, Adversary::MaxDisruption);
        if (targets.empty()) {
            res.delta0 = 0;
            res.a_count = 0;
        } else {
            res.delta0 = delta_of_region(net, targets.front().first);
            for (const auto& [region, w] : targets) res.a_count += w;
        }
    } else {
        res.delta0 = best.delta0;
        res.a_count = best.a_count;
    }
    return res;
}

BestResponse best_response(const Instance& inst) {
    SolverContext ctx = make_context(inst);
    return best_response(ctx);
}

}  // namespace netshield
