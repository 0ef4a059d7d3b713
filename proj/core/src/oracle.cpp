#include "netshield/oracle.hpp"

#include <algorithm>

#include "netshield/errors.hpp"

namespace netshield {

namespace {

// Shared tie-break: higher utility, then fewer links, then not immunised,
// then lexicographically smallest endpoint set.
bool better_result(const Rational& u_a, const Strategy& a, const Rational& u_b, const Strategy& b) {
    if (u_a != u_b) return u_a > u_b;
    if (a.links.size() != b.links.size()) return a.links.size() < b.links.size();
    if (a.immunised != b.immunised) return !a.immunised;
    return a.links < b.links;
}

OracleResult scan_space(const Instance& inst, Adversary adversary,
                        const std::vector<std::vector<PlayerId>>& link_choices) {
    OracleResult best;
    bool have = false;
    for (const auto& links : link_choices) {
        for (int imm = 0; imm <= 1; ++imm) {
            Strategy s{links, imm == 1};
            Rational utility = player_utility(inst, s, inst.u, adversary);
            if (!have || better_result(utility, s, best.utility, best.strategy)) {
                best = {std::move(s), std::move(utility)};
                have = true;
            }
        }
    }
    return best;
}

}  // namespace

OracleResult brute_force_best_response(const Instance& inst, Adversary adversary, SearchSpace space) {
    validate_instance(inst);
    if (space == SearchSpace::FullRaw) {
        if (inst.n > kFullRawCap) {
            throw PreconditionError("FullRaw oracle refused: n exceeds the cap of " +
                                    std::to_string(kFullRawCap));
        }
        std::vector<PlayerId> others;
        for (PlayerId v = 0; v < inst.n; ++v) {
            if (v != inst.u) others.push_back(v);
        }
        std::vector<std::vector<PlayerId>> choices;
        choices.reserve(1u << others.size());
        for (unsigned mask = 0; mask < (1u << others.size()); ++mask) {
            std::vector<PlayerId> links;
            for (size_t i = 0; i < others.size(); ++i) {
                if (mask & (1u << i)) links.push_back(others[i]);
            }
            choices.push_back(std::move(links));
        }
        return scan_space(inst, adversary, choices);
    }

    SolverContext ctx = make_context(inst);
    if (static_cast<int>(ctx.blocks.size()) > kReducedBlocksCap) {
        throw PreconditionError("ReducedBlocks oracle refused: too many purchasable blocks");
    }
    std::vector<std::vector<PlayerId>> choices;
    choices.reserve(1u << ctx.blocks.size());
    for (unsigned mask = 0; mask < (1u << ctx.blocks.size()); ++mask) {
        std::vector<PlayerId> links;
        for (size_t i = 0; i < ctx.blocks.size(); ++i) {
            if (mask & (1u << i)) links.push_back(ctx.blocks[i].rep_node);
        }
        std::sort(links.begin(), links.end());
        choices.push_back(std::move(links));
    }
    return scan_space(inst, adversary, choices);
}

std::optional<Rational> brute_force_restricted(const SolverContext& ctx, long long delta0, long long a_count,
                                               int tree_node, long long m) {
    std::vector<int> inside;
    for (const auto& pb : ctx.blocks) {
        if (ctx.tree.in_subtree(tree_node, pb.tree_id)) inside.push_back(pb.tree_id);
    }
    if (static_cast<int>(inside.size()) > kReducedBlocksCap) {
        throw PreconditionError("restricted oracle refused: too many purchasable blocks in the subtree");
    }

    std::optional<Rational> best;
    size_t best_links = 0;
    for (unsigned mask = 0; mask < (1u << inside.size()); ++mask) {
        std::vector<int> blocks;
        for (size_t i = 0; i < inside.size(); ++i) {
            if (mask & (1u << i)) blocks.push_back(inside[i]);
        }
        auto value = restricted_utility_eval(ctx, blocks, delta0, a_count, tree_node);
        if (!value) continue;
        long long weight = 0;
        for (int meta : restricted_attack_set(ctx, blocks, delta0, tree_node)) {
            weight += static_cast<long long>(ctx.meta.nodes[meta].members.size());
        }
        if (weight != m) continue;
        if (!best || *value > *best || (*value == *best && blocks.size() < best_links)) {
            best = std::move(value);
            best_links = blocks.size();
        }
    }
    return best;
}

std::vector<VulnRegion> welfare_argmin_targets(const Instance& inst, const Strategy& strategy) {
    Network net = build_network(inst, strategy);
    auto regions = vulnerable_regions(net);
    if (regions.empty()) return {};

    // Benefit sum accumulated node by node, independent of delta_of_region.
    std::vector<long long> benefit(regions.size(), 0);
    long long best = -1;
    for (size_t i = 0; i < regions.size(); ++i) {
        AttackOutcome out = attack(net, regions[i]);
        for (const auto& comp : out.surviving_components) {
            for (PlayerId v : comp) {
                (void)v;
                benefit[i] += static_cast<long long>(comp.size());
            }
        }
        if (best < 0 || benefit[i] < best) best = benefit[i];
    }
    std::vector<VulnRegion> out;
    for (size_t i = 0; i < regions.size(); ++i) {
        if (benefit[i] == best) out.push_back(regions[i]);
    }
    return out;
}

CompareOutcome compare_best_response(const Instance& inst, SearchSpace space) {
    CompareOutcome out;
    out.solver = best_response(inst);
    out.oracle = brute_force_best_response(inst, Adversary::MaxDisruption, space);
    out.match = out.solver.utility == out.oracle.utility;
    return out;
}

}  // namespace netshield
