#pragma once

#include <optional>

#include "netshield/solver.hpp"

namespace netshield {

// Brute-force search spaces. FullRaw: all subsets of N\{u} crossed with the
// immunisation bit. ReducedBlocks: subsets of purchasable blocks (endpoints
// materialized through their representatives) crossed with the bit.
enum class SearchSpace { FullRaw, ReducedBlocks };

struct OracleResult {
    Strategy strategy;
    Rational utility;
};

inline constexpr int kFullRawCap = 14;        // max n for FullRaw
inline constexpr int kReducedBlocksCap = 20;  // max #purchasable blocks

// Exact argmax of player_utility over the space, ties broken like the
// solver: fewer links, then not immunised, then lexicographically smallest
// endpoint set. PreconditionError when the space exceeds its cap.
OracleResult brute_force_best_response(const Instance& inst, Adversary adversary, SearchSpace space);

// Exact maximum of restricted_utility_eval over subsets of purchasable
// blocks inside T(v) meeting the (delta0, m) validity conditions; nothing if
// no subset qualifies.
std::optional<Rational> brute_force_restricted(const SolverContext& ctx, long long delta0, long long a_count,
                                               int tree_node, long long m);

// Enumerates every region and computes the post-attack welfare benefit sum
// node by node; returns the argmin set. Must coincide with
// attack_targets(MaxDisruption).
std::vector<VulnRegion> welfare_argmin_targets(const Instance& inst, const Strategy& strategy);

struct CompareOutcome {
    BestResponse solver;
    OracleResult oracle;
    bool match = false;  // exact utility equality
};

// Runs the dynamic program and the brute-force oracle on the same instance.
CompareOutcome compare_best_response(const Instance& inst, SearchSpace space);

}  // namespace netshield
