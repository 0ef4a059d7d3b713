#pragma once

#include <utility>
#include <vector>

#include "netshield/rational.hpp"

namespace netshield {

using PlayerId = int;

enum class Adversary { MaxCarnage, Random, MaxDisruption };

// u's decision: the endpoints u buys links to (sorted, unique, never u
// itself) plus an immunisation bit.
struct Strategy {
    std::vector<PlayerId> links;
    bool immunised = false;
};

// The fixed world: link sets and immunisation bits of every player except u,
// plus the prices. others_links[u] must stay empty.
struct Instance {
    int n = 0;
    PlayerId u = 0;
    std::vector<std::vector<PlayerId>> others_links;
    std::vector<char> others_immunised;
    Rational alpha;
    Rational beta;
};

struct Network {
    int n = 0;
    std::vector<std::vector<PlayerId>> adj;  // sorted neighbour lists
    std::vector<char> immunised;

    bool has_edge(PlayerId a, PlayerId b) const;
};

// Maximal connected set of vulnerable nodes, sorted ascending. An attack on
// any member destroys the whole region.
using VulnRegion = std::vector<PlayerId>;

struct AttackOutcome {
    std::vector<PlayerId> destroyed;
    std::vector<std::vector<PlayerId>> surviving_components;
};

// Throws InputError on malformed instances (self-links, bad ids, bad prices).
void validate_instance(const Instance& inst);

// Sorts and dedups the link set; rejects endpoints outside [0,n) or equal to u.
Strategy canonical_strategy(const Instance& inst, Strategy s);

Network build_network(const Instance& inst, const Strategy& strategy);

// G(empty, i): only the other players' links, u's immunisation forced to the
// given bit. The meta decomposition always works on G(empty, 1).
Network base_network(const Instance& inst, bool u_immunised);

bool network_connected(const Network& net);

// Whether G(empty, *) is connected: the solver precondition. Reported as a
// flag rather than a parse error so oracle workflows can keep disconnected
// instances.
bool instance_connected(const Instance& inst);

// Maximal connected components of the vulnerable-induced subgraph, sorted by
// smallest member.
std::vector<VulnRegion> vulnerable_regions(const Network& net);

// target must be one of the network's regions (InputError otherwise).
AttackOutcome attack(const Network& net, const VulnRegion& target);

// Sum of squared surviving-component sizes after destroying the target
// region. Equals the sum over all nodes t of |CC_t| by double counting.
long long delta_of_region(const Network& net, const VulnRegion& target);

// Random: all regions. MaxCarnage: regions of maximum cardinality.
// MaxDisruption: regions of minimum delta value. Empty iff no vulnerable
// node exists.
std::vector<VulnRegion> attack_targets(const Network& net, Adversary adversary);

// The averaging measure for utilities: each target region paired with the
// number of its nodes the adversary may pick (the attack is uniform over
// target nodes, so a region weighs as many cases as it has members).
std::vector<std::pair<VulnRegion, long long>> weighted_target_count(const Network& net, Adversary adversary);

// -alpha * |links| - (immunised ? beta : 0) + weighted average over attack
// targets of the player's surviving component size (0 if destroyed). With no
// targets the benefit is the size of the player's component (= n on
// connected networks: no attack happens and everything survives).
Rational player_utility(const Instance& inst, const Strategy& strategy, PlayerId player, Adversary adversary);

Rational social_welfare(const Instance& inst, const Strategy& strategy, Adversary adversary);

// Delta value of the region containing the player; std::domain_error if the
// player is immunised in the resulting network.
long long delta_of_player_region(const Instance& inst, const Strategy& strategy, PlayerId player);

}  // namespace netshield
