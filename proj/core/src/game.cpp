#include "netshield/game.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "netshield/errors.hpp"

namespace netshield {

namespace {

void check_player(const Instance& inst, PlayerId p, const char* what) {
    if (p < 0 || p >= inst.n) {
        throw InputError(InputError::Kind::Semantic,
                         std::string(what) + " out of range: " + std::to_string(p));
    }
}

// Connected components of the graph restricted to nodes with alive[v] true.
std::vector<std::vector<PlayerId>> components_among(const Network& net, const std::vector<char>& alive) {
    std::vector<std::vector<PlayerId>> comps;
    std::vector<char> seen(net.n, 0);
    std::vector<PlayerId> stack;
    for (PlayerId s = 0; s < net.n; ++s) {
        if (!alive[s] || seen[s]) continue;
        std::vector<PlayerId> comp;
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            PlayerId v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (PlayerId w : net.adj[v]) {
                if (alive[w] && !seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

bool is_region_of(const Network& net, const VulnRegion& target) {
    auto regions = vulnerable_regions(net);
    return std::find(regions.begin(), regions.end(), target) != regions.end();
}

}  // namespace

bool Network::has_edge(PlayerId a, PlayerId b) const {
    return std::binary_search(adj[a].begin(), adj[a].end(), b);
}

void validate_instance(const Instance& inst) {
    if (inst.n < 1) throw InputError(InputError::Kind::Semantic, "n must be at least 1");
    check_player(inst, inst.u, "u");
    if (static_cast<int>(inst.others_links.size()) != inst.n ||
        static_cast<int>(inst.others_immunised.size()) != inst.n) {
        throw InputError(InputError::Kind::Semantic, "per-player tables must have n entries");
    }
    if (!inst.others_links[inst.u].empty()) {
        throw InputError(InputError::Kind::Semantic, "u must not carry links in the instance");
    }
    for (PlayerId v = 0; v < inst.n; ++v) {
        for (PlayerId w : inst.others_links[v]) {
            check_player(inst, w, "link endpoint");
            if (w == v) throw InputError(InputError::Kind::Semantic, "self-link at player " + std::to_string(v));
        }
    }
    if (inst.alpha <= 0) throw InputError(InputError::Kind::Semantic, "alpha must be positive");
    if (inst.beta <= 0) throw InputError(InputError::Kind::Semantic, "beta must be positive");
}

Strategy canonical_strategy(const Instance& inst, Strategy s) {
    for (PlayerId w : s.links) {
        check_player(inst, w, "strategy endpoint");
        if (w == inst.u) throw InputError(InputError::Kind::Semantic, "strategy must not link u to itself");
    }
    std::sort(s.links.begin(), s.links.end());
    s.links.erase(std::unique(s.links.begin(), s.links.end()), s.links.end());
    return s;
}

Network build_network(const Instance& inst, const Strategy& strategy) {
    Strategy s = canonical_strategy(inst, strategy);
    Network net;
    net.n = inst.n;
    net.adj.assign(inst.n, {});
    net.immunised.assign(inst.n, 0);
    for (PlayerId v = 0; v < inst.n; ++v) {
        if (v != inst.u) net.immunised[v] = inst.others_immunised[v];
    }
    net.immunised[inst.u] = s.immunised ? 1 : 0;

    auto add_edge = [&](PlayerId a, PlayerId b) {
        net.adj[a].push_back(b);
        net.adj[b].push_back(a);
    };
    for (PlayerId v = 0; v < inst.n; ++v) {
        for (PlayerId w : inst.others_links[v]) add_edge(v, w);
    }
    for (PlayerId w : s.links) add_edge(inst.u, w);

    for (auto& nbrs : net.adj) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    return net;
}

Network base_network(const Instance& inst, bool u_immunised) {
    Strategy empty;
    empty.immunised = u_immunised;
    return build_network(inst, empty);
}

bool network_connected(const Network& net) {
    std::vector<char> alive(net.n, 1);
    return components_among(net, alive).size() <= 1;
}

bool instance_connected(const Instance& inst) {
    return network_connected(base_network(inst, false));
}

std::vector<VulnRegion> vulnerable_regions(const Network& net) {
    std::vector<char> vulnerable(net.n);
    for (PlayerId v = 0; v < net.n; ++v) vulnerable[v] = !net.immunised[v];
    // components_among scans nodes in ascending order, so regions come out
    // sorted by smallest member.
    Network sub = net;
    for (PlayerId v = 0; v < net.n; ++v) {
        std::vector<PlayerId> kept;
        for (PlayerId w : net.adj[v]) {
            if (vulnerable[v] && vulnerable[w]) kept.push_back(w);
        }
        sub.adj[v] = std::move(kept);
    }
    return components_among(sub, vulnerable);
}

AttackOutcome attack(const Network& net, const VulnRegion& target) {
    if (!is_region_of(net, target)) {
        throw InputError(InputError::Kind::Semantic, "attack target is not a vulnerable region of this network");
    }
    AttackOutcome out;
    out.destroyed = target;
    std::vector<char> alive(net.n, 1);
    for (PlayerId v : target) alive[v] = 0;
    out.surviving_components = components_among(net, alive);
    return out;
}

long long delta_of_region(const Network& net, const VulnRegion& target) {
    AttackOutcome out = attack(net, target);
    long long delta = 0;
    for (const auto& comp : out.surviving_components) {
        long long size = static_cast<long long>(comp.size());
        delta += size * size;
    }
    return delta;
}

std::vector<VulnRegion> attack_targets(const Network& net, Adversary adversary) {
    auto regions = vulnerable_regions(net);
    if (regions.empty()) return {};
    switch (adversary) {
        case Adversary::Random:
            return regions;
        case Adversary::MaxCarnage: {
            size_t biggest = 0;
            for (const auto& r : regions) biggest = std::max(biggest, r.size());
            std::vector<VulnRegion> out;
            for (const auto& r : regions) {
                if (r.size() == biggest) out.push_back(r);
            }
            return out;
        }
        case Adversary::MaxDisruption: {
            long long best = -1;
            std::vector<long long> deltas;
            deltas.reserve(regions.size());
            for (const auto& r : regions) {
                long long d = delta_of_region(net, r);
                deltas.push_back(d);
                if (best < 0 || d < best) best = d;
            }
            std::vector<VulnRegion> out;
            for (size_t i = 0; i < regions.size(); ++i) {
                if (deltas[i] == best) out.push_back(regions[i]);
            }
            return out;
        }
    }
    return {};
}

std::vector<std::pair<VulnRegion, long long>> weighted_target_count(const Network& net, Adversary adversary) {
    std::vector<std::pair<VulnRegion, long long>> out;
    for (auto& region : attack_targets(net, adversary)) {
        long long members = static_cast<long long>(region.size());
        out.emplace_back(std::move(region), members);
    }
    return out;
}

Rational player_utility(const Instance& inst, const Strategy& strategy, PlayerId player, Adversary adversary) {
    check_player(inst, player, "player");
    Strategy s = canonical_strategy(inst, strategy);
    Network net = build_network(inst, s);

    long long links = player == inst.u ? static_cast<long long>(s.links.size())
                                       : static_cast<long long>(inst.others_links[player].size());
    bool immunised = net.immunised[player];

    Rational utility = -(inst.alpha * make_rational(links));
    if (immunised) utility -= inst.beta;

    auto targets = weighted_target_count(net, adversary);
    if (targets.empty()) {
        // No vulnerable node anywhere: nothing is attacked and the player
        // keeps their whole component.
        std::vector<char> alive(net.n, 1);
        for (const auto& comp : components_among(net, alive)) {
            if (std::binary_search(comp.begin(), comp.end(), player)) {
                utility += make_rational(static_cast<long long>(comp.size()));
                break;
            }
        }
        return utility;
    }

    long long total_weight = 0;
    long long benefit_units = 0;
    for (const auto& [region, weight] : targets) {
        total_weight += weight;
        AttackOutcome out = attack(net, region);
        for (const auto& comp : out.surviving_components) {
            if (std::binary_search(comp.begin(), comp.end(), player)) {
                benefit_units += weight * static_cast<long long>(comp.size());
                break;
            }
        }
    }
    utility += make_rational(benefit_units, total_weight);
    return utility;
}

Rational social_welfare(const Instance& inst, const Strategy& strategy, Adversary adversary) {
    Rational sum;
    for (PlayerId v = 0; v < inst.n; ++v) sum += player_utility(inst, strategy, v, adversary);
    return sum;
}

long long delta_of_player_region(const Instance& inst, const Strategy& strategy, PlayerId player) {
    check_player(inst, player, "player");
    Network net = build_network(inst, canonical_strategy(inst, strategy));
    if (net.immunised[player]) {
        throw std::domain_error("delta_of_player_region: player is immunised");
    }
    for (const auto& region : vulnerable_regions(net)) {
        if (std::binary_search(region.begin(), region.end(), player)) {
            return delta_of_region(net, region);
        }
    }
    throw InternalError("vulnerable player not covered by any region");
}

}  // namespace netshield
