#include "netshield/instance_io.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "json.hpp"
#include "netshield/errors.hpp"

namespace netshield {

namespace {

using nlohmann::json;

[[noreturn]] void semantic(const std::string& msg) {
    throw InputError(InputError::Kind::Semantic, msg);
}

int require_int(const json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_number_integer()) {
        semantic(std::string("missing or non-integer field '") + field + "'");
    }
    return j.at(field).get<int>();
}

Rational require_positive_fraction(const json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_string()) {
        semantic(std::string("missing or non-string field '") + field + "'");
    }
    auto parsed = parse_fraction(j.at(field).get<std::string>());
    if (!parsed) semantic(std::string("malformed fraction in '") + field + "'");
    if (*parsed <= 0) semantic(std::string("'") + field + "' must be positive");
    return *parsed;
}

// Deterministic uniform draw in [0,1) from the raw 64-bit stream; the
// standard distributions are implementation-defined, this is not.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Instance draw_instance(std::mt19937_64& rng, int n, double edge_prob, double immun_prob,
                       const Rational& alpha, const Rational& beta) {
    Instance inst;
    inst.n = n;
    inst.u = 0;
    inst.others_links.assign(n, {});
    inst.others_immunised.assign(n, 0);
    for (PlayerId a = 0; a < n; ++a) {
        for (PlayerId b = a + 1; b < n; ++b) {
            if (uniform01(rng) >= edge_prob) continue;
            PlayerId owner;
            if (a == inst.u) {
                owner = b;  // edges touching u must be owned by the far side
            } else {
                owner = (rng() & 1) ? a : b;
            }
            inst.others_links[owner].push_back(owner == a ? b : a);
        }
    }
    for (PlayerId v = 0; v < n; ++v) {
        if (v == inst.u) continue;
        inst.others_immunised[v] = uniform01(rng) < immun_prob ? 1 : 0;
    }
    for (auto& links : inst.others_links) std::sort(links.begin(), links.end());
    inst.alpha = alpha;
    inst.beta = beta;
    return inst;
}

void check_generate_params(int n, double edge_prob, double immun_prob, const Rational& alpha,
                           const Rational& beta) {
    if (n < 1) semantic("generator needs n >= 1");
    if (edge_prob < 0.0 || edge_prob > 1.0) semantic("edge_prob must lie in [0,1]");
    if (immun_prob < 0.0 || immun_prob > 1.0) semantic("immun_prob must lie in [0,1]");
    if (alpha <= 0) semantic("alpha must be positive");
    if (beta <= 0) semantic("beta must be positive");
}

}  // namespace

Instance parse_instance(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::exception& e) {
        throw InputError(InputError::Kind::Syntax, e.what());
    }
    if (!j.is_object()) semantic("instance file must be a JSON object");

    if (require_int(j, "version") != kInstanceFileVersion) semantic("unsupported instance file version");
    Instance inst;
    inst.n = require_int(j, "n");
    if (inst.n < 1) semantic("n must be at least 1");
    inst.u = require_int(j, "u");
    if (inst.u < 0 || inst.u >= inst.n) semantic("u out of range");
    inst.alpha = require_positive_fraction(j, "alpha");
    inst.beta = require_positive_fraction(j, "beta");
    inst.others_links.assign(inst.n, {});
    inst.others_immunised.assign(inst.n, 0);

    if (!j.contains("players") || !j.at("players").is_array()) semantic("missing 'players' array");
    std::set<int> seen;
    for (const auto& p : j.at("players")) {
        if (!p.is_object()) semantic("player entries must be objects");
        int id = require_int(p, "id");
        if (id < 0 || id >= inst.n) semantic("player id out of range");
        if (id == inst.u) semantic("player list must not contain u");
        if (!seen.insert(id).second) semantic("duplicate player entry");
        if (!p.contains("immunised") || !p.at("immunised").is_boolean()) {
            semantic("player entry without a boolean 'immunised'");
        }
        inst.others_immunised[id] = p.at("immunised").get<bool>() ? 1 : 0;
        if (!p.contains("links") || !p.at("links").is_array()) semantic("player entry without a 'links' array");
        std::set<int> links;
        for (const auto& l : p.at("links")) {
            if (!l.is_number_integer()) semantic("link endpoints must be integers");
            int w = l.get<int>();
            if (w < 0 || w >= inst.n) semantic("link endpoint out of range");
            if (w == id) semantic("self-link at player " + std::to_string(id));
            if (!links.insert(w).second) semantic("duplicate link endpoint at player " + std::to_string(id));
        }
        inst.others_links[id].assign(links.begin(), links.end());
    }
    if (static_cast<int>(seen.size()) != inst.n - 1) semantic("players array must list every v != u exactly once");

    validate_instance(inst);
    return inst;
}

std::string serialize_instance(const Instance& inst) {
    json j;
    j["version"] = kInstanceFileVersion;
    j["n"] = inst.n;
    j["u"] = inst.u;
    j["alpha"] = format_fraction(inst.alpha);
    j["beta"] = format_fraction(inst.beta);
    json players = json::array();
    for (PlayerId v = 0; v < inst.n; ++v) {
        if (v == inst.u) continue;
        json p;
        p["id"] = v;
        p["immunised"] = inst.others_immunised[v] != 0;
        std::vector<PlayerId> links = inst.others_links[v];
        std::sort(links.begin(), links.end());
        p["links"] = links;
        players.push_back(std::move(p));
    }
    j["players"] = std::move(players);
    return j.dump(2) + "\n";
}

Instance generate_instance(std::uint64_t seed, int n, double edge_prob, double immun_prob,
                           const Rational& alpha, const Rational& beta) {
    check_generate_params(n, edge_prob, immun_prob, alpha, beta);
    std::mt19937_64 rng(seed);
    constexpr int kRetryBudget = 1000;
    for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
        Instance inst = draw_instance(rng, n, edge_prob, immun_prob, alpha, beta);
        if (instance_connected(inst)) return inst;
    }
    throw PreconditionError("generator could not draw a connected network within the retry budget");
}

Instance generate_instance_raw(std::uint64_t seed, int n, double edge_prob, double immun_prob,
                               const Rational& alpha, const Rational& beta) {
    check_generate_params(n, edge_prob, immun_prob, alpha, beta);
    std::mt19937_64 rng(seed);
    return draw_instance(rng, n, edge_prob, immun_prob, alpha, beta);
}

std::string input_digest(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace netshield
