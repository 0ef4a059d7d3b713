#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "netshield/errors.hpp"
#include "netshield/instance_io.hpp"
#include "netshield/oracle.hpp"

using json = nlohmann::json;
using namespace netshield;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitMismatch = 4;
constexpr int kExitInternal = 5;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(InputError::Kind::Syntax, "cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InputError(InputError::Kind::Syntax, "cannot write " + out_path);
    out << content;
}

Adversary parse_adversary(const std::string& name) {
    if (name == "max_carnage") return Adversary::MaxCarnage;
    if (name == "random") return Adversary::Random;
    if (name == "max_disruption") return Adversary::MaxDisruption;
    throw InputError(InputError::Kind::Semantic, "unknown adversary '" + name + "'");
}

SearchSpace parse_space(const std::string& name) {
    if (name == "full_raw") return SearchSpace::FullRaw;
    if (name == "reduced_blocks") return SearchSpace::ReducedBlocks;
    throw InputError(InputError::Kind::Semantic, "unknown search space '" + name + "'");
}

Rational parse_price(const std::string& text, const char* what) {
    auto r = parse_fraction(text);
    if (!r) throw InputError(InputError::Kind::Semantic, std::string("malformed fraction for ") + what);
    if (*r <= 0) throw InputError(InputError::Kind::Semantic, std::string(what) + " must be positive");
    return *r;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (...) {
            throw InputError(InputError::Kind::Semantic, std::string("malformed integer list for ") + what);
        }
    }
    if (out.empty()) throw InputError(InputError::Kind::Semantic, std::string("empty list for ") + what);
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw InputError(InputError::Kind::Semantic, std::string("malformed number list for ") + what);
        }
    }
    if (out.empty()) throw InputError(InputError::Kind::Semantic, std::string("empty list for ") + what);
    return out;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
    auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            std::uint64_t s = std::stoull(text);
            return {s, s};
        }
        std::uint64_t a = std::stoull(text.substr(0, colon));
        std::uint64_t b = std::stoull(text.substr(colon + 1));
        return {a, b};  // b < a is the empty range
    } catch (...) {
        throw InputError(InputError::Kind::Semantic, "malformed seed range '" + text + "' (want A or A:B)");
    }
}

json strategy_json(const Strategy& s) {
    json j;
    j["immunised"] = s.immunised;
    j["links"] = s.links;
    return j;
}

const char* branch_name(BrBranch b) {
    switch (b) {
        case BrBranch::Immunised: return "immunised";
        case BrBranch::NotImmAttacked: return "not_immunised_attacked";
        case BrBranch::NotImmSafe: return "not_immunised_safe";
    }
    return "?";
}

json br_json(const BestResponse& br) {
    json j;
    j["branch"] = branch_name(br.branch);
    j["certificate"] = {{"a_count", br.a_count}, {"delta0", br.delta0}};
    j["stats"] = {{"slices", br.slices}, {"table_entries", br.table_entries}};
    j["strategy"] = strategy_json(br.strategy);
    j["utility"] = format_fraction(br.utility);
    return j;
}

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

int worker_count(size_t tasks) {
    unsigned hw = std::thread::hardware_concurrency();
    long configured = hw ? hw : 1;
    if (const char* env = std::getenv("NETSHIELD_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1) configured = v;
    }
    configured = std::min<long>(configured, static_cast<long>(tasks));
    return static_cast<int>(std::max<long>(configured, 1));
}

// ---- subcommand bodies ----

struct GenArgs {
    std::uint64_t seed = 1;
    int n = 8;
    double edge_prob = 0.3;
    double immun_prob = 0.5;
    std::string alpha = "1", beta = "1", out;
};

int run_gen(const GenArgs& a) {
    Instance inst = generate_instance(a.seed, a.n, a.edge_prob, a.immun_prob,
                                      parse_price(a.alpha, "alpha"), parse_price(a.beta, "beta"));
    write_output(a.out, serialize_instance(inst));
    return kExitOk;
}

struct EvalArgs {
    std::string instance, links, adversary = "max_disruption", out;
    bool immunised = false;
};

int run_eval(const EvalArgs& a) {
    std::string bytes = read_file(a.instance);
    Instance inst = parse_instance(bytes);
    Strategy s;
    s.immunised = a.immunised;
    if (!a.links.empty()) {
        for (int w : parse_int_list(a.links, "--links")) s.links.push_back(w);
    }
    s = canonical_strategy(inst, s);
    Adversary adv = parse_adversary(a.adversary);

    Network net = build_network(inst, s);
    auto regions = vulnerable_regions(net);
    auto weighted = weighted_target_count(net, adv);

    json j;
    j["adversary"] = a.adversary;
    j["command"] = "eval";
    j["input_digest"] = input_digest(bytes);
    j["connected"] = instance_connected(inst);
    j["strategy"] = strategy_json(s);
    json region_list = json::array();
    for (const auto& r : regions) {
        json e;
        e["members"] = r;
        e["delta"] = delta_of_region(net, r);
        long long weight = 0;
        for (const auto& [target, w] : weighted) {
            if (target == r) {
                weight = w;
                break;
            }
        }
        e["target"] = weight > 0;
        e["weight"] = weight;
        region_list.push_back(std::move(e));
    }
    j["regions"] = std::move(region_list);
    json per_player = json::array();
    for (PlayerId v = 0; v < inst.n; ++v) {
        per_player.push_back({{"id", v}, {"utility", format_fraction(player_utility(inst, s, v, adv))}});
    }
    j["per_player"] = std::move(per_player);
    j["welfare"] = format_fraction(social_welfare(inst, s, adv));
    write_output(a.out, j.dump(2) + "\n");
    return kExitOk;
}

struct BrArgs {
    std::string instance, out;
};

int run_br(const BrArgs& a) {
    std::string bytes = read_file(a.instance);
    Instance inst = parse_instance(bytes);
    auto start = std::chrono::steady_clock::now();
    BestResponse br = best_response(inst);
    std::fprintf(stderr, "br: %.1f ms\n", ms_since(start));
    json j = br_json(br);
    j["command"] = "br";
    j["input_digest"] = input_digest(bytes);
    write_output(a.out, j.dump(2) + "\n");
    return kExitOk;
}

struct OracleArgs {
    std::string instance, adversary = "max_disruption", space = "full_raw", out;
};

int run_oracle(const OracleArgs& a) {
    std::string bytes = read_file(a.instance);
    Instance inst = parse_instance(bytes);
    auto start = std::chrono::steady_clock::now();
    OracleResult res = brute_force_best_response(inst, parse_adversary(a.adversary), parse_space(a.space));
    std::fprintf(stderr, "oracle: %.1f ms\n", ms_since(start));
    json j;
    j["adversary"] = a.adversary;
    j["command"] = "oracle";
    j["input_digest"] = input_digest(bytes);
    j["space"] = a.space;
    j["strategy"] = strategy_json(res.strategy);
    j["utility"] = format_fraction(res.utility);
    write_output(a.out, j.dump(2) + "\n");
    return kExitOk;
}

struct CompareArgs {
    std::string instance, space = "full_raw", out;
    bool inject_bug = false;
};

int run_compare(const CompareArgs& a) {
    std::string bytes = read_file(a.instance);
    Instance inst = parse_instance(bytes);
    auto start = std::chrono::steady_clock::now();
    CompareOutcome cmp = compare_best_response(inst, parse_space(a.space));
    if (a.inject_bug) {
        // Testing aid: force a visible solver error so the mismatch path can
        // be exercised end to end.
        cmp.solver.utility += 1;
        cmp.match = cmp.solver.utility == cmp.oracle.utility;
    }
    std::fprintf(stderr, "compare: %.1f ms\n", ms_since(start));
    json j;
    j["command"] = "compare";
    j["input_digest"] = input_digest(bytes);
    j["match"] = cmp.match;
    j["space"] = a.space;
    j["solver"] = br_json(cmp.solver);
    j["oracle"] = {{"strategy", strategy_json(cmp.oracle.strategy)},
                   {"utility", format_fraction(cmp.oracle.utility)}};
    write_output(a.out, j.dump(2) + "\n");
    return cmp.match ? kExitOk : kExitMismatch;
}

struct SweepArgs {
    std::string seeds = "1:20";
    std::string sizes = "7,8";
    std::string edge_probs = "0.3,0.6";
    std::string immun_probs = "0.3,0.7";
    std::string alpha = "1", beta = "1", out;
};

int run_sweep(const SweepArgs& a) {
    auto [seed_from, seed_to] = parse_seed_range(a.seeds);
    auto sizes = parse_int_list(a.sizes, "--n");
    auto eps = parse_double_list(a.edge_probs, "--edge-prob");
    auto ips = parse_double_list(a.immun_probs, "--immun-prob");
    Rational alpha = parse_price(a.alpha, "alpha");
    Rational beta = parse_price(a.beta, "beta");

    struct Combo {
        int n;
        double ep, ip;
    };
    std::vector<Combo> combos;
    for (int n : sizes) {
        for (double ep : eps) {
            for (double ip : ips) combos.push_back({n, ep, ip});
        }
    }
    struct Task {
        size_t combo;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (size_t c = 0; c < combos.size(); ++c) {
        for (std::uint64_t s = seed_from; s <= seed_to; ++s) tasks.push_back({c, s});
    }

    enum class Outcome { Matched, Mismatched, SkippedDisconnected, OracleRefused };
    std::vector<Outcome> outcomes(tasks.size());
    std::vector<double> timings(tasks.size());
    std::atomic<size_t> next{0};

    auto work = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            const Task& t = tasks[i];
            const Combo& c = combos[t.combo];
            auto start = std::chrono::steady_clock::now();
            Instance inst = generate_instance_raw(t.seed, c.n, c.ep, c.ip, alpha, beta);
            if (!instance_connected(inst)) {
                // The solver precondition fails; the oracle alone still
                // handles these draws.
                outcomes[i] = Outcome::SkippedDisconnected;
                if (inst.n <= kFullRawCap) {
                    brute_force_best_response(inst, Adversary::MaxDisruption, SearchSpace::FullRaw);
                }
            } else {
                try {
                    CompareOutcome cmp = compare_best_response(inst, SearchSpace::FullRaw);
                    outcomes[i] = cmp.match ? Outcome::Matched : Outcome::Mismatched;
                } catch (const PreconditionError&) {
                    outcomes[i] = Outcome::OracleRefused;
                }
            }
            timings[i] = ms_since(start);
        }
    };
    int threads = worker_count(tasks.size());
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    long long matched = 0, mismatched = 0, skipped = 0, refused = 0;
    json combo_list = json::array();
    for (size_t c = 0; c < combos.size(); ++c) {
        long long cm = 0, cx = 0, cs = 0, cr = 0, cases = 0;
        for (size_t i = 0; i < tasks.size(); ++i) {
            if (tasks[i].combo != c) continue;
            ++cases;
            switch (outcomes[i]) {
                case Outcome::Matched: ++cm; break;
                case Outcome::Mismatched: ++cx; break;
                case Outcome::SkippedDisconnected: ++cs; break;
                case Outcome::OracleRefused: ++cr; break;
            }
        }
        matched += cm;
        mismatched += cx;
        skipped += cs;
        refused += cr;
        json e;
        e["cases"] = cases;
        e["edge_prob"] = combos[c].ep;
        e["immun_prob"] = combos[c].ip;
        e["matched"] = cm;
        e["mismatched"] = cx;
        e["n"] = combos[c].n;
        e["oracle_refused"] = cr;
        e["skipped_disconnected"] = cs;
        combo_list.push_back(std::move(e));
    }

    json j;
    j["cases"] = static_cast<long long>(tasks.size());
    j["combos"] = std::move(combo_list);
    j["command"] = "sweep";
    j["compared"] = matched + mismatched;
    j["matched"] = matched;
    j["mismatched"] = mismatched;
    j["oracle_refused"] = refused;
    j["seed_from"] = seed_from;
    j["seed_to"] = seed_to;
    j["skipped_disconnected"] = skipped;
    write_output(a.out, j.dump(2) + "\n");

    if (!timings.empty()) {
        std::vector<double> sorted = timings;
        std::sort(sorted.begin(), sorted.end());
        auto pct = [&](double p) { return sorted[static_cast<size_t>(p * (sorted.size() - 1))]; };
        std::fprintf(stderr, "sweep: %zu cases, per-case ms p50=%.1f p90=%.1f p99=%.1f\n", sorted.size(),
                     pct(0.5), pct(0.9), pct(0.99));
    }
    return mismatched == 0 ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"netshield: exact best-response solver for the network formation game "
                 "with attack and immunisation (maximum disruption adversary)"};
    app.require_subcommand(1);

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "Generate a random connected instance");
    gen->add_option("--seed", gen_args.seed, "RNG seed");
    gen->add_option("--n", gen_args.n, "number of players");
    gen->add_option("--edge-prob", gen_args.edge_prob, "edge probability");
    gen->add_option("--immun-prob", gen_args.immun_prob, "immunisation probability per player");
    gen->add_option("--alpha", gen_args.alpha, "link price p/q");
    gen->add_option("--beta", gen_args.beta, "immunisation price p/q");
    gen->add_option("--out", gen_args.out, "output file (default stdout)");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Evaluate a strategy: utilities, welfare, targets, deltas");
    eval->add_option("--instance", eval_args.instance, "instance file")->required();
    eval->add_option("--links", eval_args.links, "u's link endpoints, comma separated");
    eval->add_flag("--immunised", eval_args.immunised, "u buys immunisation");
    eval->add_option("--adversary", eval_args.adversary, "max_carnage | random | max_disruption");
    eval->add_option("--out", eval_args.out, "output file (default stdout)");

    BrArgs br_args;
    auto* br = app.add_subcommand("br", "Exact best response against the maximum disruption adversary");
    br->add_option("--instance", br_args.instance, "instance file")->required();
    br->add_option("--out", br_args.out, "output file (default stdout)");

    OracleArgs oracle_args;
    auto* oracle = app.add_subcommand("oracle", "Brute-force best response");
    oracle->add_option("--instance", oracle_args.instance, "instance file")->required();
    oracle->add_option("--adversary", oracle_args.adversary, "max_carnage | random | max_disruption");
    oracle->add_option("--space", oracle_args.space, "full_raw | reduced_blocks");
    oracle->add_option("--out", oracle_args.out, "output file (default stdout)");

    CompareArgs cmp_args;
    auto* cmp = app.add_subcommand("compare", "Run solver and oracle; nonzero exit on mismatch");
    cmp->add_option("--instance", cmp_args.instance, "instance file")->required();
    cmp->add_option("--space", cmp_args.space, "full_raw | reduced_blocks");
    cmp->add_option("--out", cmp_args.out, "output file (default stdout)");
    cmp->add_flag("--inject-bug", cmp_args.inject_bug, "perturb the solver result (testing aid)");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Seeded generate-and-compare sweep");
    sweep->add_option("--seed", sweep_args.seeds, "seed range A:B (or a single seed)");
    sweep->add_option("--n", sweep_args.sizes, "sizes, comma separated");
    sweep->add_option("--edge-prob", sweep_args.edge_probs, "edge probabilities, comma separated");
    sweep->add_option("--immun-prob", sweep_args.immun_probs, "immunisation probabilities, comma separated");
    sweep->add_option("--alpha", sweep_args.alpha, "link price p/q");
    sweep->add_option("--beta", sweep_args.beta, "immunisation price p/q");
    sweep->add_option("--out", sweep_args.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
        if (*gen) return run_gen(gen_args);
        if (*eval) return run_eval(eval_args);
        if (*br) return run_br(br_args);
        if (*oracle) return run_oracle(oracle_args);
        if (*cmp) return run_compare(cmp_args);
        if (*sweep) return run_sweep(sweep_args);
        return kExitInput;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    } catch (const InputError& e) {
        std::fprintf(stderr, "netshield: %s\n", e.what());
        return kExitInput;
    } catch (const PreconditionError& e) {
        std::fprintf(stderr, "netshield: precondition failed: %s\n", e.what());
        return kExitPrecondition;
    } catch (const InternalError& e) {
        std::fprintf(stderr, "netshield: internal assertion: %s\n", e.what());
        return kExitInternal;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "netshield: unexpected error: %s\n", e.what());
        return kExitInternal;
    }
}
