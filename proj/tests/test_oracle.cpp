#include "doctest.h"
#include "instances.hpp"
#include "netshield/errors.hpp"
#include "netshield/instance_io.hpp"
#include "netshield/oracle.hpp"

using namespace netshield;
using namespace netshield::testing;

TEST_CASE("brute force optima on the named instances") {
    OracleResult chain = brute_force_best_response(chain4(), Adversary::MaxDisruption, SearchSpace::FullRaw);
    CHECK(chain.utility == 1);

    OracleResult p3 = brute_force_best_response(path3(), Adversary::MaxDisruption, SearchSpace::FullRaw);
    CHECK(p3.utility == 1);
    CHECK(p3.strategy.links.empty());
    CHECK(!p3.strategy.immunised);  // tie broken toward not immunised

    OracleResult star = brute_force_best_response(star4(), Adversary::MaxDisruption, SearchSpace::ReducedBlocks);
    CHECK(star.utility == Rational(5, 2));
    CHECK(star.strategy.links.empty());
    CHECK(star.strategy.immunised);
}

TEST_CASE("brute force handles the other adversaries") {
    // chain4: against maximum carnage both singleton regions of G(S,1) are
    // largest, so (empty, immunised) earns -1 + (1+3)/2 = 1 and nothing
    // beats it. Against the random adversary (empty, not immunised) also
    // reaches 1: u's own two-node region yields 0, the far leaf yields 3,
    // per-node weights 2:1.
    Instance chain = chain4();
    OracleResult carnage = brute_force_best_response(chain, Adversary::MaxCarnage, SearchSpace::FullRaw);
    CHECK(carnage.utility == 1);
    CHECK(carnage.strategy.links.empty());
    CHECK(carnage.strategy.immunised);

    OracleResult random = brute_force_best_response(chain, Adversary::Random, SearchSpace::FullRaw);
    CHECK(random.utility == 1);
    CHECK(random.strategy.links.empty());
    CHECK(!random.strategy.immunised);
}

TEST_CASE("size caps are enforced") {
    Instance big = generate_instance(3, kFullRawCap + 1, 0.4, 0.5, 1, 1);
    CHECK_THROWS_AS(brute_force_best_response(big, Adversary::MaxDisruption, SearchSpace::FullRaw),
                    PreconditionError);
}

TEST_CASE("welfare argmin targets") {
    CHECK(welfare_argmin_targets(path3(), Strategy{{}, false}) ==
          (std::vector<VulnRegion>{{0}, {1}}));
    CHECK(welfare_argmin_targets(allvuln5(), Strategy{{}, false}) ==
          (std::vector<VulnRegion>{{0, 1, 2, 3, 4}}));
    CHECK(welfare_argmin_targets(chain4(), Strategy{{}, true}) == (std::vector<VulnRegion>{{1}}));
}

TEST_CASE("restricted brute force on the chain") {
    SolverContext ctx = make_context(chain4());
    int root = ctx.tree.root;
    auto both = brute_force_restricted(ctx, 9, 2, root, 2);
    REQUIRE(both.has_value());
    CHECK(*both == 2);
    CHECK(!brute_force_restricted(ctx, 9, 2, root, 1));

    // Empty purchasable set: only the empty strategy is on offer.
    SolverContext star = make_context(star4());
    auto empty = brute_force_restricted(star, 9, 2, star.tree.root, 2);
    REQUIRE(empty.has_value());
    CHECK(*empty == 3);
}

TEST_CASE("raw and reduced search spaces attain the same optimum") {
    for (std::uint64_t seed = 900; seed < 960; ++seed) {
        int n = 3 + static_cast<int>(seed % 6);
        Instance inst = generate_instance(seed, n, (seed % 2) ? 0.35 : 0.6, 0.5,
                                          (seed % 3) ? Rational(1) : Rational(1, 3), Rational(1));
        OracleResult raw = brute_force_best_response(inst, Adversary::MaxDisruption, SearchSpace::FullRaw);
        OracleResult reduced =
            brute_force_best_response(inst, Adversary::MaxDisruption, SearchSpace::ReducedBlocks);
        CHECK(raw.utility == reduced.utility);
    }
}

TEST_CASE("compare wraps solver and oracle") {
    CompareOutcome cmp = compare_best_response(chain4(), SearchSpace::FullRaw);
    CHECK(cmp.match);
    CHECK(cmp.solver.utility == cmp.oracle.utility);
}
