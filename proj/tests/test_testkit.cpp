#include "support.hpp"

#include <doctest.h>

using namespace protochk;
using namespace protochk::testkit;
using support::sts;

TEST_CASE("eleven fixtures, every expectation reproduced")
{
    const auto all = fixtures();
    REQUIRE(all.size() == 11);
    CHECK(all.front().id == "F1");
    CHECK(all.back().file == "fig11.sts");
    for (const auto& r : verify_fixtures()) {
        CAPTURE(r.fixture);
        CAPTURE(r.expectation.describe());
        CHECK(r.passed);
    }
    const auto& f1 = fixture("F1");
    REQUIRE(f1.expectations.size() == 2);
    CHECK(f1.expectations[0].describe() == "DF(S1,S2)");
    CHECK(f1.expectations[0].expected);
    CHECK_FALSE(f1.expectations[1].expected);
    CHECK(fixture("F6").expectations[0].describe() == "weak(S1,rev(strip(S2)))");
    CHECK_THROWS(fixture("F12"));
}

TEST_CASE("oracles agree with the checkers on every fixture pair")
{
    for (const auto& f : fixtures())
        for (const auto& a : f.doc.systems)
            for (const auto& b : f.doc.systems) {
                for (auto k : {RelationKind::Strong, RelationKind::Branching, RelationKind::Weak, RelationKind::Trace,
                               RelationKind::Simulation, RelationKind::Subtype})
                    CHECK(oracle_relation(a, b, k) == check_relation(a, b, k).holds);
                for (auto n : {CompatNotion::DeadlockFree, CompatNotion::UnspecifiedReceptions,
                               CompatNotion::UnidirectionalComplementarity})
                    CHECK(oracle_compat(a, b, n) == check_compat(a, b, n).holds);
            }
}

TEST_CASE("generation is deterministic and valid")
{
    GenConfig cfg;
    cfg.seed = 42;
    CHECK(generate_sts(cfg) == generate_sts(cfg));
    CHECK(generate_deterministic_sts(cfg) == generate_deterministic_sts(cfg));

    cfg.max_states = 8;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        cfg.seed = seed;
        cfg.tau_acyclic = seed % 2;
        const Sts s = generate_sts(cfg);
        CHECK(s.size() <= 8);
        if (cfg.tau_acyclic) CHECK_FALSE(has_tau_cycle(s));
    }
}

TEST_CASE("deterministic generator")
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        GenConfig cfg;
        cfg.seed = seed;
        const Sts s = generate_deterministic_sts(cfg);
        for (std::size_t q = 0; q < s.size(); ++q) {
            CHECK(s.is_final(q) == s.outgoing(q).empty());
            std::vector<Label> seen;
            for (auto e : s.outgoing(q)) {
                const auto& l = s.edges()[e].label;
                CHECK(l.is_observable());
                CHECK(std::find(seen.begin(), seen.end(), l) == seen.end());
                seen.push_back(l);
            }
        }
    }
}

TEST_CASE("oracle separates strong from weak on a leading tau")
{
    const Sts plain = sts("sts P { init s0; final s2; s0 -> s1 : a!; s1 -> s2 : b!; }");
    const Sts lead = sts("sts Q { init t0; final t3; t0 -> t1 : tau; t1 -> t2 : a!; t2 -> t3 : b!; }");
    CHECK(oracle_relation(plain, lead, RelationKind::Strong) != oracle_relation(plain, lead, RelationKind::Weak));
}

TEST_CASE("oracle size limit")
{
    GenConfig cfg;
    cfg.max_states = 200;
    cfg.max_transitions = 220;
    cfg.seed = 3;
    Sts big = generate_sts(cfg);
    for (cfg.seed = 4; big.size() < 120; ++cfg.seed) big = generate_sts(cfg);
    CHECK_THROWS_AS(oracle_relation(big, big, RelationKind::Strong), SizeLimit);
}

TEST_CASE("mutations preserve what they claim")
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        GenConfig cfg;
        cfg.seed = seed;
        const Sts s = generate_sts(cfg);
        std::mt19937_64 rng(seed);
        const Sts dup = duplicate_state(s, rng);
        const Sts ren = rename_states(s, rng);
        const Sts tau = insert_sequential_tau(s, rng);
        CHECK(dup.size() == s.size() + 1);
        CHECK(strong_bisim(s, dup).holds);
        CHECK(strong_bisim(s, ren).holds);
        CHECK(isomorphic(s, ren));
        CHECK(branching_bisim(s, tau).holds);
        CHECK(weak_bisim(s, tau).holds);
    }
}

TEST_CASE("subtype mutation yields a subtype")
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        GenConfig cfg;
        cfg.seed = seed;
        const Sts s = generate_sts(cfg, "Old");
        std::mt19937_64 rng(seed);
        const Sts t = subtype_mutation(s, {"a", "b", "c"}, rng).renamed("New");
        CHECK(behavioural_subtype(t, s).holds);
    }
}

TEST_CASE("isomorphism")
{
    const Sts a = sts("sts A { init s0; final s2; s0 -> s1 : a!; s1 -> s2 : b!; }");
    const Sts b = sts("sts B { init x; final z; x -> y : a!; y -> z : b!; }");
    const Sts c = sts("sts C { init x; final z; x -> y : b!; y -> z : a!; }");
    CHECK(isomorphic(a, b));
    CHECK_FALSE(isomorphic(a, c));
}

TEST_CASE("replay rejects a tampered witness")
{
    const auto v = check_deadlock_free(support::fig(2, "S1"), support::fig(2, "S2"));
    REQUIRE(v.witness);
    CHECK(replay(support::fig(2, "S1"), support::fig(2, "S2"), *v.witness));
    auto broken = *v.witness;
    broken[0].message = "b";
    CHECK_FALSE(replay(support::fig(2, "S1"), support::fig(2, "S2"), broken));
    broken = *v.witness;
    broken[0].to.second = "u2";
    CHECK_FALSE(replay(support::fig(2, "S1"), support::fig(2, "S2"), broken));
}
