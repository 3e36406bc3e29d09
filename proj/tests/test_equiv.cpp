#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace protochk;
using support::fig;
using support::sts;

namespace {

constexpr RelationKind kAll[] = {RelationKind::Strong, RelationKind::Branching, RelationKind::Weak,
                                 RelationKind::Trace,  RelationKind::Simulation, RelationKind::Subtype};

/// Observable traces of length <= depth, tau erased.
std::set<std::vector<std::string>> traces(const Sts& s, std::size_t depth)
{
    std::set<std::vector<std::string>> out;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> stack{{s.initial(), {}}};
    std::set<std::pair<std::size_t, std::vector<std::string>>> seen;
    while (!stack.empty()) {
        auto [q, word] = stack.back();
        stack.pop_back();
        if (!seen.insert({q, word}).second) continue;
        out.insert(word);
        for (auto e : s.outgoing(q)) {
            const auto& edge = s.edges()[e];
            auto next = word;
            if (!edge.label.is_tau()) {
                if (next.size() == depth) continue;
                next.push_back(edge.label.to_string());
            }
            stack.push_back({edge.target, next});
        }
    }
    return out;
}

Sts random_sts(std::uint64_t seed, const std::string& name, std::size_t states = 6)
{
    testkit::GenConfig cfg;
    cfg.seed = seed;
    cfg.max_states = states;
    cfg.alphabet_size = 2;
    return testkit::generate_sts(cfg, name);
}

} // namespace

TEST_CASE("every relation is reflexive")
{
    for (const auto& f : testkit::fixtures())
        for (const auto& s : f.doc.systems)
            for (auto k : kAll) {
                CAPTURE(f.id);
                CAPTURE(to_string(k));
                CHECK(check_relation(s, s, k).holds);
                CHECK(testkit::oracle_relation(s, s, k));
            }
}

TEST_CASE("a leading tau separates strong from weak")
{
    const Sts plain = sts("sts P { init s0; final s2; s0 -> s1 : a!; s1 -> s2 : b!; }");
    const Sts lead = sts("sts Q { init t0; final t3; t0 -> t1 : tau; t1 -> t2 : a!; t2 -> t3 : b!; }");
    const auto strong = strong_bisim(plain, lead);
    CHECK_FALSE(strong.holds);
    REQUIRE(strong.relation_witness);
    // Either first move tells them apart: s0 has a! and t0 has tau.
    const auto move = strong.relation_witness->move;
    CHECK((move == "a!" || move == "tau"));
    CHECK(weak_bisim(plain, lead).holds);
    CHECK(branching_bisim(plain, lead).holds);
    CHECK_FALSE(testkit::oracle_relation(plain, lead, RelationKind::Strong));
    CHECK(testkit::oracle_relation(plain, lead, RelationKind::Weak));
}

TEST_CASE("F11: only trace-equivalent")
{
    CHECK(trace_equiv(fig(11, "S1"), fig(11, "S1p")).holds);
    CHECK_FALSE(weak_bisim(fig(11, "S1"), fig(11, "S1p")).holds);
    CHECK_FALSE(check_relation(fig(11, "S1"), fig(11, "S1p"), RelationKind::Branching).holds);
}

TEST_CASE("F7: different traces")
{
    const auto v = trace_equiv(fig(7, "S1"), fig(7, "S1p"));
    CHECK_FALSE(v.holds);
    REQUIRE(v.relation_witness);
    CHECK(v.relation_witness->trace == std::vector<std::string>{"a!"});
}

TEST_CASE("final annotation makes termination observable")
{
    const auto t = traces(annotate_finals(fig(2, "S1")), 10);
    const std::set<std::vector<std::string>> expected{{}, {"a!"}, {"a!", "b!"}, {"a!", "b!", "√!"}};
    CHECK(t == expected);

    // Without it a dead end and a final state look alike.
    const Sts dead = sts("sts D { init s0; final s2; s0 -> s1 : a!; s0 -> s2 : b!; }");
    const Sts fine = sts("sts F { init s0; final s1, s2; s0 -> s1 : a!; s0 -> s2 : b!; }");
    CHECK_FALSE(strong_bisim(dead, fine).holds);
    RelationOptions off;
    off.annotate_finals = false;
    CHECK(strong_bisim(dead, fine, off).holds);
}

TEST_CASE("annotation is skipped with a warning when tick is already used")
{
    const Sts a = sts("sts A { init s0; final s1; s0 -> s1 : TICK!; }");
    const auto v = weak_bisim(a, a);
    CHECK(v.holds);
    CHECK(v.warnings.size() == 2);
}

TEST_CASE("completed traces")
{
    const Sts a = sts("sts A { init s0; final s1, s3; s0 -> s1 : a!; s0 -> s2 : a!; s2 -> s3 : b!; }");
    const Sts b = sts("sts B { init s0; final s3; s0 -> s2 : a!; s2 -> s3 : b!; }");
    RelationOptions opts;
    opts.annotate_finals = false;
    CHECK(trace_equiv(a, b, opts).holds);
    opts.completed_traces = true;
    const auto v = trace_equiv(a, b, opts);
    CHECK_FALSE(v.holds);
    REQUIRE(v.relation_witness);
    CHECK(v.relation_witness->trace == std::vector<std::string>{"a!"});
    CHECK(testkit::oracle_relation(a, b, RelationKind::Trace, opts) == false);
}

TEST_CASE("trace determinisation cap")
{
    RelationOptions opts;
    opts.max_subsets = 1;
    CHECK_THROWS_AS(trace_equiv(fig(11, "S1"), fig(11, "S1p"), opts), StateExplosion);
}

TEST_CASE("simulation")
{
    CHECK(simulation_preorder(fig(8, "S1"), fig(8, "S1p")).holds);
    const auto v = simulation_preorder(fig(8, "S1p"), fig(8, "S1"));
    CHECK_FALSE(v.holds);
    REQUIRE(v.relation_witness);
    CHECK(v.relation_witness->position == std::pair<std::string, std::string>{"t0", "s0"});
}

TEST_CASE("mutual simulation does not give weak bisimilarity")
{
    // a.(b+c) + a.b against a.(b+c).
    const Sts p = sts("sts P { init p0; final f1, f2, f3;"
                      "  p0 -> p1 : a!; p1 -> f1 : b!; p1 -> f2 : c!; p0 -> p2 : a!; p2 -> f3 : b!; }");
    const Sts q = sts("sts Q { init q0; final g1, g2; q0 -> q1 : a!; q1 -> g1 : b!; q1 -> g2 : c!; }");
    CHECK(simulation_preorder(p, q).holds);
    CHECK(simulation_preorder(q, p).holds);
    CHECK_FALSE(weak_bisim(p, q).holds);

    // The classic a.(b+c) / a.b + a.c pair is only simulated one way.
    const Sts r = sts("sts R { init r0; final h1, h2; r0 -> r1 : a!; r1 -> h1 : b!; r0 -> r2 : a!; r2 -> h2 : c!; }");
    CHECK(simulation_preorder(q, r).holds);
    CHECK_FALSE(simulation_preorder(r, q).holds);
}

TEST_CASE("behavioural subtyping")
{
    CHECK(behavioural_subtype(fig(9, "S1p"), fig(9, "S1")).holds);
    CHECK(behavioural_subtype(fig(10, "S1p"), fig(10, "S1")).holds);
    // More emissions or fewer receptions are not allowed.
    CHECK_FALSE(behavioural_subtype(fig(9, "S1"), fig(9, "S1p")).holds);
    CHECK_FALSE(behavioural_subtype(fig(10, "S1"), fig(10, "S1p")).holds);
}

TEST_CASE("dispatcher")
{
    const Sts s2 = reverse_directions(strip_parameters(fig(6, "S2")));
    CHECK(check_relation(fig(6, "S1"), s2, RelationKind::Weak).holds);
    CHECK(parse_relation("branching") == RelationKind::Branching);
    CHECK_FALSE(parse_relation("bisim"));
    for (auto k : kAll) CHECK(parse_relation(to_string(k)) == k);
}

TEST_CASE("lattice and symmetry on random pairs")
{
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const Sts a = random_sts(2 * seed, "A");
        // Half the pairs are related by construction.
        std::mt19937_64 rng(seed);
        const Sts b = seed % 2 ? testkit::equivalence_preserving_mutation(a, rng).renamed("B")
                               : random_sts(2 * seed + 1, "B");
        const bool strong = strong_bisim(a, b).holds;
        const bool branching = branching_bisim(a, b).holds;
        const bool weak = weak_bisim(a, b).holds;
        const bool trace = trace_equiv(a, b).holds;
        CAPTURE(seed);
        if (strong) CHECK(branching);
        if (branching) CHECK(weak);
        if (weak) CHECK(trace);
        if (weak) {
            CHECK(simulation_preorder(a, b).holds);
            CHECK(simulation_preorder(b, a).holds);
        }
        if (seed % 2) CHECK(branching);
        CHECK(strong_bisim(b, a).holds == strong);
        CHECK(branching_bisim(b, a).holds == branching);
        CHECK(weak_bisim(b, a).holds == weak);
        CHECK(trace_equiv(b, a).holds == trace);
    }
}

TEST_CASE("transitivity on mutation chains")
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        const Sts a = random_sts(seed, "A");
        const Sts b = testkit::equivalence_preserving_mutation(a, rng, 2).renamed("B");
        const Sts c = random_sts(seed + 7777, "C");
        for (auto k : kAll) {
            const bool ab = check_relation(a, b, k).holds;
            const bool bc = check_relation(b, c, k).holds;
            if (ab && bc) CHECK(check_relation(a, c, k).holds);
        }
    }
}

TEST_CASE("agreement with the naive oracles")
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Sts a = random_sts(11 * seed, "A");
        std::mt19937_64 rng(seed);
        const Sts b = seed % 3 == 0 ? testkit::equivalence_preserving_mutation(a, rng).renamed("B")
                                    : random_sts(11 * seed + 1, "B");
        for (auto k : kAll) {
            CAPTURE(seed);
            CAPTURE(to_string(k));
            CHECK(check_relation(a, b, k).holds == testkit::oracle_relation(a, b, k));
        }
    }
}

TEST_CASE("trace witnesses separate the languages")
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Sts a = random_sts(13 * seed, "A", 4);
        const Sts b = random_sts(13 * seed + 1, "B", 4);
        const auto v = trace_equiv(a, b);
        if (v.holds) continue;
        REQUIRE(v.relation_witness);
        const auto& w = v.relation_witness->trace;
        const auto ta = traces(annotate_finals(a), w.size());
        const auto tb = traces(annotate_finals(b), w.size());
        CHECK(ta.count(w) != tb.count(w));
    }
}
