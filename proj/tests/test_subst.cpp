#include "support.hpp"

#include "protochk/subst.hpp"

#include <doctest.h>

using namespace protochk;
using support::fig;

namespace {

constexpr auto DF = CompatNotion::DeadlockFree;
constexpr auto UR = CompatNotion::UnspecifiedReceptions;

bool has_warning(const Verdict& v, std::string_view needle)
{
    for (const auto& w : v.warnings)
        if (w.find(needle) != std::string::npos) return true;
    return false;
}

} // namespace

TEST_CASE("substitution by relation")
{
    const auto t = check_subst_by_relation(fig(11, "S1"), fig(11, "S1p"), RelationKind::Trace);
    CHECK(t.holds);
    CHECK(t.relation == "trace");
    CHECK(has_warning(t, "fig11.sts"));

    const auto w = check_subst_by_relation(fig(11, "S1"), fig(11, "S1p"), RelationKind::Weak);
    CHECK_FALSE(w.holds);
    CHECK(w.warnings.empty());

    CHECK(has_warning(check_subst_by_relation(fig(8, "S1"), fig(8, "S1p"), RelationKind::Simulation), "fig8.sts"));
    CHECK(has_warning(check_subst_by_relation(fig(9, "S1"), fig(9, "S1p"), RelationKind::Subtype), "fig9.sts"));
    CHECK(check_subst_by_relation(fig(2, "S1"), fig(2, "S1")).relation == "branching");
}

TEST_CASE("a reduced protocol can always stand in for the original")
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        testkit::GenConfig cfg;
        cfg.seed = seed;
        const Sts x = testkit::generate_sts(cfg, "X");
        CHECK(check_subst_by_relation(x, tau_confluence_reduce(x)).holds);
    }
}

TEST_CASE("substitution by recomposition")
{
    const auto f7 = check_subst_by_recompose(fig(7, "S1"), fig(7, "S1p"), fig(7, "S2"), UR);
    CHECK(f7.holds);
    CHECK(has_warning(f7, std::string(kRecomposeWarning)));
    CHECK(has_warning(f7, "not trace-equivalent"));

    const auto same = check_subst_by_recompose(fig(2, "S1p"), fig(2, "S1p"), fig(2, "S2"), DF);
    CHECK(same.holds);
    CHECK(has_warning(same, "are trace-equivalent"));

    CHECK_FALSE(check_subst_by_recompose(fig(8, "S1"), fig(8, "S1p"), fig(8, "S2"), UR).holds);
}

TEST_CASE("substitution reports")
{
    const auto f9 = substitution_report(fig(9, "S1"), fig(9, "S1p"), fig(9, "S2"), DF, RelationKind::Subtype);
    CHECK(f9.relation.holds);
    CHECK(f9.before.holds);
    CHECK_FALSE(f9.after.holds);
    CHECK(f9.recommendation() == "reject");

    const auto f10 = substitution_report(fig(10, "S1"), fig(10, "S1p"), fig(10, "S2"), UR, RelationKind::Subtype);
    CHECK(f10.relation.holds);
    CHECK(f10.before.holds);
    CHECK(f10.after.holds);
    CHECK(f10.recommendation() == "accept");

    const auto id = substitution_report(fig(2, "S1p"), fig(2, "S1p"), fig(2, "S2"), DF);
    CHECK(id.relation.holds);
    CHECK(id.recomposition.holds);
    CHECK(id.before.holds);
    CHECK(id.after.holds);
    CHECK(id.accept);

    const auto f11 = substitution_report(fig(11, "S1"), fig(11, "S1p"), fig(11, "S2"), DF, RelationKind::Trace);
    CHECK(f11.relation.holds);
    CHECK_FALSE(f11.accept);
}

TEST_CASE("weak and branching equivalence preserve every notion")
{
    std::size_t exercised = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        testkit::GenConfig cfg;
        cfg.seed = seed;
        cfg.tau_acyclic = true;
        cfg.alphabet_size = 2;
        const Sts old_ = testkit::generate_sts(cfg, "Old");
        cfg.seed = seed + 100'000;
        const Sts partner = testkit::generate_sts(cfg, "P");
        std::mt19937_64 rng(seed);
        const Sts new_ = testkit::equivalence_preserving_mutation(old_, rng).renamed("New");
        REQUIRE(weak_bisim(old_, new_).holds);
        for (auto n : {DF, UR, CompatNotion::UnidirectionalComplementarity}) {
            if (!check_compat(old_, partner, n).holds) continue;
            ++exercised;
            CHECK(check_compat(new_, partner, n).holds);
        }
    }
    CHECK(exercised > 0);
}
