#include "protochk/testkit.hpp"

#include <cctype>
#include <stdexcept>

namespace protochk::testkit {

namespace detail {
// Generated from fixtures/*.sts at configure time.
std::string_view fixture_source(std::size_t index);
} // namespace detail

namespace {

using Check = Expectation::Check;
using Transform = Expectation::Transform;

Expectation compat(CompatNotion n, std::string lhs, std::string rhs, bool expected,
                   std::optional<ComplementDirection> dir = std::nullopt)
{
    Expectation e;
    e.check = Check::Compat;
    e.notion = n;
    e.lhs = std::move(lhs);
    e.rhs = std::move(rhs);
    e.expected = expected;
    e.direction = dir;
    return e;
}

Expectation relation(RelationKind k, std::string lhs, std::string rhs, bool expected,
                     Transform t = Transform::None)
{
    Expectation e;
    e.check = Check::Relation;
    e.relation = k;
    e.lhs = std::move(lhs);
    e.rhs = std::move(rhs);
    e.expected = expected;
    e.rhs_transform = t;
    return e;
}

constexpr auto DF = CompatNotion::DeadlockFree;
constexpr auto UC = CompatNotion::UnidirectionalComplementarity;
constexpr auto UR = CompatNotion::UnspecifiedReceptions;

struct Spec {
    const char* title;
    std::vector<Expectation> expectations;
};

std::vector<Spec> table()
{
    return {
        {"internal behaviour exposes a deadlock",
         {compat(DF, "S1", "S2", true), compat(DF, "S1p", "S2", false)}},
        {"deadlock-freeness", {compat(DF, "S1", "S2", false), compat(DF, "S1p", "S2", true)}},
        {"unidirectional complementarity",
         {compat(UC, "S1", "S2", true, ComplementDirection::LeftComplementedByRight),
          compat(UC, "S1p", "S2", false)}},
        {"unspecified receptions", {compat(UR, "S1", "S2", false), compat(UR, "S1p", "S2", true)}},
        {"tau transitions must be explored", {compat(DF, "S1", "S2", false)}},
        {"tau matching is not what compatibility needs",
         {relation(RelationKind::Weak, "S1", "S2", true, Transform::ReverseStrip), compat(UR, "S1", "S2", false)}},
        {"substitution checked as recomposition misleads",
         {compat(UR, "S1", "S2", true), compat(UR, "S1p", "S2", true),
          relation(RelationKind::Trace, "S1", "S1p", false)}},
        {"simulation is too weak for substitution",
         {relation(RelationKind::Simulation, "S1", "S1p", true), compat(UR, "S1", "S2", true),
          compat(UR, "S1p", "S2", false)}},
        {"subtyping is too weak for deadlock-freeness",
         {relation(RelationKind::Subtype, "S1p", "S1", true), compat(DF, "S1", "S2", true),
          compat(DF, "S1p", "S2", false)}},
        {"subtyping suffices for unspecified receptions",
         {relation(RelationKind::Subtype, "S1p", "S1", true), compat(UR, "S1", "S2", true),
          compat(UR, "S1p", "S2", true)}},
        {"trace equivalence is too weak for substitution",
         {relation(RelationKind::Trace, "S1", "S1p", true), compat(DF, "S1", "S2", true),
          compat(DF, "S1p", "S2", false)}},
    };
}

} // namespace

std::string Expectation::describe() const
{
    std::string rhs_shown = rhs_transform == Transform::ReverseStrip ? "rev(strip(" + rhs + "))" : rhs;
    std::string head;
    if (check == Check::Compat) {
        head = std::string(to_string(notion));
        for (auto& c : head) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    } else {
        head = std::string(to_string(relation));
    }
    return head + "(" + lhs + "," + rhs_shown + ")";
}

const Sts& Fixture::get(const std::string& name) const
{
    if (const Sts* s = doc.find(name)) return *s;
    throw std::out_of_range("fixture " + id + " has no system '" + name + "'");
}

std::vector<Fixture> fixtures()
{
    std::vector<Fixture> out;
    auto specs = table();
    for (std::size_t i = 0; i < specs.size(); ++i) {
        Fixture f;
        f.id = "F" + std::to_string(i + 1);
        f.file = "fig" + std::to_string(i + 1) + ".sts";
        f.title = specs[i].title;
        f.source = std::string(detail::fixture_source(i + 1));
        f.doc = parse_sts(f.source);
        f.expectations = std::move(specs[i].expectations);
        out.push_back(std::move(f));
    }
    return out;
}

const Fixture& fixture(const std::string& id)
{
    static const std::vector<Fixture> all = fixtures();
    for (const auto& f : all)
        if (f.id == id) return f;
    throw std::out_of_range("no fixture " + id);
}

Verdict evaluate(const Fixture& f, const Expectation& e)
{
    const Sts& lhs = f.get(e.lhs);
    Sts rhs = f.get(e.rhs);
    if (e.rhs_transform == Transform::ReverseStrip) rhs = reverse_directions(strip_parameters(rhs));
    if (e.check == Check::Compat) return check_compat(lhs, rhs, e.notion);
    return check_relation(lhs, rhs, e.relation);
}

std::vector<ExpectationResult> verify_fixtures()
{
    std::vector<ExpectationResult> results;
    for (const auto& f : fixtures()) {
        for (const auto& e : f.expectations) {
            ExpectationResult r{f.id, e, evaluate(f, e), false};
            r.passed = r.verdict.holds == e.expected && (!e.direction || r.verdict.direction == e.direction);
            results.push_back(std::move(r));
        }
    }
    return results;
}

} // namespace protochk::testkit
