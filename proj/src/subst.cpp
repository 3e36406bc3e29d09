#include "protochk/subst.hpp"

namespace protochk {

namespace {

std::string loose_relation_warning(RelationKind kind)
{
    switch (kind) {
    case RelationKind::Trace:
        return "trace equivalence does not preserve deadlock-freeness: an internal choice may lead to a dead "
               "state (see fixtures/fig11.sts)";
    case RelationKind::Simulation:
        return "simulation does not preserve unspecified-receptions compatibility: the partner may emit "
               "what the replacement no longer receives (see fixtures/fig8.sts)";
    case RelationKind::Subtype:
        return "behavioural subtyping does not preserve deadlock-freeness in general; it is sufficient for "
               "unspecified receptions only (see fixtures/fig9.sts, fixtures/fig10.sts)";
    default: return {};
    }
}

} // namespace

Verdict check_subst_by_relation(const Sts& original, const Sts& replacement, RelationKind kind,
                                const SubstOptions& opts)
{
    Verdict v = check_relation(replacement, original, kind, opts.relation);
    v.relation = std::string(to_string(kind));
    if (auto w = loose_relation_warning(kind); !w.empty()) v.warnings.push_back(std::move(w));
    return v;
}

Verdict check_subst_by_recompose(const Sts& original, const Sts& replacement, const Sts& partner,
                                 CompatNotion notion, const SubstOptions& opts)
{
    Verdict v = check_compat(replacement, partner, notion, opts.compat);
    v.warnings.emplace_back(kRecomposeWarning);
    const bool traces = trace_equiv(original, replacement, opts.relation).holds;
    v.warnings.push_back(std::string("advisory: old/new ") + (traces ? "are" : "not") + " trace-equivalent");
    return v;
}

SubstitutionReport substitution_report(const Sts& original, const Sts& replacement, const Sts& partner,
                                       CompatNotion notion, RelationKind kind, const SubstOptions& opts)
{
    SubstitutionReport r;
    r.kind = kind;
    r.notion = notion;
    r.relation = check_subst_by_relation(original, replacement, kind, opts);
    r.recomposition = check_subst_by_recompose(original, replacement, partner, notion, opts);
    r.before = check_compat(original, partner, notion, opts.compat);
    r.after = check_compat(replacement, partner, notion, opts.compat);

    r.accept = r.relation.holds;
    if (!r.relation.holds)
        r.reasons.push_back("'" + replacement.name() + "' is not related to '" + original.name() + "' under " +
                            std::string(to_string(kind)));
    if (r.before.holds && !r.after.holds) {
        r.accept = false;
        r.reasons.push_back("replacing '" + original.name() + "' breaks " + std::string(to_string(notion)) +
                            " compatibility with '" + partner.name() + "'");
    }
    if (!r.before.holds)
        r.reasons.push_back("'" + original.name() + "' was not " + std::string(to_string(notion)) +
                            "-compatible with '" + partner.name() + "' to begin with");
    return r;
}

} // namespace protochk
