#pragma once

#include "protochk/compat.hpp"
#include "protochk/equiv.hpp"

#include <string>
#include <vector>

namespace protochk {

struct SubstOptions {
    RelationOptions relation;
    CompatOptions compat;
};

/// Relates `replacement` to `original` under `kind` (new first, as in
/// check_relation). Trace, simulation and subtyping verdicts carry a
/// warning that they do not preserve every compatibility notion.
Verdict check_subst_by_relation(const Sts& original, const Sts& replacement,
                                RelationKind kind = RelationKind::Branching, const SubstOptions& opts = {});

/// Compatibility of the replacement with the partner alone. Always warns
/// that the behaviours of old and new are not compared, and reports
/// whether they are at least trace-equivalent.
Verdict check_subst_by_recompose(const Sts& original, const Sts& replacement, const Sts& partner,
                                 CompatNotion notion, const SubstOptions& opts = {});

inline constexpr std::string_view kRecomposeWarning =
    "recomposition does not compare old and new behaviours: a compatible replacement may do something "
    "entirely different (see fixtures/fig7.sts)";

struct SubstitutionReport {
    RelationKind kind = RelationKind::Branching;
    CompatNotion notion = CompatNotion::UnspecifiedReceptions;
    Verdict relation;      // new related to old
    Verdict recomposition; // new vs partner, with the recomposition caveat
    Verdict before;        // old vs partner
    Verdict after;         // new vs partner
    bool accept = false;
    std::vector<std::string> reasons;

    std::string_view recommendation() const noexcept { return accept ? "accept" : "reject"; }
};

/// Accepts when the relation holds and the replacement does not break a
/// compatibility the original had with the partner.
SubstitutionReport substitution_report(const Sts& original, const Sts& replacement, const Sts& partner,
                                       CompatNotion notion, RelationKind kind = RelationKind::Branching,
                                       const SubstOptions& opts = {});

} // namespace protochk
