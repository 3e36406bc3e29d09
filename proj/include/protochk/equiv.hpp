#pragma once

#include "protochk/model.hpp"
#include "protochk/verdict.hpp"

#include <optional>
#include <string_view>

namespace protochk {

enum class RelationKind { Strong, Branching, Weak, Trace, Simulation, Subtype };

std::string_view to_string(RelationKind k) noexcept;
std::optional<RelationKind> parse_relation(std::string_view s) noexcept;

/// Whether `√` termination annotation is applied when not overridden:
/// on for the equivalences, off for simulation and subtyping.
constexpr bool annotates_by_default(RelationKind k) noexcept
{
    return k != RelationKind::Simulation && k != RelationKind::Subtype;
}

struct RelationOptions {
    std::optional<bool> annotate_finals;
    /// Trace equivalence also compares traces that end in a state without
    /// outgoing transitions.
    bool completed_traces = false;
    std::size_t max_subsets = std::size_t{1} << 20;
};

Verdict strong_bisim(const Sts& a, const Sts& b, const RelationOptions& opts = {});
Verdict branching_bisim(const Sts& a, const Sts& b, const RelationOptions& opts = {});
Verdict weak_bisim(const Sts& a, const Sts& b, const RelationOptions& opts = {});

/// Prefix-closed observable traces, compared through minimal
/// deterministic automata. Throws StateExplosion past `max_subsets`.
Verdict trace_equiv(const Sts& a, const Sts& b, const RelationOptions& opts = {});

/// Does `big` weakly simulate `small`?
Verdict simulation_preorder(const Sts& big, const Sts& small, const RelationOptions& opts = {});

/// Can `replacement` stand in for `original`: no emissions the original
/// lacks, every reception the original offers, τ matched by τ*.
Verdict behavioural_subtype(const Sts& replacement, const Sts& original, const RelationOptions& opts = {});

/// For Simulation and Subtype the order is (bigger/new, smaller/old).
Verdict check_relation(const Sts& a, const Sts& b, RelationKind kind, const RelationOptions& opts = {});

} // namespace protochk
