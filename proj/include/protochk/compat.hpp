#pragma once

#include "protochk/model.hpp"
#include "protochk/product.hpp"
#include "protochk/verdict.hpp"

#include <optional>
#include <string_view>

namespace protochk {

enum class CompatNotion { DeadlockFree, UnidirectionalComplementarity, UnspecifiedReceptions };

std::string_view to_string(CompatNotion n) noexcept; // "df", "uc", "ur"
std::optional<CompatNotion> parse_notion(std::string_view s) noexcept;

struct CompatOptions {
    std::size_t max_states = 1'000'000;
};

/// τ-stable states reachable from `from` through τ moves only.
struct StableSet {
    std::vector<StateId> states;
    /// Some τ path from `from` enters a τ-cycle.
    bool divergent = false;
};

StableSet stable_states(const Sts& sts, const StateId& from);

// Every notion is evaluated at every reachable product state, so the
// criterion is re-established after each internal move of either side.
// Emissions only need a partner reception where the receiver is τ-stable;
// its τ-successors are product states of their own and are checked there.

Verdict check_deadlock_free(const Sts& a, const Sts& b, const CompatOptions& opts = {});
Verdict check_unspecified_receptions(const Sts& a, const Sts& b, const CompatOptions& opts = {});
/// Checks both directions; `direction` reports which ones hold.
Verdict check_unidirectional_complementarity(const Sts& a, const Sts& b, const CompatOptions& opts = {});
Verdict check_compat(const Sts& a, const Sts& b, CompatNotion notion, const CompatOptions& opts = {});

} // namespace protochk
