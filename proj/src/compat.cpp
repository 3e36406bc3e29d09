#include "protochk/compat.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace protochk {

std::string_view to_string(CompatNotion n) noexcept
{
    switch (n) {
    case CompatNotion::DeadlockFree: return "df";
    case CompatNotion::UnidirectionalComplementarity: return "uc";
    case CompatNotion::UnspecifiedReceptions: return "ur";
    }
    return "?";
}

std::optional<CompatNotion> parse_notion(std::string_view s) noexcept
{
    if (s == "df") return CompatNotion::DeadlockFree;
    if (s == "uc") return CompatNotion::UnidirectionalComplementarity;
    if (s == "ur") return CompatNotion::UnspecifiedReceptions;
    return std::nullopt;
}

namespace {

struct TauInfo {
    std::vector<std::vector<std::size_t>> stable; // per state
    std::vector<bool> divergent;
};

TauInfo tau_info(const Sts& sts)
{
    const auto cyclic = tau_cycle_states(sts);
    TauInfo info;
    info.stable.resize(sts.size());
    info.divergent.resize(sts.size(), false);
    for (std::size_t s = 0; s < sts.size(); ++s) {
        std::vector<bool> seen(sts.size(), false);
        std::deque<std::size_t> queue{s};
        seen[s] = true;
        while (!queue.empty()) {
            auto v = queue.front();
            queue.pop_front();
            if (cyclic[v]) info.divergent[s] = true;
            bool has_tau = false;
            for (auto e : sts.outgoing(v)) {
                const auto& edge = sts.edges()[e];
                if (!edge.label.is_tau()) continue;
                has_tau = true;
                if (!seen[edge.target]) {
                    seen[edge.target] = true;
                    queue.push_back(edge.target);
                }
            }
            if (!has_tau) info.stable[s].push_back(v);
        }
        std::sort(info.stable[s].begin(), info.stable[s].end());
    }
    return info;
}

bool offers_complement(const Sts& sts, std::size_t state, const Label& l)
{
    const auto& out = sts.outgoing(state);
    return std::any_of(out.begin(), out.end(), [&](std::size_t e) { return complementary(sts.edges()[e].label, l); });
}

/// Local condition evaluated at one product state; returns a description
/// of the violation or an empty string.
using LocalCheck = std::function<std::string(std::size_t)>;

struct Scan {
    std::optional<std::size_t> state;
    std::string violation;
};

Scan scan(const ProductLts& p, const LocalCheck& local)
{
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (auto msg = local(i); !msg.empty()) return {i, std::move(msg)};
        if (p.outgoing(i).empty() && !p.is_final(i)) {
            auto [l, r] = p.names(i);
            return {i, "deadlock: neither side can move from (" + l + ", " + r + ") and not both are final"};
        }
    }
    return {};
}

/// Emissions of `emitter` at `e_state` must be receivable by `receiver` at
/// `r_state` when the receiver is τ-stable; a receiver that can only
/// diverge never receives.
std::string unmatched_emission(const Sts& emitter, std::size_t e_state, const Sts& receiver, std::size_t r_state,
                               const TauInfo& rinfo)
{
    for (auto e : emitter.outgoing(e_state)) {
        const auto& l = emitter.edges()[e].label;
        if (!l.is_emission()) continue;
        if (receiver.is_stable(r_state)) {
            if (!offers_complement(receiver, r_state, l))
                return "unmatched emission: '" + emitter.name() + "' emits " + l.to_string() + " at " +
                       emitter.state(e_state) + " but '" + receiver.name() + "' cannot receive it at " +
                       receiver.state(r_state);
        } else if (rinfo.stable[r_state].empty()) {
            return "unmatched emission: '" + emitter.name() + "' emits " + l.to_string() + " at " +
                   emitter.state(e_state) + " but '" + receiver.name() + "' diverges from " +
                   receiver.state(r_state) + " (divergence: no tau-stable state is reachable)";
        }
    }
    return {};
}

/// Every observable of `smaller` at `s_state` must have its complement at
/// `c_state` whenever the complementer is τ-stable.
std::string uncomplemented(const Sts& smaller, std::size_t s_state, const Sts& complementer, std::size_t c_state,
                           const TauInfo& cinfo)
{
    for (auto e : smaller.outgoing(s_state)) {
        const auto& l = smaller.edges()[e].label;
        if (l.is_tau()) continue;
        if (complementer.is_stable(c_state)) {
            if (!offers_complement(complementer, c_state, l))
                return "'" + complementer.name() + "' at " + complementer.state(c_state) + " cannot complement " +
                       l.to_string() + " of '" + smaller.name() + "' at " + smaller.state(s_state);
        } else if (cinfo.stable[c_state].empty()) {
            return "'" + complementer.name() + "' diverges from " + complementer.state(c_state) + " and never offers " +
                   l.reversed().to_string() + " (divergence)";
        }
    }
    return {};
}

Verdict from_scan(const ProductLts& p, const Scan& s)
{
    Verdict v;
    v.holds = !s.state;
    v.warnings = p.divergence_warnings();
    if (s.state) {
        v.witness = p.witness_to(*s.state);
        v.violation = s.violation;
    }
    return v;
}

void add_livelock_warning(const ProductLts& p, Verdict& v)
{
    std::vector<std::vector<std::size_t>> preds(p.size());
    for (const auto& st : p.steps()) preds[st.to].push_back(st.from);
    std::vector<bool> good(p.size(), false);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p.is_final(i)) {
            good[i] = true;
            queue.push_back(i);
        }
    while (!queue.empty()) {
        auto s = queue.front();
        queue.pop_front();
        for (auto q : preds[s])
            if (!good[q]) {
                good[q] = true;
                queue.push_back(q);
            }
    }
    std::size_t count = 0;
    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (good[i] || p.outgoing(i).empty()) continue;
        ++count;
        if (!first) first = i;
    }
    if (!count) return;
    auto [l, r] = p.names(*first);
    v.warnings.push_back("livelock: " + std::to_string(count) +
                         " reachable product state(s) cannot reach a final state, e.g. (" + l + ", " + r + ")");
}

} // namespace

StableSet stable_states(const Sts& sts, const StateId& from)
{
    auto idx = sts.index_of(from);
    if (!idx) throw Error("unknown state '" + from + "' in '" + sts.name() + "'");
    const auto info = tau_info(sts);
    StableSet out;
    for (auto s : info.stable[*idx]) out.states.push_back(sts.state(s));
    out.divergent = info.divergent[*idx];
    return out;
}

Verdict check_deadlock_free(const Sts& a, const Sts& b, const CompatOptions& opts)
{
    const auto p = synchronous_product(a, b, {opts.max_states});
    auto v = from_scan(p, scan(p, [](std::size_t) { return std::string{}; }));
    add_livelock_warning(p, v);
    return v;
}

Verdict check_unspecified_receptions(const Sts& a, const Sts& b, const CompatOptions& opts)
{
    const auto p = synchronous_product(a, b, {opts.max_states});
    const auto ia = tau_info(a);
    const auto ib = tau_info(b);
    auto v = from_scan(p, scan(p, [&](std::size_t i) {
                           const auto& s = p.state(i);
                           auto msg = unmatched_emission(a, s.left, b, s.right, ib);
                           if (msg.empty()) msg = unmatched_emission(b, s.right, a, s.left, ia);
                           return msg;
                       }));
    add_livelock_warning(p, v);
    return v;
}

Verdict check_unidirectional_complementarity(const Sts& a, const Sts& b, const CompatOptions& opts)
{
    const auto p = synchronous_product(a, b, {opts.max_states});
    const auto ia = tau_info(a);
    const auto ib = tau_info(b);
    const Scan left_by_right = scan(p, [&](std::size_t i) {
        const auto& s = p.state(i);
        return uncomplemented(a, s.left, b, s.right, ib);
    });
    const Scan right_by_left = scan(p, [&](std::size_t i) {
        const auto& s = p.state(i);
        return uncomplemented(b, s.right, a, s.left, ia);
    });

    Verdict v;
    if (!left_by_right.state && !right_by_left.state) {
        v = from_scan(p, left_by_right);
        v.direction = ComplementDirection::Both;
    } else if (!left_by_right.state) {
        v = from_scan(p, left_by_right);
        v.direction = ComplementDirection::LeftComplementedByRight;
    } else if (!right_by_left.state) {
        v = from_scan(p, right_by_left);
        v.direction = ComplementDirection::RightComplementedByLeft;
    } else {
        const bool left_first = *left_by_right.state <= *right_by_left.state;
        v = from_scan(p, left_first ? left_by_right : right_by_left);
    }
    add_livelock_warning(p, v);
    return v;
}

Verdict check_compat(const Sts& a, const Sts& b, CompatNotion notion, const CompatOptions& opts)
{
    switch (notion) {
    case CompatNotion::DeadlockFree: return check_deadlock_free(a, b, opts);
    case CompatNotion::UnidirectionalComplementarity: return check_unidirectional_complementarity(a, b, opts);
    case CompatNotion::UnspecifiedReceptions: return check_unspecified_receptions(a, b, opts);
    }
    throw Error("unknown compatibility notion");
}

} // namespace protochk
