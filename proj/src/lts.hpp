#pragma once

// Integer-labelled view of one or two transition systems, shared by the
// relation checkers.

#include "protochk/model.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace protochk::detail {

using LabelId = int;
inline constexpr LabelId kTauId = 0;

class LabelTable {
public:
    LabelTable() { labels_.push_back(Label::tau()); }

    LabelId id(const Label& l)
    {
        if (l.is_tau()) return kTauId;
        auto [it, fresh] = ids_.emplace(l, static_cast<LabelId>(labels_.size()));
        if (fresh) labels_.push_back(l);
        return it->second;
    }
    const Label& label(LabelId id) const { return labels_.at(static_cast<std::size_t>(id)); }
    std::size_t size() const noexcept { return labels_.size(); }

private:
    std::vector<Label> labels_;
    std::map<Label, LabelId> ids_;
};

struct Arc {
    LabelId label;
    std::size_t target;
    friend auto operator<=>(const Arc&, const Arc&) = default;
};

struct IndexedLts {
    std::size_t initial = 0;
    std::vector<std::vector<Arc>> out;

    std::size_t size() const noexcept { return out.size(); }
};

inline IndexedLts index_sts(const Sts& sts, LabelTable& table, std::size_t offset = 0)
{
    IndexedLts lts;
    lts.initial = sts.initial() + offset;
    lts.out.resize(sts.size());
    for (const auto& e : sts.edges()) lts.out[e.source].push_back({table.id(e.label), e.target + offset});
    return lts;
}

/// Disjoint union: states of `b` follow those of `a`.
inline IndexedLts disjoint_union(const Sts& a, const Sts& b, LabelTable& table)
{
    IndexedLts u = index_sts(a, table);
    IndexedLts ub = index_sts(b, table, a.size());
    u.out.insert(u.out.end(), ub.out.begin(), ub.out.end());
    return u;
}

/// Reflexive-transitive τ closure of every state, each sorted.
inline std::vector<std::vector<std::size_t>> tau_closures(const IndexedLts& lts)
{
    const std::size_t n = lts.size();
    std::vector<std::vector<std::size_t>> closure(n);
    std::vector<char> seen(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<std::size_t> stack{s}, reached;
        seen[s] = 1;
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            reached.push_back(v);
            for (const auto& a : lts.out[v])
                if (a.label == kTauId && !seen[a.target]) {
                    seen[a.target] = 1;
                    stack.push_back(a.target);
                }
        }
        for (auto v : reached) seen[v] = 0;
        std::sort(reached.begin(), reached.end());
        closure[s] = std::move(reached);
    }
    return closure;
}

/// Saturated transitions: s =τ=> t for t in closure(s), and s =a=> t for
/// τ* a τ*. Each state's arcs are sorted and unique.
inline IndexedLts saturate(const IndexedLts& lts)
{
    const auto closure = tau_closures(lts);
    IndexedLts sat;
    sat.initial = lts.initial;
    sat.out.resize(lts.size());
    for (std::size_t s = 0; s < lts.size(); ++s) {
        auto& arcs = sat.out[s];
        for (auto t : closure[s]) arcs.push_back({kTauId, t});
        for (auto mid : closure[s])
            for (const auto& a : lts.out[mid])
                if (a.label != kTauId)
                    for (auto t : closure[a.target]) arcs.push_back({a.label, t});
        std::sort(arcs.begin(), arcs.end());
        arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    }
    return sat;
}

} // namespace protochk::detail
