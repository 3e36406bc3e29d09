#include "protochk/equiv.hpp"

#include "lts.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace protochk {

using detail::Arc;
using detail::IndexedLts;
using detail::kTauId;
using detail::LabelId;
using detail::LabelTable;

std::string_view to_string(RelationKind k) noexcept
{
    switch (k) {
    case RelationKind::Strong: return "strong";
    case RelationKind::Branching: return "branching";
    case RelationKind::Weak: return "weak";
    case RelationKind::Trace: return "trace";
    case RelationKind::Simulation: return "simulation";
    case RelationKind::Subtype: return "subtype";
    }
    return "?";
}

std::optional<RelationKind> parse_relation(std::string_view s) noexcept
{
    for (auto k : {RelationKind::Strong, RelationKind::Branching, RelationKind::Weak, RelationKind::Trace,
                   RelationKind::Simulation, RelationKind::Subtype})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

namespace {

struct Prepared {
    Sts a;
    Sts b;
    std::vector<std::string> warnings;
};

Prepared prepare(const Sts& a, const Sts& b, RelationKind kind, const RelationOptions& opts)
{
    Prepared p{a, b, {}};
    if (!opts.annotate_finals.value_or(annotates_by_default(kind))) return p;
    for (Sts* s : {&p.a, &p.b}) {
        if (s->uses_message(kTick))
            p.warnings.push_back("'" + s->name() + "' already uses " + std::string(kTick) +
                                 "; final-state annotation skipped for it");
        else
            *s = annotate_finals(*s);
    }
    return p;
}

std::string qualified(const Prepared& p, std::size_t union_index)
{
    if (union_index < p.a.size()) return p.a.name() + ":" + p.a.state(union_index);
    return p.b.name() + ":" + p.b.state(union_index - p.a.size());
}

// ---------------------------------------------------------------------------
// Signature-based partition refinement over the disjoint union.

using Signature = std::vector<std::pair<LabelId, std::size_t>>;
using SignatureFn = std::function<std::vector<Signature>(const std::vector<std::size_t>&)>;

std::vector<std::size_t> refine(std::size_t n, const SignatureFn& signatures, std::vector<Signature>* final_sigs)
{
    std::vector<std::size_t> block(n, 0);
    std::size_t count = n ? 1 : 0;
    for (;;) {
        auto sigs = signatures(block);
        std::map<std::pair<std::size_t, Signature>, std::size_t> ids;
        std::vector<std::size_t> next(n);
        for (std::size_t s = 0; s < n; ++s) {
            auto [it, fresh] = ids.emplace(std::make_pair(block[s], sigs[s]), ids.size());
            next[s] = it->second;
        }
        const bool stable = ids.size() == count;
        count = ids.size();
        block = std::move(next);
        if (stable) {
            if (final_sigs) *final_sigs = signatures(block);
            return block;
        }
    }
}

std::vector<Signature> strong_signatures(const IndexedLts& lts, const std::vector<std::size_t>& block)
{
    std::vector<Signature> sigs(lts.size());
    for (std::size_t s = 0; s < lts.size(); ++s) {
        for (const auto& a : lts.out[s]) sigs[s].emplace_back(a.label, block[a.target]);
        std::sort(sigs[s].begin(), sigs[s].end());
        sigs[s].erase(std::unique(sigs[s].begin(), sigs[s].end()), sigs[s].end());
    }
    return sigs;
}

// sig(s) = {(a, B(t)) | s -a-> t not inert} ∪ sig(t) for every inert s -τ-> t.
std::vector<Signature> branching_signatures(const IndexedLts& lts, const std::vector<std::size_t>& block)
{
    const std::size_t n = lts.size();
    std::vector<Signature> sigs(n);
    std::vector<std::vector<std::size_t>> inert(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (const auto& a : lts.out[s]) {
            if (a.label == kTauId && block[a.target] == block[s])
                inert[s].push_back(a.target);
            else
                sigs[s].emplace_back(a.label, block[a.target]);
        }
        std::sort(sigs[s].begin(), sigs[s].end());
        sigs[s].erase(std::unique(sigs[s].begin(), sigs[s].end()), sigs[s].end());
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = n; s-- > 0;) {
            for (auto t : inert[s]) {
                if (t == s) continue;
                Signature merged;
                std::set_union(sigs[s].begin(), sigs[s].end(), sigs[t].begin(), sigs[t].end(),
                               std::back_inserter(merged));
                if (merged.size() != sigs[s].size()) {
                    sigs[s] = std::move(merged);
                    changed = true;
                }
            }
        }
    }
    return sigs;
}

Verdict bisim_verdict(const Prepared& p, const LabelTable& table, const std::vector<std::size_t>& block,
                      const std::vector<Signature>& sigs, std::string_view after)
{
    Verdict v;
    v.warnings = p.warnings;
    const std::size_t s = p.a.initial();
    const std::size_t t = p.a.size() + p.b.initial();
    v.holds = block[s] == block[t];
    if (v.holds) return v;

    RelationWitness w;
    w.position = std::make_pair(p.a.state(p.a.initial()), p.b.state(p.b.initial()));
    // Staying put (tau into one's own class) is the least telling
    // difference, so it is only reported when nothing else differs.
    auto explain = [&](std::size_t mover, std::size_t other, Side side, bool allow_stutter) {
        for (const auto& entry : sigs[mover]) {
            if (std::binary_search(sigs[other].begin(), sigs[other].end(), entry)) continue;
            if (!allow_stutter && entry.first == kTauId && entry.second == block[mover]) continue;
            std::size_t rep = 0;
            while (block[rep] != entry.second) ++rep;
            w.mover = side;
            w.move = table.label(entry.first).to_string();
            w.explanation = qualified(p, mover) + " can perform " + w.move + std::string(after) +
                            " into the class of " + qualified(p, rep) + "; " + qualified(p, other) + " cannot";
            return true;
        }
        return false;
    };
    if (!explain(s, t, Side::Left, false) && !explain(t, s, Side::Right, false) && !explain(s, t, Side::Left, true) &&
        !explain(t, s, Side::Right, true))
        w.explanation = "initial states fall into different classes";
    v.relation_witness = std::move(w);
    return v;
}

// ---------------------------------------------------------------------------
// Trace equivalence via minimal deterministic automata.

struct Dfa {
    std::size_t initial = 0;
    std::vector<std::vector<long>> delta; // -1: no successor
    std::vector<bool> accept;
};

Dfa determinize(const Sts& sts, LabelTable& table, const std::vector<LabelId>& alphabet, bool completed,
                std::size_t cap)
{
    const IndexedLts lts = detail::index_sts(sts, table);
    const auto closure = detail::tau_closures(lts);
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::vector<std::size_t>> subsets;
    Dfa dfa;
    auto intern = [&](std::vector<std::size_t> set) -> std::size_t {
        auto [it, fresh] = ids.emplace(set, subsets.size());
        if (fresh) {
            if (subsets.size() >= cap)
                throw StateExplosion("determinising '" + sts.name() + "' exceeds " + std::to_string(cap) + " subsets",
                                     cap);
            bool acc = false;
            if (completed)
                for (auto s : set) acc = acc || lts.out[s].empty();
            subsets.push_back(std::move(set));
            dfa.delta.emplace_back(alphabet.size(), -1);
            dfa.accept.push_back(acc);
        }
        return it->second;
    };
    intern(closure[lts.initial]);
    for (std::size_t cur = 0; cur < subsets.size(); ++cur) {
        for (std::size_t i = 0; i < alphabet.size(); ++i) {
            std::set<std::size_t> next;
            for (auto s : subsets[cur])
                for (const auto& a : lts.out[s])
                    if (a.label == alphabet[i]) next.insert(closure[a.target].begin(), closure[a.target].end());
            if (next.empty()) continue;
            const auto id = intern({next.begin(), next.end()});
            dfa.delta[cur][i] = static_cast<long>(id);
        }
    }
    return dfa;
}

/// Moore refinement followed by breadth-first renumbering, so equal
/// languages give identical automata.
Dfa canonical_minimal(const Dfa& dfa)
{
    const std::size_t n = dfa.delta.size();
    const std::size_t k = n ? dfa.delta[0].size() : 0;
    std::vector<std::size_t> cls(n);
    for (std::size_t s = 0; s < n; ++s) cls[s] = dfa.accept[s] ? 1 : 0;
    std::size_t count = 0;
    for (;;) {
        std::map<std::vector<long>, std::size_t> ids;
        std::vector<std::size_t> next(n);
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<long> key{static_cast<long>(cls[s])};
            for (std::size_t i = 0; i < k; ++i)
                key.push_back(dfa.delta[s][i] < 0 ? -1 : static_cast<long>(cls[dfa.delta[s][i]]));
            next[s] = ids.emplace(std::move(key), ids.size()).first->second;
        }
        cls = std::move(next);
        if (ids.size() == count) break;
        count = ids.size();
    }

    Dfa out;
    std::map<std::size_t, std::size_t> number;
    std::vector<std::size_t> order{cls[dfa.initial]};
    std::vector<std::size_t> rep(count, 0);
    for (std::size_t s = n; s-- > 0;) rep[cls[s]] = s;
    number[order[0]] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const std::size_t src = rep[order[i]];
        out.delta.emplace_back(k, -1);
        out.accept.push_back(dfa.accept[src]);
        for (std::size_t a = 0; a < k; ++a) {
            if (dfa.delta[src][a] < 0) continue;
            const std::size_t c = cls[dfa.delta[src][a]];
            auto [it, fresh] = number.emplace(c, order.size());
            if (fresh) order.push_back(c);
            out.delta[i][a] = static_cast<long>(it->second);
        }
    }
    return out;
}

/// Shortest word on which the two automata disagree.
std::optional<std::pair<std::vector<std::size_t>, bool>> distinguish(const Dfa& x, const Dfa& y)
{
    using Pair = std::pair<long, long>;
    std::map<Pair, std::pair<Pair, std::size_t>> parent;
    std::deque<Pair> queue{{0, 0}};
    parent[{0, 0}] = {{-1, -1}, 0};
    const std::size_t k = x.delta.empty() ? 0 : x.delta[0].size();
    auto path = [&](Pair p) {
        std::vector<std::size_t> word;
        while (p != Pair{0, 0}) {
            auto [prev, letter] = parent[p];
            word.push_back(letter);
            p = prev;
        }
        std::reverse(word.begin(), word.end());
        return word;
    };
    while (!queue.empty()) {
        auto p = queue.front();
        queue.pop_front();
        if (x.accept[p.first] != y.accept[p.second]) return std::make_pair(path(p), true);
        for (std::size_t a = 0; a < k; ++a) {
            const long nx = x.delta[p.first][a];
            const long ny = y.delta[p.second][a];
            if (nx < 0 && ny < 0) continue;
            if ((nx < 0) != (ny < 0)) {
                auto word = path(p);
                word.push_back(a);
                return std::make_pair(word, false);
            }
            Pair q{nx, ny};
            if (parent.emplace(q, std::make_pair(p, a)).second) queue.push_back(q);
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Greatest-fixpoint refinement for the asymmetric relations. Rows belong to
// system X, columns to Y. A challenge x -l-> x' must be answered by
// y =l=> y' with (x', y') kept, and symmetrically for Y's challenges.

struct GameSide {
    const IndexedLts* direct;
    const IndexedLts* saturated;
    std::function<bool(LabelId)> challenges;
};

class GameRefinement {
public:
    GameRefinement(GameSide x, GameSide y) : x_(std::move(x)), y_(std::move(y))
    {
        nx_ = x_.direct->size();
        ny_ = y_.direct->size();
        rel_.assign(nx_ * ny_, 1);
        build_preds(*x_.direct, direct_pred_x_);
        build_preds(*y_.direct, direct_pred_y_);
        build_preds(*x_.saturated, sat_pred_x_);
        build_preds(*y_.saturated, sat_pred_y_);
    }

    void run()
    {
        std::deque<std::pair<std::size_t, std::size_t>> removed;
        for (std::size_t i = 0; i < nx_; ++i)
            for (std::size_t j = 0; j < ny_; ++j)
                if (!failing_challenge(i, j).empty()) {
                    rel_[i * ny_ + j] = 0;
                    removed.emplace_back(i, j);
                }
        while (!removed.empty()) {
            auto [xp, yp] = removed.front();
            removed.pop_front();
            auto recheck = [&](std::size_t i, std::size_t j) {
                if (!rel_[i * ny_ + j] || failing_challenge(i, j).empty()) return;
                rel_[i * ny_ + j] = 0;
                removed.emplace_back(i, j);
            };
            for (const auto& [l, i] : direct_pred_x_[xp]) {
                if (!x_.challenges(l)) continue;
                for (const auto& [l2, j] : sat_pred_y_[yp])
                    if (l2 == l) recheck(i, j);
            }
            for (const auto& [l, j] : direct_pred_y_[yp]) {
                if (!y_.challenges(l)) continue;
                for (const auto& [l2, i] : sat_pred_x_[xp])
                    if (l2 == l) recheck(i, j);
            }
        }
    }

    bool related(std::size_t i, std::size_t j) const { return rel_[i * ny_ + j] != 0; }

    /// Description of an unanswered challenge at (i, j), or empty.
    struct Failure {
        std::optional<Side> mover;
        LabelId label = kTauId;
        std::size_t from = 0;
        bool empty() const noexcept { return !mover; }
    };

    Failure failing_challenge(std::size_t i, std::size_t j) const
    {
        for (const auto& a : x_.direct->out[i]) {
            if (!x_.challenges(a.label)) continue;
            if (!answered(y_.saturated->out[j], a.label, [&](std::size_t jj) { return related(a.target, jj); }))
                return {Side::Left, a.label, a.target};
        }
        for (const auto& a : y_.direct->out[j]) {
            if (!y_.challenges(a.label)) continue;
            if (!answered(x_.saturated->out[i], a.label, [&](std::size_t ii) { return related(ii, a.target); }))
                return {Side::Right, a.label, a.target};
        }
        return {};
    }

private:
    template <class Pred>
    static bool answered(const std::vector<Arc>& arcs, LabelId label, Pred ok)
    {
        auto lo = std::lower_bound(arcs.begin(), arcs.end(), Arc{label, 0});
        for (auto it = lo; it != arcs.end() && it->label == label; ++it)
            if (ok(it->target)) return true;
        return false;
    }

    static void build_preds(const IndexedLts& lts, std::vector<std::vector<std::pair<LabelId, std::size_t>>>& preds)
    {
        preds.assign(lts.size(), {});
        for (std::size_t s = 0; s < lts.size(); ++s)
            for (const auto& a : lts.out[s]) preds[a.target].emplace_back(a.label, s);
    }

    GameSide x_, y_;
    std::size_t nx_ = 0, ny_ = 0;
    std::vector<char> rel_;
    std::vector<std::vector<std::pair<LabelId, std::size_t>>> direct_pred_x_, direct_pred_y_, sat_pred_x_, sat_pred_y_;
};

Verdict game_verdict(const Prepared& p, const LabelTable& table, GameSide x, GameSide y)
{
    GameRefinement game(std::move(x), std::move(y));
    game.run();
    Verdict v;
    v.warnings = p.warnings;
    v.holds = game.related(p.a.initial(), p.b.initial());
    if (v.holds) return v;
    RelationWitness w;
    w.position = std::make_pair(p.a.initial_id(), p.b.initial_id());
    auto f = game.failing_challenge(p.a.initial(), p.b.initial());
    if (!f.empty()) {
        w.mover = f.mover;
        w.move = table.label(f.label).to_string();
        const bool left = *f.mover == Side::Left;
        const Sts& mover = left ? p.a : p.b;
        const Sts& other = left ? p.b : p.a;
        w.explanation = mover.name() + ":" + mover.initial_id() + " can perform " + w.move + " to " + mover.name() +
                        ":" + mover.state(f.from) + "; no matching move of " + other.name() + ":" +
                        other.initial_id() + " leads to a related state";
    }
    v.relation_witness = std::move(w);
    return v;
}

} // namespace

Verdict strong_bisim(const Sts& a, const Sts& b, const RelationOptions& opts)
{
    auto p = prepare(a, b, RelationKind::Strong, opts);
    LabelTable table;
    const IndexedLts u = detail::disjoint_union(p.a, p.b, table);
    std::vector<Signature> sigs;
    auto block = refine(u.size(), [&](const auto& blk) { return strong_signatures(u, blk); }, &sigs);
    return bisim_verdict(p, table, block, sigs, "");
}

Verdict branching_bisim(const Sts& a, const Sts& b, const RelationOptions& opts)
{
    auto p = prepare(a, b, RelationKind::Branching, opts);
    LabelTable table;
    const IndexedLts u = detail::disjoint_union(p.a, p.b, table);
    std::vector<Signature> sigs;
    auto block = refine(u.size(), [&](const auto& blk) { return branching_signatures(u, blk); }, &sigs);
    return bisim_verdict(p, table, block, sigs, " after inert tau steps");
}

Verdict weak_bisim(const Sts& a, const Sts& b, const RelationOptions& opts)
{
    auto p = prepare(a, b, RelationKind::Weak, opts);
    LabelTable table;
    const IndexedLts sat = detail::saturate(detail::disjoint_union(p.a, p.b, table));
    std::vector<Signature> sigs;
    auto block = refine(sat.size(), [&](const auto& blk) { return strong_signatures(sat, blk); }, &sigs);
    return bisim_verdict(p, table, block, sigs, " (modulo tau)");
}

Verdict trace_equiv(const Sts& a, const Sts& b, const RelationOptions& opts)
{
    auto p = prepare(a, b, RelationKind::Trace, opts);
    LabelTable table;
    std::set<Label> letters;
    for (const Sts* s : {&p.a, &p.b})
        for (const auto& l : s->alphabet())
            if (l.is_observable()) letters.insert(l);
    std::vector<LabelId> alphabet;
    for (const auto& l : letters) alphabet.push_back(table.id(l));

    const Dfa da = canonical_minimal(determinize(p.a, table, alphabet, opts.completed_traces, opts.max_subsets));
    const Dfa db = canonical_minimal(determinize(p.b, table, alphabet, opts.completed_traces, opts.max_subsets));

    Verdict v;
    v.warnings = p.warnings;
    v.holds = da.delta == db.delta && da.accept == db.accept;
    if (v.holds) return v;
    RelationWitness w;
    if (auto diff = distinguish(da, db)) {
        auto [word, completion] = *diff;
        std::string shown;
        for (auto letter : word) {
            w.trace.push_back(table.label(alphabet[letter]).to_string());
            shown += (shown.empty() ? "" : " ") + w.trace.back();
        }
        if (shown.empty()) shown = "the empty trace";
        if (completion)
            w.explanation = shown + " is a completed trace of only one of '" + p.a.name() + "' and '" + p.b.name() + "'";
        else
            w.explanation = shown + " is a trace of only one of '" + p.a.name() + "' and '" + p.b.name() + "'";
    }
    v.relation_witness = std::move(w);
    return v;
}

Verdict simulation_preorder(const Sts& big, const Sts& small, const RelationOptions& opts)
{
    // Rows: small (challenger), columns: big.
    auto p = prepare(small, big, RelationKind::Simulation, opts);
    LabelTable table;
    const IndexedLts xs = detail::index_sts(p.a, table);
    const IndexedLts ys = detail::index_sts(p.b, table);
    const IndexedLts xsat = detail::saturate(xs);
    const IndexedLts ysat = detail::saturate(ys);
    auto v = game_verdict(p, table, {&xs, &xsat, [](LabelId) { return true; }},
                          {&ys, &ysat, [](LabelId) { return false; }});
    if (v.relation_witness && v.relation_witness->position) {
        // Report positions as (big, small) like the arguments.
        auto& pos = *v.relation_witness->position;
        std::swap(pos.first, pos.second);
        v.relation_witness->mover = Side::Right;
    }
    return v;
}

Verdict behavioural_subtype(const Sts& replacement, const Sts& original, const RelationOptions& opts)
{
    auto p = prepare(replacement, original, RelationKind::Subtype, opts);
    LabelTable table;
    const IndexedLts xs = detail::index_sts(p.a, table);
    const IndexedLts ys = detail::index_sts(p.b, table);
    const IndexedLts xsat = detail::saturate(xs);
    const IndexedLts ysat = detail::saturate(ys);
    auto emits_or_tau = [&table](LabelId l) { return l == kTauId || table.label(l).is_emission(); };
    auto receives_or_tau = [&table](LabelId l) { return l == kTauId || table.label(l).is_reception(); };
    return game_verdict(p, table, {&xs, &xsat, emits_or_tau}, {&ys, &ysat, receives_or_tau});
}

Verdict check_relation(const Sts& a, const Sts& b, RelationKind kind, const RelationOptions& opts)
{
    switch (kind) {
    case RelationKind::Strong: return strong_bisim(a, b, opts);
    case RelationKind::Branching: return branching_bisim(a, b, opts);
    case RelationKind::Weak: return weak_bisim(a, b, opts);
    case RelationKind::Trace: return trace_equiv(a, b, opts);
    case RelationKind::Simulation: return simulation_preorder(a, b, opts);
    case RelationKind::Subtype: return behavioural_subtype(a, b, opts);
    }
    throw Error("unknown relation");
}

} // namespace protochk
