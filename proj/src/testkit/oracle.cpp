// Deliberately naive reference implementations. Nothing here shares code
// with the production checkers beyond the Sts data type.

#include "protochk/testkit.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>

namespace protochk::testkit {

namespace {

using Rel = std::vector<std::vector<bool>>;

std::vector<std::set<std::size_t>> tau_reach(const Sts& s)
{
    std::vector<std::set<std::size_t>> r(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<std::size_t> stack{i};
        r[i].insert(i);
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (auto e : s.outgoing(v)) {
                const auto& edge = s.edges()[e];
                if (edge.label.is_tau() && r[i].insert(edge.target).second) stack.push_back(edge.target);
            }
        }
    }
    return r;
}

/// Targets of s =l=> (τ* l τ*, or τ* alone for l = τ).
std::set<std::size_t> weak_after(const Sts& s, const std::vector<std::set<std::size_t>>& tr, std::size_t from,
                                 const Label& l)
{
    if (l.is_tau()) return tr[from];
    std::set<std::size_t> out;
    for (auto m : tr[from])
        for (auto e : s.outgoing(m))
            if (s.edges()[e].label == l) out.insert(tr[s.edges()[e].target].begin(), tr[s.edges()[e].target].end());
    return out;
}

struct Sides {
    Sts a, b;
};

Sides prepare(const Sts& a, const Sts& b, RelationKind kind, const RelationOptions& opts)
{
    Sides s{a, b};
    if (opts.annotate_finals.value_or(annotates_by_default(kind))) {
        if (!s.a.uses_message(kTick)) s.a = annotate_finals(s.a);
        if (!s.b.uses_message(kTick)) s.b = annotate_finals(s.b);
    }
    return s;
}

/// Greatest fixpoint: start from all pairs and drop any pair failing
/// `ok` until nothing changes.
Rel fixpoint(std::size_t n, std::size_t m, const std::function<bool(const Rel&, std::size_t, std::size_t)>& ok)
{
    Rel r(n, std::vector<bool>(m, true));
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (r[i][j] && !ok(r, i, j)) {
                    r[i][j] = false;
                    changed = true;
                }
    }
    return r;
}

bool strong_ok(const Sts& x, const Sts& y, const Rel& r, std::size_t i, std::size_t j, bool flip)
{
    for (auto e : x.outgoing(i)) {
        const auto& xe = x.edges()[e];
        bool found = false;
        for (auto f : y.outgoing(j)) {
            const auto& ye = y.edges()[f];
            if (ye.label == xe.label && (flip ? r[ye.target][xe.target] : r[xe.target][ye.target])) found = true;
        }
        if (!found) return false;
    }
    return true;
}

/// x's direct moves from i answered weakly by y from j. `filter` selects
/// which moves of x are challenges.
bool weak_ok(const Sts& x, const Sts& y, const std::vector<std::set<std::size_t>>& ytr, const Rel& r, std::size_t i,
             std::size_t j, bool flip, const std::function<bool(const Label&)>& filter)
{
    for (auto e : x.outgoing(i)) {
        const auto& xe = x.edges()[e];
        if (!filter(xe.label)) continue;
        bool found = false;
        for (auto t : weak_after(y, ytr, j, xe.label))
            if (flip ? r[t][xe.target] : r[xe.target][t]) found = true;
        if (!found) return false;
    }
    return true;
}

bool branching_ok(const Sts& x, const Sts& y, const std::vector<std::set<std::size_t>>& ytr, const Rel& r,
                  std::size_t i, std::size_t j, bool flip)
{
    auto rel = [&](std::size_t xi, std::size_t yj) { return flip ? r[yj][xi] : r[xi][yj]; };
    for (auto e : x.outgoing(i)) {
        const auto& xe = x.edges()[e];
        if (xe.label.is_tau() && rel(xe.target, j)) continue;
        bool found = false;
        for (auto mid : ytr[j]) {
            if (!rel(i, mid)) continue;
            for (auto f : y.outgoing(mid)) {
                const auto& ye = y.edges()[f];
                if (ye.label == xe.label && rel(xe.target, ye.target)) found = true;
            }
        }
        if (!found) return false;
    }
    return true;
}

bool oracle_trace(const Sts& a, const Sts& b, bool completed)
{
    const auto ta = tau_reach(a);
    const auto tb = tau_reach(b);
    std::set<Label> letters;
    for (const Sts* s : {&a, &b})
        for (const auto& l : s->alphabet())
            if (!l.is_tau()) letters.insert(l);
    using Subset = std::set<std::size_t>;
    auto step = [](const Sts& s, const std::vector<Subset>& tr, const Subset& from, const Label& l) {
        Subset out;
        for (auto q : from)
            for (auto t : weak_after(s, tr, q, l)) out.insert(t);
        return out;
    };
    auto has_end = [](const Sts& s, const Subset& set) {
        return std::any_of(set.begin(), set.end(), [&](std::size_t q) { return s.outgoing(q).empty(); });
    };
    std::set<std::pair<Subset, Subset>> seen;
    std::queue<std::pair<Subset, Subset>> work;
    work.push({ta[a.initial()], tb[b.initial()]});
    seen.insert(work.front());
    while (!work.empty()) {
        auto [x, y] = work.front();
        work.pop();
        if (completed && has_end(a, x) != has_end(b, y)) return false;
        for (const auto& l : letters) {
            auto nx = step(a, ta, x, l);
            auto ny = step(b, tb, y, l);
            if (nx.empty() != ny.empty()) return false;
            if (nx.empty()) continue;
            if (seen.insert({nx, ny}).second) work.push({std::move(nx), std::move(ny)});
        }
    }
    return true;
}

} // namespace

bool oracle_relation(const Sts& a0, const Sts& b0, RelationKind kind, const RelationOptions& opts)
{
    const auto [a, b] = prepare(a0, b0, kind, opts);
    if (a.size() * b.size() > 10'000) throw SizeLimit("oracle limited to 10000 state pairs");
    const auto ta = tau_reach(a);
    const auto tb = tau_reach(b);
    auto any = [](const Label&) { return true; };
    Rel r;
    switch (kind) {
    case RelationKind::Strong:
        r = fixpoint(a.size(), b.size(), [&](const Rel& r, std::size_t i, std::size_t j) {
            return strong_ok(a, b, r, i, j, false) && strong_ok(b, a, r, j, i, true);
        });
        break;
    case RelationKind::Weak:
        r = fixpoint(a.size(), b.size(), [&](const Rel& r, std::size_t i, std::size_t j) {
            return weak_ok(a, b, tb, r, i, j, false, any) && weak_ok(b, a, ta, r, j, i, true, any);
        });
        break;
    case RelationKind::Branching:
        r = fixpoint(a.size(), b.size(), [&](const Rel& r, std::size_t i, std::size_t j) {
            return branching_ok(a, b, tb, r, i, j, false) && branching_ok(b, a, ta, r, j, i, true);
        });
        break;
    case RelationKind::Trace: return oracle_trace(a, b, opts.completed_traces);
    case RelationKind::Simulation:
        // a = big answers, b = small challenges.
        r = fixpoint(a.size(), b.size(), [&](const Rel& r, std::size_t i, std::size_t j) {
            return weak_ok(b, a, ta, r, j, i, true, any);
        });
        break;
    case RelationKind::Subtype: {
        // a = new, b = old.
        auto emits_or_tau = [](const Label& l) { return !l.is_reception(); };
        auto receives_or_tau = [](const Label& l) { return !l.is_emission(); };
        r = fixpoint(a.size(), b.size(), [&](const Rel& r, std::size_t i, std::size_t j) {
            return weak_ok(a, b, tb, r, i, j, false, emits_or_tau) && weak_ok(b, a, ta, r, j, i, true, receives_or_tau);
        });
        break;
    }
    }
    return r[a.initial()][b.initial()];
}

bool oracle_compat(const Sts& a, const Sts& b, CompatNotion notion)
{
    const auto ta = tau_reach(a);
    const auto tb = tau_reach(b);
    auto stable = [](const Sts& s, std::size_t q) {
        for (auto e : s.outgoing(q))
            if (s.edges()[e].label.is_tau()) return false;
        return true;
    };
    auto can_stabilise = [&](const Sts& s, const std::vector<std::set<std::size_t>>& tr, std::size_t q) {
        return std::any_of(tr[q].begin(), tr[q].end(), [&](std::size_t v) { return stable(s, v); });
    };
    auto offers = [](const Sts& s, std::size_t q, const Label& l) {
        for (auto e : s.outgoing(q)) {
            const auto& m = s.edges()[e].label;
            if (!m.is_tau() && !l.is_tau() && m.message() == l.message() && m.direction() != l.direction() &&
                m.sorts() == l.sorts())
                return true;
        }
        return false;
    };
    // Does `y` at q answer every label of `x` at p that `need` selects?
    auto answers = [&](const Sts& x, std::size_t p, const Sts& y, const std::vector<std::set<std::size_t>>& ytr,
                       std::size_t q, auto need) {
        for (auto e : x.outgoing(p)) {
            const auto& l = x.edges()[e].label;
            if (!need(l)) continue;
            if (stable(y, q) ? !offers(y, q, l) : !can_stabilise(y, ytr, q)) return false;
        }
        return true;
    };
    auto emissions = [](const Label& l) { return l.is_emission(); };
    auto observables = [](const Label& l) { return !l.is_tau(); };

    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{a.initial(), b.initial()}};
    seen.insert(stack.back());
    bool deadlock = false, ur = true, left_by_right = true, right_by_left = true;
    while (!stack.empty()) {
        auto [p, q] = stack.back();
        stack.pop_back();
        std::vector<std::pair<std::size_t, std::size_t>> next;
        for (auto e : a.outgoing(p)) {
            const auto& ae = a.edges()[e];
            if (ae.label.is_tau()) {
                next.emplace_back(ae.target, q);
                continue;
            }
            for (auto f : b.outgoing(q)) {
                const auto& bl = b.edges()[f].label;
                if (!bl.is_tau() && bl.message() == ae.label.message() && bl.direction() != ae.label.direction() &&
                    bl.sorts() == ae.label.sorts())
                    next.emplace_back(ae.target, b.edges()[f].target);
            }
        }
        for (auto f : b.outgoing(q))
            if (b.edges()[f].label.is_tau()) next.emplace_back(p, b.edges()[f].target);
        if (next.empty() && !(a.is_final(p) && b.is_final(q))) deadlock = true;
        ur = ur && answers(a, p, b, tb, q, emissions) && answers(b, q, a, ta, p, emissions);
        left_by_right = left_by_right && answers(a, p, b, tb, q, observables);
        right_by_left = right_by_left && answers(b, q, a, ta, p, observables);
        for (auto& n : next)
            if (seen.insert(n).second) stack.push_back(n);
    }
    switch (notion) {
    case CompatNotion::DeadlockFree: return !deadlock;
    case CompatNotion::UnspecifiedReceptions: return !deadlock && ur;
    case CompatNotion::UnidirectionalComplementarity: return !deadlock && (left_by_right || right_by_left);
    }
    return false;
}

std::optional<std::pair<std::size_t, std::size_t>> replay(const Sts& left, const Sts& right, const WitnessTrace& trace)
{
    std::size_t l = left.initial(), r = right.initial();
    for (const auto& st : trace) {
        if (st.from.first != left.state(l) || st.from.second != right.state(r)) return std::nullopt;
        auto move = [](const Sts& s, std::size_t from, const std::string& to,
                       const std::function<bool(const Label&)>& fits) -> std::optional<std::size_t> {
            for (auto e : s.outgoing(from)) {
                const auto& edge = s.edges()[e];
                if (fits(edge.label) && s.state(edge.target) == to) return edge.target;
            }
            return std::nullopt;
        };
        std::optional<std::size_t> nl = l, nr = r;
        if (st.kind == StepKind::TauLeft) {
            nl = move(left, l, st.to.first, [](const Label& x) { return x.is_tau(); });
        } else if (st.kind == StepKind::TauRight) {
            nr = move(right, r, st.to.second, [](const Label& x) { return x.is_tau(); });
        } else {
            auto as = [&](Direction d) {
                return [&st, d](const Label& x) {
                    return !x.is_tau() && x.direction() == d && x.message() == st.message && x.sorts() == st.sorts;
                };
            };
            const bool left_emits = st.emitter == Side::Left;
            nl = move(left, l, st.to.first, as(left_emits ? Direction::Emission : Direction::Reception));
            nr = move(right, r, st.to.second, as(left_emits ? Direction::Reception : Direction::Emission));
        }
        if (!nl || !nr) return std::nullopt;
        if ((st.kind == StepKind::TauLeft && *nr != r) || (st.kind == StepKind::TauRight && *nl != l))
            return std::nullopt;
        l = *nl;
        r = *nr;
        if (left.state(l) != st.to.first || right.state(r) != st.to.second) return std::nullopt;
    }
    return std::make_pair(l, r);
}

bool isomorphic(const Sts& a, const Sts& b)
{
    if (a.size() != b.size() || a.edges().size() != b.edges().size()) return false;
    using Key = std::tuple<std::size_t, Label, std::size_t>;
    std::multiset<Key> eb;
    for (const auto& e : b.edges()) eb.insert({e.source, e.label, e.target});

    const std::size_t n = a.size();
    std::vector<long> to(n, -1);
    std::vector<bool> used(n, false);
    auto consistent = [&](std::size_t s) {
        // Edges of a between already-mapped states must exist in b.
        std::multiset<Key> want, have;
        for (const auto& e : a.edges())
            if (to[e.source] >= 0 && to[e.target] >= 0 && (e.source == s || e.target == s))
                want.insert({static_cast<std::size_t>(to[e.source]), e.label, static_cast<std::size_t>(to[e.target])});
        for (const auto& k : want)
            if (eb.count(k) < want.count(k)) return false;
        return true;
    };
    std::function<bool(std::size_t)> go = [&](std::size_t s) -> bool {
        if (s == n) {
            std::multiset<Key> ea;
            for (const auto& e : a.edges())
                ea.insert({static_cast<std::size_t>(to[e.source]), e.label, static_cast<std::size_t>(to[e.target])});
            return ea == eb;
        }
        for (std::size_t t = 0; t < n; ++t) {
            if (used[t] || a.is_final(s) != b.is_final(t)) continue;
            if ((s == a.initial()) != (t == b.initial())) continue;
            if (a.outgoing(s).size() != b.outgoing(t).size()) continue;
            to[s] = static_cast<long>(t);
            used[t] = true;
            if (consistent(s) && go(s + 1)) return true;
            used[t] = false;
            to[s] = -1;
        }
        return false;
    };
    return go(0);
}

} // namespace protochk::testkit
