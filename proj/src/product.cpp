#include "protochk/product.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace protochk {

bool complementary(const Label& a, const Label& b) noexcept
{
    if (a.is_tau() || b.is_tau()) return false;
    return a.direction() != b.direction() && a.message() == b.message() && a.sorts() == b.sorts();
}

std::string_view to_string(StepKind k) noexcept
{
    switch (k) {
    case StepKind::Sync: return "sync";
    case StepKind::TauLeft: return "tau-left";
    case StepKind::TauRight: return "tau-right";
    }
    return "?";
}

std::string_view to_string(ComplementDirection d) noexcept
{
    switch (d) {
    case ComplementDirection::LeftComplementedByRight: return "left-complemented-by-right";
    case ComplementDirection::RightComplementedByLeft: return "right-complemented-by-left";
    case ComplementDirection::Both: return "both";
    }
    return "?";
}

std::vector<bool> tau_cycle_states(const Sts& sts)
{
    // Tarjan restricted to τ edges.
    const std::size_t n = sts.size();
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false), cyclic(n, false);
    std::vector<std::size_t> stack;
    int counter = 0;

    std::vector<std::vector<std::size_t>> succ(n);
    for (const auto& e : sts.edges())
        if (e.label.is_tau()) succ[e.source].push_back(e.target);

    struct Frame {
        std::size_t v;
        std::size_t next;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& f = call.back();
            if (f.next < succ[f.v].size()) {
                std::size_t w = succ[f.v][f.next++];
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const std::size_t v = f.v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] != index[v]) continue;
            std::vector<std::size_t> scc;
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                scc.push_back(w);
            } while (w != v);
            const bool self_loop = std::find(succ[v].begin(), succ[v].end(), v) != succ[v].end();
            if (scc.size() > 1 || self_loop)
                for (auto s : scc) cyclic[s] = true;
        }
    }
    return cyclic;
}

std::optional<std::size_t> ProductLts::index_of(ProductState s) const
{
    auto it = std::find(states_.begin(), states_.end(), s);
    if (it == states_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - states_.begin());
}

bool ProductLts::is_final(std::size_t i) const
{
    const auto& s = states_.at(i);
    return left_.is_final(s.left) && right_.is_final(s.right);
}

std::vector<std::size_t> ProductLts::path_to(std::size_t state) const
{
    std::vector<std::size_t> path;
    for (auto cur = parent_.at(state); cur; cur = parent_[steps_[*cur].from]) path.push_back(*cur);
    std::reverse(path.begin(), path.end());
    return path;
}

std::pair<std::string, std::string> ProductLts::names(std::size_t state) const
{
    const auto& s = states_.at(state);
    return {left_.state(s.left), right_.state(s.right)};
}

WitnessStep ProductLts::describe(const ProductStep& step) const
{
    WitnessStep w;
    w.kind = step.kind;
    if (step.kind == StepKind::Sync) {
        w.message = step.label.message();
        w.sorts = step.label.sorts();
        w.emitter = step.emitter;
    }
    w.from = names(step.from);
    w.to = names(step.to);
    return w;
}

WitnessTrace ProductLts::witness_to(std::size_t state) const
{
    WitnessTrace trace;
    for (auto s : path_to(state)) trace.push_back(describe(steps_[s]));
    return trace;
}

Sts ProductLts::to_sts(const std::string& name) const
{
    RawSts raw;
    raw.name = name;
    std::set<std::string> used;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < states_.size(); ++i) {
        auto [l, r] = names(i);
        std::string id = l + "_" + r;
        for (int k = 1; used.count(id); ++k) id = l + "_" + r + "_" + std::to_string(k);
        used.insert(id);
        ids.push_back(id);
    }
    raw.states = ids;
    raw.initial = ids[0];
    for (std::size_t i = 0; i < states_.size(); ++i)
        if (is_final(i)) raw.finals.push_back(ids[i]);
    for (const auto& st : steps_) {
        Label l = st.kind == StepKind::Sync ? Label::emission(st.label.message(), st.label.sorts()) : Label::tau();
        raw.transitions.push_back({ids[st.from], l, ids[st.to]});
    }
    return validate(raw);
}

ProductLts synchronous_product(const Sts& left, const Sts& right, ProductOptions options)
{
    ProductLts p;
    p.left_ = left;
    p.right_ = right;
    std::map<ProductState, std::size_t> index;

    auto intern = [&](ProductState s) -> std::pair<std::size_t, bool> {
        auto [it, fresh] = index.emplace(s, p.states_.size());
        if (fresh) {
            if (p.states_.size() >= options.max_states)
                throw StateExplosion("product exceeds " + std::to_string(options.max_states) + " states",
                                     options.max_states);
            p.states_.push_back(s);
            p.out_.emplace_back();
            p.parent_.emplace_back();
        }
        return {it->second, fresh};
    };

    struct Candidate {
        StepKind kind;
        Label label;
        Side emitter;
        ProductState target;
    };
    auto rank = [&](const Candidate& c) {
        return std::make_tuple(static_cast<int>(c.kind), c.label.to_string(), left.state(c.target.left),
                               right.state(c.target.right));
    };

    intern({left.initial(), right.initial()});
    for (std::size_t cur = 0; cur < p.states_.size(); ++cur) {
        const ProductState ps = p.states_[cur];
        std::vector<Candidate> cands;
        for (auto le : left.outgoing(ps.left)) {
            const auto& l = left.edges()[le];
            if (l.label.is_tau()) {
                cands.push_back({StepKind::TauLeft, Label::tau(), Side::Left, {l.target, ps.right}});
                continue;
            }
            for (auto re : right.outgoing(ps.right)) {
                const auto& r = right.edges()[re];
                if (!complementary(l.label, r.label)) continue;
                const bool left_emits = l.label.is_emission();
                cands.push_back({StepKind::Sync, left_emits ? l.label : r.label, left_emits ? Side::Left : Side::Right,
                                 {l.target, r.target}});
            }
        }
        for (auto re : right.outgoing(ps.right)) {
            const auto& r = right.edges()[re];
            if (r.label.is_tau()) cands.push_back({StepKind::TauRight, Label::tau(), Side::Right, {ps.left, r.target}});
        }
        std::stable_sort(cands.begin(), cands.end(),
                         [&](const Candidate& a, const Candidate& b) { return rank(a) < rank(b); });
        for (auto& c : cands) {
            auto [to, fresh] = intern(c.target);
            const std::size_t step = p.steps_.size();
            p.steps_.push_back({c.kind, std::move(c.label), c.emitter, cur, to});
            p.out_[cur].push_back(step);
            if (fresh) p.parent_[to] = step;
        }
    }

    for (std::size_t i = 0; i < p.states_.size(); ++i)
        if (p.out_[i].empty() && !p.is_final(i)) p.deadlocks_.push_back(i);

    auto warn_cycles = [&](const Sts& sts, bool is_left) {
        auto cyclic = tau_cycle_states(sts);
        std::set<std::size_t> hit;
        for (const auto& s : p.states_) {
            auto local = is_left ? s.left : s.right;
            if (cyclic[local]) hit.insert(local);
        }
        if (hit.empty()) return;
        std::string msg = "divergence: '" + sts.name() + "' has a reachable tau-cycle through";
        for (auto h : hit) msg += " " + sts.state(h);
        p.divergence_.push_back(std::move(msg));
    };
    warn_cycles(left, true);
    warn_cycles(right, false);
    return p;
}

std::vector<Deadlock> find_deadlocks(const ProductLts& product)
{
    std::vector<Deadlock> out;
    for (auto d : product.deadlocks()) out.push_back({product.state(d), product.witness_to(d)});
    return out;
}

} // namespace protochk
