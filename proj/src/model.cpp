#include "protochk/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace protochk {

bool is_identifier(std::string_view s) noexcept
{
    if (s.empty()) return false;
    auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(s.front())) return false;
    return std::all_of(s.begin() + 1, s.end(), [&](char c) { return alpha(c) || digit(c); });
}

Label Label::observable(std::string message, Direction dir, std::vector<std::string> sorts)
{
    if (message.empty()) throw Error("observable label needs a message name");
    Label l;
    l.tau_ = false;
    l.message_ = std::move(message);
    l.dir_ = dir;
    l.sorts_ = std::move(sorts);
    return l;
}

Label Label::emission(std::string message, std::vector<std::string> sorts)
{
    return observable(std::move(message), Direction::Emission, std::move(sorts));
}

Label Label::reception(std::string message, std::vector<std::string> sorts)
{
    return observable(std::move(message), Direction::Reception, std::move(sorts));
}

Label Label::reversed() const
{
    if (tau_) return *this;
    Label l = *this;
    l.dir_ = complement(dir_);
    return l;
}

Label Label::stripped() const
{
    Label l = *this;
    l.sorts_.clear();
    return l;
}

std::string Label::to_string() const
{
    if (tau_) return "tau";
    std::string s = message_;
    s += direction_char(dir_);
    if (!sorts_.empty()) {
        s += '(';
        for (std::size_t i = 0; i < sorts_.size(); ++i) {
            if (i) s += ',';
            s += sorts_[i];
        }
        s += ')';
    }
    return s;
}

bool operator<(const Label& a, const Label& b)
{
    if (a.tau_ != b.tau_) return a.tau_;
    return std::tie(a.message_, a.dir_, a.sorts_) < std::tie(b.message_, b.dir_, b.sorts_);
}

std::string_view to_string(ViolationKind k) noexcept
{
    switch (k) {
    case ViolationKind::UnknownState: return "UnknownState";
    case ViolationKind::FinalWithOutgoing: return "FinalWithOutgoing";
    case ViolationKind::EmptyFinalSet: return "EmptyFinalSet";
    case ViolationKind::DuplicateState: return "DuplicateState";
    }
    return "?";
}

namespace {

std::string join_violations(const std::vector<Violation>& vs)
{
    std::string s = "invalid transition system:";
    for (const auto& v : vs) {
        s += "\n  ";
        s += to_string(v.kind);
        s += ": ";
        s += v.detail;
    }
    return s;
}

} // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(join_violations(violations)), violations_(std::move(violations))
{
}

bool ValidationError::has(ViolationKind k) const noexcept
{
    return std::any_of(violations_.begin(), violations_.end(), [k](const Violation& v) { return v.kind == k; });
}

StateExplosion::StateExplosion(std::string what, std::size_t cap) : Error(std::move(what)), cap_(cap) {}

std::optional<std::size_t> Sts::index_of(std::string_view id) const
{
    auto it = std::find(states_.begin(), states_.end(), id);
    if (it == states_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - states_.begin());
}

std::vector<std::size_t> Sts::finals() const
{
    std::vector<std::size_t> fs;
    for (std::size_t i = 0; i < final_.size(); ++i)
        if (final_[i]) fs.push_back(i);
    return fs;
}

bool Sts::has_tau(std::size_t i) const
{
    const auto& out = out_.at(i);
    return std::any_of(out.begin(), out.end(), [&](std::size_t e) { return edges_[e].label.is_tau(); });
}

std::vector<Label> Sts::alphabet() const
{
    std::set<Label> ls;
    for (const auto& e : edges_) ls.insert(e.label);
    return {ls.begin(), ls.end()};
}

bool Sts::uses_message(std::string_view message) const
{
    return std::any_of(edges_.begin(), edges_.end(),
                       [&](const Edge& e) { return e.label.is_observable() && e.label.message() == message; });
}

RawSts Sts::to_raw() const
{
    RawSts raw;
    raw.name = name_;
    raw.states = states_;
    raw.initial = states_[initial_];
    for (auto f : finals()) raw.finals.push_back(states_[f]);
    for (const auto& e : edges_) raw.transitions.push_back({states_[e.source], e.label, states_[e.target]});
    return raw;
}

Sts Sts::renamed(std::string name) const
{
    Sts copy = *this;
    copy.name_ = std::move(name);
    return copy;
}

bool operator==(const Sts& a, const Sts& b)
{
    if (a.name_ != b.name_ || a.states_.size() != b.states_.size() || a.edges_.size() != b.edges_.size())
        return false;
    if (a.initial_id() != b.initial_id()) return false;
    std::set<StateId> sa(a.states_.begin(), a.states_.end());
    std::set<StateId> sb(b.states_.begin(), b.states_.end());
    if (sa != sb) return false;
    std::set<StateId> fa, fb;
    for (auto f : a.finals()) fa.insert(a.states_[f]);
    for (auto f : b.finals()) fb.insert(b.states_[f]);
    if (fa != fb) return false;
    for (std::size_t i = 0; i < a.edges_.size(); ++i) {
        const auto& x = a.edges_[i];
        const auto& y = b.edges_[i];
        if (x.label != y.label || a.states_[x.source] != b.states_[y.source] ||
            a.states_[x.target] != b.states_[y.target])
            return false;
    }
    return true;
}

Sts validate(const RawSts& raw)
{
    std::vector<Violation> errs;
    Sts sts;
    sts.name_ = raw.name;
    std::unordered_map<std::string, std::size_t> index;

    auto declare = [&](const StateId& id) {
        auto [it, fresh] = index.emplace(id, sts.states_.size());
        if (fresh) sts.states_.push_back(id);
        return it->second;
    };
    const bool implicit = raw.states.empty();
    if (!implicit) {
        for (const auto& id : raw.states) {
            if (index.count(id))
                errs.push_back({ViolationKind::DuplicateState, "state '" + id + "' declared twice"});
            else
                declare(id);
        }
    }
    auto resolve = [&](const StateId& id, const char* role) -> std::optional<std::size_t> {
        if (id.empty()) {
            errs.push_back({ViolationKind::UnknownState, std::string(role) + " state is empty"});
            return std::nullopt;
        }
        if (implicit) return declare(id);
        auto it = index.find(id);
        if (it == index.end()) {
            errs.push_back({ViolationKind::UnknownState, std::string(role) + " state '" + id + "' is not declared"});
            return std::nullopt;
        }
        return it->second;
    };

    auto init = resolve(raw.initial, "initial");
    std::vector<std::size_t> finals;
    std::set<StateId> seen_finals;
    for (const auto& f : raw.finals) {
        if (!seen_finals.insert(f).second) {
            errs.push_back({ViolationKind::DuplicateState, "final state '" + f + "' listed twice"});
            continue;
        }
        if (auto i = resolve(f, "final")) finals.push_back(*i);
    }
    if (raw.finals.empty()) errs.push_back({ViolationKind::EmptyFinalSet, "no final state"});

    for (const auto& t : raw.transitions) {
        auto s = resolve(t.source, "source");
        auto d = resolve(t.target, "target");
        if (s && d) sts.edges_.push_back({*s, t.label, *d});
    }

    sts.final_.assign(sts.states_.size(), false);
    for (auto f : finals) sts.final_[f] = true;
    sts.out_.assign(sts.states_.size(), {});
    for (std::size_t e = 0; e < sts.edges_.size(); ++e) sts.out_[sts.edges_[e].source].push_back(e);

    std::set<std::size_t> reported;
    for (const auto& e : sts.edges_) {
        if (sts.final_[e.source] && reported.insert(e.source).second)
            errs.push_back({ViolationKind::FinalWithOutgoing,
                            "final state '" + sts.states_[e.source] + "' has outgoing transitions"});
    }

    if (!errs.empty()) throw ValidationError(std::move(errs));
    sts.initial_ = *init;
    return sts;
}

namespace {

Sts map_labels(const Sts& sts, Label (Label::*f)() const)
{
    RawSts raw = sts.to_raw();
    for (auto& t : raw.transitions) t.label = (t.label.*f)();
    return validate(raw);
}

std::string fresh_state_name(const Sts& sts, std::string base)
{
    if (!sts.index_of(base)) return base;
    for (int i = 1;; ++i) {
        auto candidate = base + "_" + std::to_string(i);
        if (!sts.index_of(candidate)) return candidate;
    }
}

} // namespace

Sts reverse_directions(const Sts& sts) { return map_labels(sts, &Label::reversed); }

Sts strip_parameters(const Sts& sts) { return map_labels(sts, &Label::stripped); }

Sts annotate_finals(const Sts& sts)
{
    if (sts.uses_message(kTick))
        throw ReservedNameCollision("'" + sts.name() + "' already uses the reserved message " + std::string(kTick));
    RawSts raw = sts.to_raw();
    const auto sink = fresh_state_name(sts, "sink");
    raw.states.push_back(sink);
    for (const auto& f : raw.finals) raw.transitions.push_back({f, Label::emission(std::string(kTick)), sink});
    raw.finals = {sink};
    return validate(raw);
}

Sts tau_confluence_reduce(const Sts& sts)
{
    struct E {
        std::size_t src;
        Label label;
        std::size_t dst;
    };
    const std::size_t n = sts.size();
    std::vector<E> edges;
    for (const auto& e : sts.edges()) edges.push_back({e.source, e.label, e.target});
    std::vector<bool> alive(n, true);
    std::size_t initial = sts.initial();

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = 0; s < n && !changed; ++s) {
            if (!alive[s]) continue;
            const E* only = nullptr;
            std::size_t count = 0;
            for (const auto& e : edges)
                if (e.src == s) {
                    ++count;
                    only = &e;
                }
            if (count != 1 || !only->label.is_tau() || only->dst == s) continue;
            const std::size_t survivor = only->dst;
            edges.erase(std::remove_if(edges.begin(), edges.end(), [&](const E& e) { return e.src == s; }),
                        edges.end());
            for (auto& e : edges)
                if (e.dst == s) e.dst = survivor;
            if (initial == s) initial = survivor;
            alive[s] = false;
            changed = true;
        }
    }

    RawSts raw;
    raw.name = sts.name();
    for (std::size_t i = 0; i < n; ++i)
        if (alive[i]) raw.states.push_back(sts.state(i));
    raw.initial = sts.state(initial);
    for (auto f : sts.finals()) raw.finals.push_back(sts.state(f));
    for (const auto& e : edges) raw.transitions.push_back({sts.state(e.src), e.label, sts.state(e.dst)});
    return validate(raw);
}

} // namespace protochk
