#include "protochk/workflow.hpp"

#include <numeric>
#include <optional>

namespace protochk {

WfActivity WfActivity::sequence(std::vector<WfActivity> items)
{
    WfActivity a;
    a.kind = Kind::Sequence;
    a.children = std::move(items);
    return a;
}

WfActivity WfActivity::receive(std::string message, std::vector<std::string> sorts)
{
    WfActivity a;
    a.kind = Kind::Receive;
    a.message = std::move(message);
    a.sorts = std::move(sorts);
    return a;
}

WfActivity WfActivity::send(std::string message, std::vector<std::string> sorts)
{
    WfActivity a = receive(std::move(message), std::move(sorts));
    a.kind = Kind::Send;
    return a;
}

WfActivity WfActivity::if_else(std::vector<WfActivity> branches)
{
    WfActivity a;
    a.kind = Kind::IfElse;
    a.children = std::move(branches);
    return a;
}

WfActivity WfActivity::listen(std::vector<std::pair<Label, WfActivity>> events, std::vector<WfActivity> delay)
{
    WfActivity a;
    a.kind = Kind::Listen;
    for (auto& [label, body] : events) {
        a.events.push_back(std::move(label));
        a.children.push_back(std::move(body));
    }
    a.delay = std::move(delay);
    return a;
}

WfActivity WfActivity::while_loop(WfActivity body)
{
    WfActivity a;
    a.kind = Kind::While;
    a.children.push_back(std::move(body));
    return a;
}

WfActivity WfActivity::terminate()
{
    WfActivity a;
    a.kind = Kind::Terminate;
    return a;
}

WfActivity WfActivity::code()
{
    WfActivity a;
    a.kind = Kind::Code;
    return a;
}

namespace {

class Builder {
public:
    std::size_t fresh()
    {
        parent_.push_back(parent_.size());
        final_.push_back(false);
        return parent_.size() - 1;
    }

    void edge(std::size_t from, Label label, std::size_t to) { edges_.push_back({from, std::move(label), to}); }

    void merge(std::size_t from, std::size_t into)
    {
        from = find(from);
        into = find(into);
        if (from != into) parent_[from] = into;
    }

    /// Returns the exit state, or nullopt when control never leaves.
    std::optional<std::size_t> build(const WfActivity& a, std::size_t entry)
    {
        using K = WfActivity::Kind;
        switch (a.kind) {
        case K::Sequence: {
            std::optional<std::size_t> cur = entry;
            for (const auto& item : a.children) {
                if (!cur) throw WorkflowError("unreachable activity after a terminating activity");
                cur = build(item, *cur);
            }
            return cur;
        }
        case K::Receive:
        case K::Send: {
            auto x = fresh();
            edge(entry, Label::observable(a.message, a.kind == K::Send ? Direction::Emission : Direction::Reception,
                                          a.sorts),
                 x);
            return x;
        }
        case K::IfElse: {
            if (a.children.empty()) throw WorkflowError("ifelse needs at least one branch");
            std::optional<std::size_t> exit;
            for (const auto& branch : a.children) {
                auto b = fresh();
                edge(entry, Label::tau(), b);
                join(build(branch, b), exit);
            }
            return exit;
        }
        case K::Listen: {
            if (a.children.empty() || a.events.size() != a.children.size())
                throw WorkflowError("listen needs at least one event");
            std::optional<std::size_t> exit;
            for (std::size_t i = 0; i < a.children.size(); ++i) {
                auto c = fresh();
                edge(entry, a.events[i], c);
                join(build(a.children[i], c), exit);
            }
            for (const auto& d : a.delay) {
                auto c = fresh();
                edge(entry, Label::tau(), c);
                join(build(d, c), exit);
            }
            return exit;
        }
        case K::While: {
            if (a.children.size() != 1) throw WorkflowError("while needs exactly one body");
            auto b = fresh();
            edge(entry, Label::tau(), b);
            if (auto e = build(a.children.front(), b)) merge(*e, entry);
            auto x = fresh();
            edge(entry, Label::tau(), x);
            return x;
        }
        case K::Terminate: {
            auto f = fresh();
            final_[f] = true;
            edge(entry, Label::tau(), f);
            return std::nullopt;
        }
        case K::Code: {
            auto x = fresh();
            edge(entry, Label::tau(), x);
            return x;
        }
        }
        return std::nullopt;
    }

    Sts finish(const std::string& name, std::size_t initial, std::optional<std::size_t> exit)
    {
        if (exit) final_[find(*exit)] = true;
        std::vector<std::size_t> number(parent_.size(), 0);
        RawSts raw;
        raw.name = name;
        for (std::size_t i = 0; i < parent_.size(); ++i) {
            if (find(i) != i) continue;
            number[i] = raw.states.size();
            raw.states.push_back("q" + std::to_string(raw.states.size()));
        }
        auto id = [&](std::size_t s) { return raw.states[number[find(s)]]; };
        raw.initial = id(initial);
        for (std::size_t i = 0; i < parent_.size(); ++i)
            if (final_[i]) raw.finals.push_back(id(i));
        for (const auto& e : edges_) raw.transitions.push_back({id(e.from), e.label, id(e.to)});
        return validate(raw);
    }

private:
    struct E {
        std::size_t from;
        Label label;
        std::size_t to;
    };

    std::size_t find(std::size_t s)
    {
        while (parent_[s] != s) s = parent_[s] = parent_[parent_[s]];
        return s;
    }

    void join(std::optional<std::size_t> branch_exit, std::optional<std::size_t>& exit)
    {
        if (!branch_exit) return;
        if (!exit) exit = fresh();
        merge(*branch_exit, *exit);
    }

    std::vector<std::size_t> parent_;
    std::vector<bool> final_;
    std::vector<E> edges_;
};

} // namespace

Sts translate(const WfActivity& activity, const std::string& name)
{
    Builder b;
    const auto entry = b.fresh();
    const auto exit = b.build(activity, entry);
    return b.finish(name, entry, exit);
}

std::size_t expected_tau_count(const WfActivity& a)
{
    using K = WfActivity::Kind;
    std::size_t own = 0;
    switch (a.kind) {
    case K::IfElse: own = a.children.size(); break;
    case K::Listen: own = a.delay.empty() ? 0 : 1; break;
    case K::While: own = 2; break;
    case K::Terminate:
    case K::Code: own = 1; break;
    default: break;
    }
    auto sum = [](std::size_t acc, const WfActivity& c) { return acc + expected_tau_count(c); };
    own = std::accumulate(a.children.begin(), a.children.end(), own, sum);
    return std::accumulate(a.delay.begin(), a.delay.end(), own, sum);
}

} // namespace protochk
