#include "protochk/testkit.hpp"

#include "protochk/product.hpp"

#include <algorithm>
#include <map>

namespace protochk::testkit {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) // inclusive
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string message_name(std::size_t i) { return std::string(1, static_cast<char>('a' + i % 26)); }

Label random_observable(std::mt19937_64& rng, std::size_t alphabet)
{
    auto msg = message_name(pick(rng, 0, std::max<std::size_t>(alphabet, 1) - 1));
    return chance(rng, 0.5) ? Label::emission(msg) : Label::reception(msg);
}

std::string fresh(const RawSts& raw, const std::string& base)
{
    for (std::size_t k = 0;; ++k) {
        auto id = base + std::to_string(k);
        if (std::find(raw.states.begin(), raw.states.end(), id) == raw.states.end()) return id;
    }
}

} // namespace

Sts generate_sts(const GenConfig& cfg, const std::string& name)
{
    std::mt19937_64 rng(cfg.seed);
    const std::size_t n = pick(rng, 1, std::max<std::size_t>(cfg.max_states, 1));
    RawSts raw;
    raw.name = name;
    for (std::size_t i = 0; i < n; ++i) raw.states.push_back("s" + std::to_string(i));
    raw.initial = "s0";

    std::vector<bool> final(n, false);
    for (std::size_t i = 1; i < n; ++i) final[i] = chance(rng, 0.3);
    if (n == 1) final[0] = true;
    if (std::none_of(final.begin(), final.end(), [](bool b) { return b; })) final[n - 1] = true;

    std::vector<std::size_t> nonfinal;
    for (std::size_t i = 0; i < n; ++i)
        if (!final[i]) nonfinal.push_back(i);

    auto label_for = [&](std::size_t src, std::size_t dst) {
        const bool tau_ok = !cfg.tau_acyclic || dst > src;
        if (tau_ok && chance(rng, cfg.tau_probability)) return Label::tau();
        return random_observable(rng, cfg.alphabet_size);
    };
    auto add = [&](std::size_t src, std::size_t dst) {
        raw.transitions.push_back({raw.states[src], label_for(src, dst), raw.states[dst]});
    };

    // Spanning tree from s0 so that every state is reachable.
    for (std::size_t i = 1; i < n; ++i) {
        std::vector<std::size_t> parents;
        for (auto p : nonfinal)
            if (p < i) parents.push_back(p);
        add(parents[pick(rng, 0, parents.size() - 1)], i);
    }
    const std::size_t extra_budget = cfg.max_transitions > raw.transitions.size()
                                         ? cfg.max_transitions - raw.transitions.size()
                                         : 0;
    const std::size_t extra = nonfinal.empty() ? 0 : pick(rng, 0, extra_budget);
    for (std::size_t k = 0; k < extra; ++k)
        add(nonfinal[pick(rng, 0, nonfinal.size() - 1)], pick(rng, 0, n - 1));

    for (std::size_t i = 0; i < n; ++i)
        if (final[i]) raw.finals.push_back(raw.states[i]);
    return validate(raw);
}

Sts generate_deterministic_sts(const GenConfig& cfg, const std::string& name)
{
    std::mt19937_64 rng(cfg.seed);
    const std::size_t n = pick(rng, 1, std::max<std::size_t>(cfg.max_states, 1));
    const std::size_t k = std::max<std::size_t>(cfg.alphabet_size, 1);
    RawSts raw;
    raw.name = name;
    for (std::size_t i = 0; i < n; ++i) raw.states.push_back("d" + std::to_string(i));
    raw.initial = "d0";

    std::map<std::size_t, std::vector<Label>> used;
    auto add = [&](std::size_t src, std::size_t dst) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            Label l = random_observable(rng, k);
            auto& u = used[src];
            if (std::find(u.begin(), u.end(), l) != u.end()) continue;
            u.push_back(l);
            raw.transitions.push_back({raw.states[src], l, raw.states[dst]});
            return true;
        }
        return false;
    };
    for (std::size_t i = 1; i < n; ++i) {
        // Retry with other parents until one still has an unused label.
        for (int attempt = 0; attempt < 16; ++attempt)
            if (add(pick(rng, 0, i - 1), i)) break;
    }
    const std::size_t extra = pick(rng, 0, cfg.max_transitions > n ? cfg.max_transitions - n : 0);
    for (std::size_t e = 0; e < extra; ++e) {
        const std::size_t src = pick(rng, 0, n - 1);
        if (used[src].empty()) continue; // keep leaves as the final states
        add(src, pick(rng, 0, n - 1));
    }
    for (std::size_t i = 0; i < n; ++i)
        if (used[i].empty()) raw.finals.push_back(raw.states[i]);
    if (raw.finals.empty()) {
        // Every state has a move: add a terminal state.
        raw.states.push_back("d" + std::to_string(n));
        add(n - 1, n);
        raw.finals.push_back(raw.states.back());
    }
    return validate(raw);
}

bool has_tau_cycle(const Sts& sts)
{
    auto c = tau_cycle_states(sts);
    return std::find(c.begin(), c.end(), true) != c.end();
}

Sts insert_sequential_tau(const Sts& sts, std::mt19937_64& rng)
{
    RawSts raw = sts.to_raw();
    if (raw.transitions.empty()) return sts;
    const std::size_t e = pick(rng, 0, raw.transitions.size() - 1);
    const auto mid = fresh(raw, "m");
    raw.states.push_back(mid);
    const auto target = raw.transitions[e].target;
    raw.transitions[e].target = mid;
    raw.transitions.push_back({mid, Label::tau(), target});
    return validate(raw);
}

Sts duplicate_state(const Sts& sts, std::mt19937_64& rng)
{
    RawSts raw = sts.to_raw();
    const std::size_t s = pick(rng, 0, sts.size() - 1);
    const auto original = sts.state(s);
    const auto copy = fresh(raw, "c");
    raw.states.push_back(copy);
    if (sts.is_final(s)) raw.finals.push_back(copy);
    for (auto idx : sts.outgoing(s)) {
        const auto& edge = sts.edges()[idx];
        // A self-loop on the original becomes a loop on the copy.
        raw.transitions.push_back({copy, edge.label, edge.target == s ? copy : sts.state(edge.target)});
    }
    for (auto& t : raw.transitions)
        if (t.target == original && t.source != copy && chance(rng, 0.5)) t.target = copy;
    if (raw.initial == original && chance(rng, 0.5)) raw.initial = copy;
    return validate(raw);
}

Sts rename_states(const Sts& sts, std::mt19937_64& rng)
{
    std::vector<std::size_t> perm(sts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::map<StateId, StateId> to;
    for (std::size_t i = 0; i < perm.size(); ++i) to[sts.state(i)] = "r" + std::to_string(perm[i]);
    RawSts raw = sts.to_raw();
    for (auto& s : raw.states) s = to[s];
    raw.initial = to[raw.initial];
    for (auto& f : raw.finals) f = to[f];
    for (auto& t : raw.transitions) {
        t.source = to[t.source];
        t.target = to[t.target];
    }
    return validate(raw);
}

Sts equivalence_preserving_mutation(const Sts& sts, std::mt19937_64& rng, int steps)
{
    Sts cur = sts;
    for (int i = 0; i < steps; ++i) {
        switch (pick(rng, 0, 2)) {
        case 0: cur = insert_sequential_tau(cur, rng); break;
        case 1: cur = duplicate_state(cur, rng); break;
        default: cur = rename_states(cur, rng); break;
        }
    }
    return cur;
}

Sts subtype_mutation(const Sts& sts, const std::set<std::string>& partner_emits, std::mt19937_64& rng)
{
    RawSts raw = sts.to_raw();

    std::vector<std::size_t> deletable;
    for (std::size_t s = 0; s < sts.size(); ++s) {
        std::size_t emissions = 0;
        for (auto e : sts.outgoing(s)) emissions += sts.edges()[e].label.is_emission();
        if (emissions >= 2)
            for (auto e : sts.outgoing(s))
                if (sts.edges()[e].label.is_emission()) deletable.push_back(e);
    }
    std::optional<std::size_t> removed;
    if (!deletable.empty() && chance(rng, 0.7)) removed = deletable[pick(rng, 0, deletable.size() - 1)];

    std::vector<std::size_t> nonfinal;
    for (std::size_t s = 0; s < sts.size(); ++s)
        if (!sts.is_final(s)) nonfinal.push_back(s);
    std::vector<Transition> added;
    if (!nonfinal.empty()) {
        std::string msg;
        for (std::size_t k = 0;; ++k) {
            msg = "x" + std::to_string(k);
            if (!partner_emits.count(msg)) break;
        }
        const auto src = nonfinal[pick(rng, 0, nonfinal.size() - 1)];
        added.push_back({sts.state(src), Label::reception(msg), sts.state(pick(rng, 0, sts.size() - 1))});
    }

    if (removed) raw.transitions.erase(raw.transitions.begin() + static_cast<std::ptrdiff_t>(*removed));
    raw.transitions.insert(raw.transitions.end(), added.begin(), added.end());
    return validate(raw);
}

} // namespace protochk::testkit
