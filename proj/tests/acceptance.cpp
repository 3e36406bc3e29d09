// Acceptance suite: one PASS/FAIL line per criterion.

#include "support.hpp"

#include "protochk/cli.hpp"
#include "protochk/subst.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace protochk;
using namespace protochk::testkit;

#ifndef PROTOCHK_BINARY
#define PROTOCHK_BINARY "protochk"
#endif

namespace {

constexpr auto DF = CompatNotion::DeadlockFree;
constexpr auto UR = CompatNotion::UnspecifiedReceptions;
constexpr auto UC = CompatNotion::UnidirectionalComplementarity;

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int number, const std::string& title, const std::function<Outcome()>& body)
{
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.1fs", secs);
    std::cout << "criterion " << number << " " << (o.pass ? "PASS" : "FAIL") << "  " << title << ": " << o.detail
              << " [" << timing << "]" << std::endl;
}

Sts random_sts(std::uint64_t seed, const std::string& name, std::size_t states, bool tau_acyclic = false,
               std::size_t alphabet = 3)
{
    GenConfig cfg;
    cfg.seed = seed;
    cfg.max_states = states;
    cfg.max_transitions = states + 4;
    cfg.alphabet_size = alphabet;
    cfg.tau_probability = 0.3;
    cfg.tau_acyclic = tau_acyclic;
    return generate_sts(cfg, name);
}

Sts deterministic(std::uint64_t seed, const std::string& name, std::size_t states)
{
    GenConfig cfg;
    cfg.seed = seed;
    cfg.max_states = states;
    cfg.alphabet_size = 3;
    return generate_deterministic_sts(cfg, name);
}

std::string fixture_path(const Fixture& f) { return support::source_path("fixtures/" + f.file); }

struct Cli {
    int code;
    std::string out;
};

Cli cli_run(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str()};
}

std::vector<std::string> cli_args(const Fixture& f, const Expectation& e)
{
    const auto path = fixture_path(f);
    std::vector<std::string> args{"check"};
    if (e.check == Expectation::Check::Compat)
        args.insert(args.end(), {"compat", "--notion", std::string(to_string(e.notion))});
    else
        args.insert(args.end(), {"equiv", "--relation", std::string(to_string(e.relation))});
    args.insert(args.end(), {"--json", path + "::" + e.lhs, path + "::" + e.rhs});
    return args;
}

// ---------------------------------------------------------------------------
// Local conditions, evaluated directly on the two systems so the check does
// not lean on the product module.

bool has_tau(const Sts& s, std::size_t q)
{
    for (auto e : s.outgoing(q))
        if (s.edges()[e].label.is_tau()) return true;
    return false;
}

bool offers(const Sts& s, std::size_t q, const Label& l)
{
    for (auto e : s.outgoing(q)) {
        const auto& m = s.edges()[e].label;
        if (m.is_observable() && m.message() == l.message() && m.direction() != l.direction() && m.sorts() == l.sorts())
            return true;
    }
    return false;
}

bool never_stable(const Sts& s, std::size_t q)
{
    std::vector<bool> seen(s.size(), false);
    std::vector<std::size_t> stack{q};
    seen[q] = true;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        if (!has_tau(s, v)) return false;
        for (auto e : s.outgoing(v)) {
            const auto& edge = s.edges()[e];
            if (edge.label.is_tau() && !seen[edge.target]) {
                seen[edge.target] = true;
                stack.push_back(edge.target);
            }
        }
    }
    return true;
}

bool stuck(const Sts& a, std::size_t p, const Sts& b, std::size_t q)
{
    if (a.is_final(p) && b.is_final(q)) return false;
    if (has_tau(a, p) || has_tau(b, q)) return false;
    for (auto e : a.outgoing(p))
        if (offers(b, q, a.edges()[e].label)) return false;
    return true;
}

/// Some action of `x` selected by `need` cannot be answered by `y`.
bool unanswered(const Sts& x, std::size_t p, const Sts& y, std::size_t q, bool emissions_only)
{
    for (auto e : x.outgoing(p)) {
        const auto& l = x.edges()[e].label;
        if (l.is_tau() || (emissions_only && !l.is_emission())) continue;
        if (has_tau(y, q) ? never_stable(y, q) : !offers(y, q, l)) return true;
    }
    return false;
}

bool violates(CompatNotion n, const Sts& a, std::size_t p, const Sts& b, std::size_t q)
{
    if (stuck(a, p, b, q)) return true;
    switch (n) {
    case CompatNotion::DeadlockFree: return false;
    case CompatNotion::UnspecifiedReceptions: return unanswered(a, p, b, q, true) || unanswered(b, q, a, p, true);
    case CompatNotion::UnidirectionalComplementarity:
        return unanswered(a, p, b, q, false) || unanswered(b, q, a, p, false);
    }
    return false;
}

WitnessTrace witness_from_json(const nlohmann::json& j)
{
    WitnessTrace w;
    for (const auto& s : j) {
        WitnessStep step;
        const auto kind = s.at("kind").get<std::string>();
        step.kind = kind == "sync" ? StepKind::Sync : kind == "tau-left" ? StepKind::TauLeft : StepKind::TauRight;
        if (step.kind == StepKind::Sync) {
            step.message = s.at("message").get<std::string>();
            if (s.contains("sorts")) step.sorts = s.at("sorts").get<std::vector<std::string>>();
            step.emitter = s.at("emitter") == "left" ? Side::Left : Side::Right;
        }
        step.from = {s.at("from")[0].get<std::string>(), s.at("from")[1].get<std::string>()};
        step.to = {s.at("to")[0].get<std::string>(), s.at("to")[1].get<std::string>()};
        w.push_back(std::move(step));
    }
    return w;
}

/// Whether `word` is an observable trace of `s` (tau erased).
bool accepts(const Sts& s, const std::vector<std::string>& word)
{
    auto closure = [&](std::set<std::size_t> set) {
        std::vector<std::size_t> stack(set.begin(), set.end());
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (auto e : s.outgoing(v))
                if (s.edges()[e].label.is_tau() && set.insert(s.edges()[e].target).second)
                    stack.push_back(s.edges()[e].target);
        }
        return set;
    };
    auto cur = closure({s.initial()});
    for (const auto& letter : word) {
        std::set<std::size_t> next;
        for (auto q : cur)
            for (auto e : s.outgoing(q))
                if (s.edges()[e].label.to_string() == letter) next.insert(s.edges()[e].target);
        if (next.empty()) return false;
        cur = closure(next);
    }
    return true;
}

std::size_t tau_count(const Sts& s)
{
    std::size_t n = 0;
    for (const auto& e : s.edges()) n += e.label.is_tau();
    return n;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string shell_capture(const std::string& cmd)
{
    std::string out;
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) return out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    ::pclose(p);
    return out;
}

} // namespace

int main()
{
    report(1, "fixture table", [] {
        const auto results = verify_fixtures();
        std::size_t ok = 0;
        std::set<std::string> fixtures_ok, fixtures_all;
        std::string bad;
        for (const auto& r : results) {
            fixtures_all.insert(r.fixture);
            ok += r.passed;
            if (!r.passed) bad += " " + r.fixture + ":" + r.expectation.describe();
        }
        for (const auto& id : fixtures_all) {
            bool all = true;
            for (const auto& r : results)
                if (r.fixture == id) all = all && r.passed;
            if (all) fixtures_ok.insert(id);
        }
        const auto cli = cli_run({"fixtures", "verify"});
        Outcome o;
        o.pass = ok == results.size() && fixtures_ok.size() == 11 && cli.code == 0;
        o.detail = std::to_string(fixtures_ok.size()) + "/11 fixtures, " + std::to_string(ok) + "/" +
                   std::to_string(results.size()) + " verdicts, `fixtures verify` exit " + std::to_string(cli.code) + bad;
        return o;
    });

    report(2, "relation lattice", [] {
        std::size_t violations = 0, strong = 0, branching = 0, weak = 0, trace = 0;
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            // Related pairs (by mutation), independent ones, and independent
            // ones over a single message, which often share traces only.
            const std::size_t alphabet = seed % 4 == 2 ? 1 : 3;
            const Sts a = random_sts(seed * 2 + 1, "A", 8, false, alphabet);
            std::mt19937_64 rng(seed);
            const Sts b = seed % 2 ? equivalence_preserving_mutation(a, rng).renamed("B")
                                   : random_sts(seed * 2 + 2, "B", 8, false, alphabet);
            const bool s = strong_bisim(a, b).holds;
            const bool br = branching_bisim(a, b).holds;
            const bool w = weak_bisim(a, b).holds;
            const bool t = trace_equiv(a, b).holds;
            strong += s;
            branching += br;
            weak += w;
            trace += t;
            if ((s && !br) || (br && !w) || (w && !t)) ++violations;
            if (w && !(simulation_preorder(a, b).holds && simulation_preorder(b, a).holds)) ++violations;
        }
        return Outcome{violations == 0, std::to_string(violations) + " violations over 1000 pairs (holding: strong " +
                                            std::to_string(strong) + ", branching " + std::to_string(branching) +
                                            ", weak " + std::to_string(weak) + ", trace " + std::to_string(trace) + ")"};
    });

    report(3, "oracle agreement", [] {
        const RelationKind kinds[] = {RelationKind::Strong, RelationKind::Branching,  RelationKind::Weak,
                                      RelationKind::Trace,  RelationKind::Simulation, RelationKind::Subtype};
        std::size_t disagreements = 0, positives = 0;
        std::string first;
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            const Sts a = random_sts(seed * 3 + 100'000, "A", 6);
            std::mt19937_64 rng(seed);
            Sts b = a;
            switch (seed % 4) {
            case 0: b = equivalence_preserving_mutation(a, rng, 2).renamed("B"); break;
            case 1: b = subtype_mutation(a, {"a", "b", "c"}, rng).renamed("B"); break;
            default: b = random_sts(seed * 3 + 100'001, "B", 6); break;
            }
            if (b.size() > 6) b = random_sts(seed * 3 + 100'002, "B", 6);
            for (auto k : kinds) {
                const bool prod = check_relation(b, a, k).holds;
                const bool naive = oracle_relation(b, a, k);
                positives += prod;
                if (prod != naive) {
                    ++disagreements;
                    if (first.empty()) first = " first: seed " + std::to_string(seed) + " " + std::string(to_string(k));
                }
            }
        }
        return Outcome{disagreements == 0, std::to_string(disagreements) + " disagreements over 500 pairs x 6 relations (" +
                                               std::to_string(positives) + " related)" + first};
    });

    report(4, "weak/branching preservation", [] {
        std::size_t counterexamples = 0, exercised = 0, unrelated = 0;
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            std::mt19937_64 rng(seed);
            Sts old_ = random_sts(seed + 200'000, "Old", 6, true);
            Sts partner = random_sts(seed + 300'000, "P", 6, true);
            if (seed % 2 == 0) {
                // A partner that old is compatible with by construction.
                const Sts base = deterministic(seed + 400'000, "D", 6);
                partner = reverse_directions(base).renamed("P");
                old_ = insert_sequential_tau(base, rng).renamed("Old");
            }
            const Sts new_ = equivalence_preserving_mutation(old_, rng).renamed("New");
            const bool weak = weak_bisim(old_, new_).holds;
            const bool branching = branching_bisim(old_, new_).holds;
            if (!weak || !branching) ++unrelated;
            for (auto n : {DF, UR, UC}) {
                if (!check_compat(old_, partner, n).holds) continue;
                const bool after = check_compat(new_, partner, n).holds;
                if (weak) {
                    ++exercised;
                    counterexamples += !after;
                }
                if (branching) {
                    ++exercised;
                    counterexamples += !after;
                }
            }
        }
        return Outcome{counterexamples == 0 && unrelated == 0,
                       std::to_string(counterexamples) + " counterexamples over 500 triples (" +
                           std::to_string(exercised) + " implications with a true premise, " +
                           std::to_string(unrelated) + " mutations not equivalent)"};
    });

    report(5, "subtype preserves unspecified receptions", [] {
        std::size_t counterexamples = 0, exercised = 0, unrestricted = 0;
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            std::mt19937_64 rng(seed);
            Sts old_ = random_sts(seed + 500'000, "Old", 6);
            Sts partner = random_sts(seed + 600'000, "P", 6);
            if (seed % 2 == 0) {
                old_ = deterministic(seed + 700'000, "Old", 6);
                partner = reverse_directions(old_).renamed("P");
            }
            std::set<std::string> partner_emits;
            for (const auto& l : partner.alphabet())
                if (l.is_emission()) partner_emits.insert(l.message());
            const Sts new_ = subtype_mutation(old_, partner_emits, rng).renamed("New");
            if (!behavioural_subtype(new_, old_).holds || !check_compat(old_, partner, UR).holds) continue;
            ++exercised;
            counterexamples += !check_compat(new_, partner, UR).holds;
        }
        // Unrestricted deletion reproduces F9: the only emission goes away.
        const auto& f9 = fixture("F9");
        if (behavioural_subtype(f9.get("S1p"), f9.get("S1")).holds && check_compat(f9.get("S1"), f9.get("S2"), UR).holds &&
            !check_compat(f9.get("S1p"), f9.get("S2"), UR).holds)
            ++unrestricted;
        return Outcome{counterexamples == 0 && exercised > 0,
                       std::to_string(counterexamples) + " counterexamples over 500 pairs (" + std::to_string(exercised) +
                           " with a true premise); deleting a state's last emission is excluded, F9 shows why (" +
                           std::to_string(unrestricted) + " counterexample)"};
    });

    report(6, "negative results come with replayable witnesses", [] {
        std::size_t replayed = 0, total = 0;
        std::string bad;
        for (const auto& f : fixtures()) {
            for (const auto& e : f.expectations) {
                if (e.expected || e.rhs_transform != Expectation::Transform::None) continue;
                ++total;
                const auto out = cli_run(cli_args(f, e));
                const auto j = nlohmann::json::parse(out.out);
                bool ok = out.code == 1 && !j.at("holds").get<bool>();
                const Sts& a = f.get(e.lhs);
                const Sts& b = f.get(e.rhs);
                if (ok && e.check == Expectation::Check::Compat) {
                    const auto end = replay(a, b, witness_from_json(j.at("witness")));
                    ok = end && violates(e.notion, a, end->first, b, end->second);
                } else if (ok) {
                    const auto word = j.at("counterexample").at("trace").get<std::vector<std::string>>();
                    const Sts aa = annotate_finals(a), bb = annotate_finals(b);
                    ok = !word.empty() && accepts(aa, word) != accepts(bb, word);
                }
                replayed += ok;
                if (!ok) bad += " " + f.id + ":" + e.describe();
            }
        }
        return Outcome{replayed == total && total > 0, std::to_string(replayed) + "/" + std::to_string(total) +
                                                           " failing verdicts replayed to a violation (F8, F9 and "
                                                           "F11 included)" + bad};
    });

    report(7, "tau-confluence reduction", [] {
        std::size_t bad = 0;
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            const Sts s = random_sts(seed + 800'000, "X", 8);
            const Sts r = tau_confluence_reduce(s);
            if (!branching_bisim(s, r).holds) ++bad;
            for (std::size_t q = 0; q < r.size(); ++q) {
                const auto& out = r.outgoing(q);
                if (out.size() == 1 && r.edges()[out[0]].label.is_tau() && r.edges()[out[0]].target != q) ++bad;
            }
        }
        std::size_t chains = 0;
        for (int k = 1; k <= 12; ++k) {
            RawSts raw;
            raw.name = "Chain";
            raw.initial = "c0";
            raw.finals = {"c" + std::to_string(k)};
            for (int i = 0; i < k; ++i)
                raw.transitions.push_back({"c" + std::to_string(i), Label::tau(), "c" + std::to_string(i + 1)});
            chains += tau_count(tau_confluence_reduce(validate(raw))) == 0;
        }
        return Outcome{bad == 0 && chains == 12, std::to_string(bad) + " failures over 500 systems; " +
                                                     std::to_string(chains) + "/12 tau chains collapsed to 0 tau"};
    });

    report(8, "workflow translation", [] {
        struct Case {
            const char* file;
            const char* expected;
            std::size_t taus;
        };
        const Case cases[] = {
            {"samples/ifelse.flow", "sts E { init e; final x; e -> l : tau; e -> r : tau; l -> x : a!; r -> x : b!; }", 2},
            {"samples/listen.flow",
             "sts E { init e; final x; e -> x : a?; e -> x : b?; e -> d : tau; d -> x : timeout!; }", 1},
            {"samples/while.flow", "sts E { init e; final x; e -> b : tau; b -> e : a!; e -> x : tau; }", 2},
        };
        std::size_t ok = 0;
        std::string counts;
        for (const auto& c : cases) {
            const Sts got = translate(parse_workflow(slurp(support::source_path(c.file))));
            const bool iso = isomorphic(got, support::sts(c.expected));
            counts += (counts.empty() ? "" : ",") + std::to_string(tau_count(got));
            ok += iso && tau_count(got) == c.taus;
        }
        return Outcome{ok == 3, std::to_string(ok) + "/3 isomorphic to the expected systems, tau counts " + counts +
                                    " (expected 2,1,2)"};
    });

    report(9, "determinism and golden files", [] {
        std::size_t checks = 0, identical = 0, golden = 0;
        for (const auto& f : fixtures()) {
            for (const auto& e : f.expectations) {
                ++checks;
                std::string first;
                if (e.rhs_transform == Expectation::Transform::None) {
                    first = cli_run(cli_args(f, e)).out;
                    identical += first == cli_run(cli_args(f, e)).out;
                } else {
                    first = cli::relation_json({e.lhs, e.rhs}, e.relation, evaluate(f, e));
                    identical += first == cli::relation_json({e.lhs, e.rhs}, e.relation, evaluate(f, e));
                }
                std::string name = f.id + "_";
                bool sep = false;
                for (char c : e.describe()) {
                    if (std::isalnum(static_cast<unsigned char>(c))) {
                        if (sep && name.back() != '_') name += '_';
                        name += c;
                        sep = false;
                    } else {
                        sep = true;
                    }
                }
                golden += slurp(support::source_path("tests/golden/" + name + ".json")) == first;
            }
        }
        // Separate processes must agree byte for byte too.
        const auto& f3 = fixture("F3");
        const std::string cmd = std::string(PROTOCHK_BINARY) + " check compat --notion uc --json " + fixture_path(f3) +
                                "::S1p " + fixture_path(f3) + "::S2";
        const auto p1 = shell_capture(cmd);
        const auto p2 = shell_capture(cmd);
        const bool processes = !p1.empty() && p1 == p2 &&
                               p1 == cli_run({"check", "compat", "--notion", "uc", "--json", fixture_path(f3) + "::S1p",
                                              fixture_path(f3) + "::S2"})
                                         .out;
        return Outcome{identical == checks && golden == checks && processes,
                       std::to_string(identical) + "/" + std::to_string(checks) + " repeat runs identical, " +
                           std::to_string(golden) + "/" + std::to_string(checks) + " match golden files, " +
                           (processes ? "separate processes identical" : "separate processes differ")};
    });

    std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed") << std::endl;
    return failures ? 1 : 0;
}
