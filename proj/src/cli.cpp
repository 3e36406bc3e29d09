#include "protochk/cli.hpp"

#include "protochk/format.hpp"
#include "protochk/testkit.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace protochk::cli {

using Json = nlohmann::ordered_json;

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
}

StsDocument load_document(const std::string& path)
{
    const auto text = read_file(path);
    try {
        return parse_sts(text);
    } catch (const ParseError& e) {
        throw ParseError(e.kind(), e.line(), e.column(), path + ":" + e.what(), e.violations());
    }
}

Sts load_sts(const std::string& spec)
{
    auto [path, name] = split_input(spec);
    const auto doc = load_document(path);
    if (doc.systems.empty()) throw UsageError("'" + path + "' defines no transition system");
    if (name.empty()) return doc.systems.front();
    if (const Sts* s = doc.find(name)) return *s;
    throw UsageError("'" + path + "' has no transition system named '" + name + "'");
}

std::size_t exploration_cap(std::optional<std::size_t> flag, std::size_t fallback)
{
    if (flag) return *flag;
    if (const char* env = std::getenv("PROTOCHK_MAX_STATES")) {
        char* end = nullptr;
        const auto v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || v == 0)
            throw UsageError(std::string("PROTOCHK_MAX_STATES must be a positive integer, got '") + env + "'");
        return static_cast<std::size_t>(v);
    }
    return fallback;
}

// ---------------------------------------------------------------------------
// JSON

Json pair_json(const std::pair<std::string, std::string>& p) { return Json::array({p.first, p.second}); }

Json step_json(const WitnessStep& s)
{
    Json j;
    j["kind"] = std::string(to_string(s.kind));
    if (s.kind == StepKind::Sync) {
        j["message"] = s.message;
        if (!s.sorts.empty()) j["sorts"] = s.sorts;
        j["emitter"] = s.emitter == Side::Left ? "left" : "right";
    }
    j["from"] = pair_json(s.from);
    j["to"] = pair_json(s.to);
    return j;
}

Json counterexample_json(const RelationWitness& w)
{
    Json j;
    j["trace"] = w.trace;
    if (w.position) j["position"] = pair_json(*w.position);
    if (w.mover) j["mover"] = *w.mover == Side::Left ? "left" : "right";
    if (!w.move.empty()) j["move"] = w.move;
    j["explanation"] = w.explanation;
    return j;
}

/// Body of a verdict after the header keys: holds, direction, witness,
/// violation, counterexample, warnings.
void verdict_body(Json& j, const Verdict& v, bool keep_recompose_warning = true)
{
    j["holds"] = v.holds;
    if (v.direction) j["direction"] = std::string(to_string(*v.direction));
    if (v.witness) {
        Json steps = Json::array();
        for (const auto& s : *v.witness) steps.push_back(step_json(s));
        j["witness"] = std::move(steps);
    }
    if (!v.violation.empty()) j["violation"] = v.violation;
    if (v.relation_witness) j["counterexample"] = counterexample_json(*v.relation_witness);
    Json warnings = Json::array();
    for (const auto& w : v.warnings)
        if (keep_recompose_warning || w != kRecomposeWarning) warnings.push_back(w);
    j["warnings"] = std::move(warnings);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Human-readable output

std::string_view notion_title(CompatNotion n)
{
    switch (n) {
    case CompatNotion::DeadlockFree: return "deadlock-freeness";
    case CompatNotion::UnidirectionalComplementarity: return "unidirectional complementarity";
    case CompatNotion::UnspecifiedReceptions: return "unspecified receptions";
    }
    return "?";
}

void print_witness(std::ostream& out, const WitnessTrace& trace, const std::string& left, const std::string& right,
                   bool states)
{
    if (trace.empty()) {
        out << "  (the initial state)\n";
        return;
    }
    auto suffix = [&](const WitnessStep& s) {
        if (!states) return std::string{};
        return "    (" + s.from.first + ", " + s.from.second + ") -> (" + s.to.first + ", " + s.to.second + ")";
    };
    for (const auto& s : trace) {
        switch (s.kind) {
        case StepKind::TauLeft: out << "  " << left << " moves internally" << suffix(s) << "\n"; break;
        case StepKind::TauRight: out << "  " << right << " moves internally" << suffix(s) << "\n"; break;
        case StepKind::Sync: {
            const bool l = s.emitter == Side::Left;
            std::string msg = s.message;
            if (!s.sorts.empty()) {
                msg += "(";
                for (std::size_t i = 0; i < s.sorts.size(); ++i) msg += (i ? "," : "") + s.sorts[i];
                msg += ")";
            }
            out << "  " << (l ? left : right) << " emits " << msg << "\n";
            out << "  " << (l ? right : left) << " receives " << msg << suffix(s) << "\n";
            break;
        }
        }
    }
}

void print_warnings(std::ostream& out, const std::vector<std::string>& warnings)
{
    for (const auto& w : warnings) out << "warning: " << w << "\n";
}

void print_counterexample(std::ostream& out, const RelationWitness& w)
{
    if (!w.trace.empty()) {
        out << "  trace:";
        for (const auto& t : w.trace) out << " " << t;
        out << "\n";
    }
    if (w.position) out << "  position: (" << w.position->first << ", " << w.position->second << ")\n";
    if (!w.explanation.empty()) out << "  " << w.explanation << "\n";
}

void print_compat(std::ostream& out, const Sts& a, const Sts& b, CompatNotion n, const Verdict& v, bool states)
{
    out << notion_title(n) << " (" << a.name() << ", " << b.name() << "): " << (v.holds ? "holds" : "fails") << "\n";
    if (v.direction) {
        const auto& [big, small] = *v.direction == ComplementDirection::LeftComplementedByRight
                                       ? std::pair{b.name(), a.name()}
                                       : std::pair{a.name(), b.name()};
        if (*v.direction == ComplementDirection::Both)
            out << "  each side complements the other\n";
        else
            out << "  " << big << " complements every observable action of " << small << "\n";
    }
    if (v.witness) {
        out << "witness:\n";
        print_witness(out, *v.witness, a.name(), b.name(), states);
    }
    if (!v.violation.empty()) out << v.violation << "\n";
    print_warnings(out, v.warnings);
}

void print_relation(std::ostream& out, const Sts& a, const Sts& b, RelationKind k, const Verdict& v)
{
    out << to_string(k) << " (" << a.name() << ", " << b.name() << "): " << (v.holds ? "holds" : "fails") << "\n";
    if (v.relation_witness) {
        out << "counterexample:\n";
        print_counterexample(out, *v.relation_witness);
    }
    print_warnings(out, v.warnings);
}

// ---------------------------------------------------------------------------
// Subcommands

struct CommonFlags {
    bool json = false;
    std::optional<std::size_t> max_states;
};

void add_common(CLI::App* cmd, CommonFlags& f)
{
    cmd->add_flag("--json", f.json, "Write the report as JSON");
    cmd->add_option("--max-states", f.max_states, "Exploration cap (overrides PROTOCHK_MAX_STATES)")
        ->check(CLI::PositiveNumber);
}

CompatNotion notion_arg(const std::string& s)
{
    if (auto n = parse_notion(s)) return *n;
    throw UsageError("unknown notion '" + s + "' (expected df, uc or ur)");
}

RelationKind relation_arg(const std::string& s)
{
    if (auto k = parse_relation(s)) return *k;
    throw UsageError("unknown relation '" + s + "'");
}

std::string output_format(const std::string& path, const std::string& explicit_format)
{
    if (!explicit_format.empty()) return explicit_format;
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".aut") == 0) return "aut";
    return "sts";
}

int fixtures_verify(std::ostream& out, bool json)
{
    const auto results = testkit::verify_fixtures();
    const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; });
    if (json) {
        Json j;
        j["check"] = "fixtures";
        Json rows = Json::array();
        for (const auto& r : results) {
            Json row;
            row["fixture"] = r.fixture;
            row["expectation"] = r.expectation.describe();
            row["expected"] = r.expectation.expected;
            row["holds"] = r.verdict.holds;
            if (r.verdict.direction) row["direction"] = std::string(to_string(*r.verdict.direction));
            row["passed"] = r.passed;
            rows.push_back(std::move(row));
        }
        j["results"] = std::move(rows);
        j["holds"] = failed == 0;
        out << dump(j);
    } else {
        for (const auto& r : results) {
            out << std::left << std::setw(4) << r.fixture << std::setw(28) << r.expectation.describe()
                << (r.verdict.holds ? "holds" : "fails") << "  " << (r.passed ? "ok" : "MISMATCH") << "\n";
        }
        out << (results.size() - static_cast<std::size_t>(failed)) << "/" << results.size()
            << " expectations reproduced\n";
    }
    return failed ? kFails : kHolds;
}

} // namespace

std::pair<std::string, std::string> split_input(const std::string& spec)
{
    const auto pos = spec.rfind("::");
    if (pos == std::string::npos) return {spec, ""};
    return {spec.substr(0, pos), spec.substr(pos + 2)};
}

std::string compat_json(const std::vector<std::string>& inputs, CompatNotion notion, const Verdict& v)
{
    Json j;
    j["check"] = "compat";
    j["inputs"] = inputs;
    j["notion"] = std::string(to_string(notion));
    verdict_body(j, v);
    return dump(j);
}

std::string relation_json(const std::vector<std::string>& inputs, RelationKind kind, const Verdict& v)
{
    Json j;
    j["check"] = "equiv";
    j["inputs"] = inputs;
    j["relation"] = std::string(to_string(kind));
    verdict_body(j, v);
    return dump(j);
}

std::string subst_json(const std::vector<std::string>& inputs, const SubstitutionReport& r, bool recompose_warning)
{
    auto part = [&](const Verdict& v) {
        Json p;
        verdict_body(p, v, recompose_warning);
        return p;
    };
    Json j;
    j["check"] = "subst";
    j["inputs"] = inputs;
    j["notion"] = std::string(to_string(r.notion));
    j["relation"] = std::string(to_string(r.kind));
    j["holds"] = r.accept;
    j["recommendation"] = std::string(r.recommendation());
    j["related"] = part(r.relation);
    j["before"] = part(r.before);
    j["after"] = part(r.after);
    j["recomposition"] = part(r.recomposition);
    j["reasons"] = r.reasons;
    j["warnings"] = r.relation.warnings;
    return dump(j);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Behavioural compatibility and substitutability checks for service protocols", "protochk"};
    app.require_subcommand(1);

    auto* check = app.add_subcommand("check", "Check a property of two or three protocols");
    check->require_subcommand(1);

    // check compat
    CommonFlags compat_flags;
    std::string notion = "df";
    std::vector<std::string> compat_inputs;
    bool show_states = false;
    auto* compat = check->add_subcommand("compat", "Compatibility of two protocols");
    compat->add_option("--notion", notion, "df, uc or ur")->capture_default_str();
    compat->add_flag("--witness", show_states, "Show the product state after every witness step");
    compat->add_option("inputs", compat_inputs, "A.sts[::Name] B.sts[::Name]")->required()->expected(2);
    add_common(compat, compat_flags);

    // check equiv
    CommonFlags equiv_flags;
    std::string relation = "branching";
    std::vector<std::string> equiv_inputs;
    bool no_annotation = false, completed = false;
    auto* equiv = check->add_subcommand("equiv", "Relate two protocols");
    equiv->add_option("--relation", relation, "strong, branching, weak, trace, simulation or subtype")
        ->capture_default_str();
    equiv->add_flag("--no-final-annotation", no_annotation, "Do not mark final states with a termination action");
    equiv->add_flag("--final-annotation", "Mark final states even for simulation and subtype");
    equiv->add_flag("--completed", completed, "Trace equivalence also compares completed traces");
    equiv->add_option("inputs", equiv_inputs, "A.sts[::Name] B.sts[::Name]")->required()->expected(2);
    add_common(equiv, equiv_flags);

    // check subst
    CommonFlags subst_flags;
    std::string old_spec, new_spec, partner_spec, subst_notion = "ur", subst_relation = "branching";
    bool via_compat = false, hide_recompose = false;
    auto* subst = check->add_subcommand("subst", "Can a new protocol replace an old one against a partner?");
    subst->add_option("--old", old_spec, "Protocol being replaced")->required();
    subst->add_option("--new", new_spec, "Replacement")->required();
    subst->add_option("--partner", partner_spec, "Partner protocol")->required();
    subst->add_option("--notion", subst_notion, "df, uc or ur")->capture_default_str();
    subst->add_option("--relation", subst_relation, "Relation between old and new")->capture_default_str();
    subst->add_flag("--via-compat", via_compat, "Only recompose the new protocol with the partner");
    subst->add_flag("--no-recompose-warning", hide_recompose, "Omit the recomposition warning from JSON output");
    add_common(subst, subst_flags);

    // product
    std::vector<std::string> product_inputs;
    std::string product_out, product_format;
    std::optional<std::size_t> product_cap;
    auto* product = app.add_subcommand("product", "Write the synchronous product of two protocols");
    product->add_option("inputs", product_inputs, "A.sts[::Name] B.sts[::Name]")->required()->expected(2);
    product->add_option("-o,--output", product_out, "out.sts or out.aut (default: stdout)");
    product->add_option("--format", product_format, "sts or aut (default: from the output extension)")
        ->check(CLI::IsMember({"sts", "aut"}));
    product->add_option("--max-states", product_cap, "Exploration cap")->check(CLI::PositiveNumber);

    // translate
    std::string flow_in, flow_out;
    auto* translate_cmd = app.add_subcommand("translate", "Translate a workflow description into a protocol");
    translate_cmd->add_option("input", flow_in, "in.flow")->required();
    translate_cmd->add_option("-o,--output", flow_out, "out.sts (default: stdout)");

    // reduce
    std::string reduce_in, reduce_out;
    bool tau_confluence = false;
    auto* reduce = app.add_subcommand("reduce", "Simplify a protocol");
    reduce->add_flag("--tau-confluence", tau_confluence, "Collapse sequential tau transitions")->required();
    reduce->add_option("input", reduce_in, "in.sts[::Name]")->required();
    reduce->add_option("-o,--output", reduce_out, "out.sts (default: stdout)");

    // fixtures
    bool fixtures_json = false;
    auto* fixtures = app.add_subcommand("fixtures", "Built-in example fixtures");
    fixtures->require_subcommand(1);
    auto* verify = fixtures->add_subcommand("verify", "Reproduce every expected fixture verdict");
    verify->add_flag("--json", fixtures_json, "Write the report as JSON");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kHolds;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kHolds;
    } catch (const CLI::ParseError& e) {
        err << "protochk: " << e.what() << "\n";
        if (CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front())
            err << "run 'protochk " << (sub == &app ? "" : sub->get_name() + " ") << "--help' for usage\n";
        return kUsage;
    }

    try {
        if (compat->parsed()) {
            const auto n = notion_arg(notion);
            const Sts a = load_sts(compat_inputs[0]);
            const Sts b = load_sts(compat_inputs[1]);
            const Verdict v = check_compat(a, b, n, {exploration_cap(compat_flags.max_states, 1'000'000)});
            if (compat_flags.json)
                out << compat_json({a.name(), b.name()}, n, v);
            else
                print_compat(out, a, b, n, v, show_states);
            return v.holds ? kHolds : kFails;
        }
        if (equiv->parsed()) {
            const auto k = relation_arg(relation);
            const Sts a = load_sts(equiv_inputs[0]);
            const Sts b = load_sts(equiv_inputs[1]);
            RelationOptions opts;
            if (no_annotation) opts.annotate_finals = false;
            if (equiv->count("--final-annotation")) {
                if (no_annotation) throw UsageError("--final-annotation and --no-final-annotation are exclusive");
                opts.annotate_finals = true;
            }
            opts.completed_traces = completed;
            opts.max_subsets = exploration_cap(equiv_flags.max_states, opts.max_subsets);
            const Verdict v = check_relation(a, b, k, opts);
            if (equiv_flags.json)
                out << relation_json({a.name(), b.name()}, k, v);
            else
                print_relation(out, a, b, k, v);
            return v.holds ? kHolds : kFails;
        }
        if (subst->parsed()) {
            const auto n = notion_arg(subst_notion);
            const auto k = relation_arg(subst_relation);
            const Sts o = load_sts(old_spec);
            const Sts nw = load_sts(new_spec);
            const Sts p = load_sts(partner_spec);
            SubstOptions opts;
            opts.compat.max_states = exploration_cap(subst_flags.max_states, opts.compat.max_states);
            const std::vector<std::string> names{o.name(), nw.name(), p.name()};
            if (via_compat) {
                const Verdict v = check_subst_by_recompose(o, nw, p, n, opts);
                if (subst_flags.json) {
                    Json j;
                    j["check"] = "subst";
                    j["inputs"] = names;
                    j["notion"] = std::string(to_string(n));
                    j["via"] = "recomposition";
                    verdict_body(j, v, !hide_recompose);
                    out << dump(j);
                } else {
                    out << "substitution by recomposition: ";
                    print_compat(out, nw, p, n, v, false);
                }
                return v.holds ? kHolds : kFails;
            }
            const auto r = substitution_report(o, nw, p, n, k, opts);
            if (subst_flags.json) {
                out << subst_json(names, r, !hide_recompose);
            } else {
                out << "substitute " << nw.name() << " for " << o.name() << " against " << p.name() << ": "
                    << r.recommendation() << "\n";
                out << "  " << to_string(k) << " (" << nw.name() << ", " << o.name() << "): "
                    << (r.relation.holds ? "holds" : "fails") << "\n";
                if (r.relation.relation_witness) print_counterexample(out, *r.relation.relation_witness);
                out << "  " << notion_title(n) << " before (" << o.name() << ", " << p.name()
                    << "): " << (r.before.holds ? "holds" : "fails") << "\n";
                out << "  " << notion_title(n) << " after (" << nw.name() << ", " << p.name()
                    << "): " << (r.after.holds ? "holds" : "fails") << "\n";
                if (!r.after.holds && r.after.witness) {
                    out << "witness:\n";
                    print_witness(out, *r.after.witness, nw.name(), p.name(), false);
                    if (!r.after.violation.empty()) out << r.after.violation << "\n";
                }
                for (const auto& reason : r.reasons) out << "reason: " << reason << "\n";
                print_warnings(out, r.relation.warnings);
                print_warnings(out, r.recomposition.warnings);
            }
            return r.accept ? kHolds : kFails;
        }
        if (product->parsed()) {
            const Sts a = load_sts(product_inputs[0]);
            const Sts b = load_sts(product_inputs[1]);
            const auto p = synchronous_product(a, b, {exploration_cap(product_cap, 1'000'000)});
            const auto fmt = output_format(product_out, product_format);
            std::string text;
            if (fmt == "aut") {
                text = export_aut(p);
            } else {
                try {
                    text = print_sts(p.to_sts(a.name() + "_" + b.name()));
                } catch (const ValidationError& e) {
                    throw UsageError(std::string("the product cannot be written as .sts: ") + e.what() +
                                     " (use .aut instead)");
                }
            }
            write_output(product_out, text, out);
            for (const auto& w : p.divergence_warnings()) err << "warning: " << w << "\n";
            return kHolds;
        }
        if (translate_cmd->parsed()) {
            const auto wf = parse_workflow(read_file(flow_in));
            write_output(flow_out, print_sts(translate(wf)), out);
            return kHolds;
        }
        if (reduce->parsed()) {
            (void)tau_confluence;
            auto [path, name] = split_input(reduce_in);
            StsDocument doc = load_document(path);
            StsDocument result;
            for (const auto& s : doc.systems)
                if (name.empty() || s.name() == name) result.systems.push_back(tau_confluence_reduce(s));
            if (result.systems.empty())
                throw UsageError("'" + path + "' has no transition system named '" + name + "'");
            write_output(reduce_out, print_sts(result), out);
            return kHolds;
        }
        if (verify->parsed()) return fixtures_verify(out, fixtures_json);
    } catch (const StateExplosion& e) {
        err << "protochk: resource cap: " << e.what() << "\n";
        return kResourceCap;
    } catch (const ParseError& e) {
        err << "protochk: " << e.what() << "\n";
        for (const auto& v : e.violations()) err << "  " << to_string(v.kind) << ": " << v.detail << "\n";
        return kUsage;
    } catch (const ValidationError& e) {
        err << "protochk: " << e.what() << "\n";
        for (const auto& v : e.violations()) err << "  " << to_string(v.kind) << ": " << v.detail << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "protochk: " << e.what() << "\n";
        return kUsage;
    }
    err << "protochk: nothing to do\n";
    return kUsage;
}

} // namespace protochk::cli
