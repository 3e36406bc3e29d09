#include "protochk/format.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace protochk {

namespace {

std::string describe(ParseError::Kind k)
{
    switch (k) {
    case ParseError::Kind::Syntax: return "syntax error";
    case ParseError::Kind::Validation: return "invalid transition system";
    case ParseError::Kind::DuplicateName: return "duplicate name";
    case ParseError::Kind::EmptyListen: return "empty listen";
    case ParseError::Kind::EmptyIfElse: return "empty ifelse";
    case ParseError::Kind::Unsupported: return "unsupported activity";
    }
    return "error";
}

std::string format_message(ParseError::Kind kind, std::size_t line, std::size_t col, const std::string& msg,
                           const std::vector<Violation>& vs)
{
    std::string s = std::to_string(line) + ":" + std::to_string(col) + ": " + describe(kind) + ": " + msg;
    for (const auto& v : vs) s += "\n  " + std::string(to_string(v.kind)) + ": " + v.detail;
    return s;
}

enum class Tok { Ident, Tick, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t col;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run()
    {
        std::vector<Token> toks;
        for (;;) {
            skip();
            if (pos_ >= src_.size()) {
                toks.push_back({Tok::End, "", line_, col_});
                return toks;
            }
            const std::size_t l = line_, c = col_;
            const char ch = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
                std::size_t start = pos_;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    advance();
                std::string text(src_.substr(start, pos_ - start));
                toks.push_back({text == "TICK" ? Tok::Tick : Tok::Ident, text == "TICK" ? std::string(kTick) : text,
                                l, c});
            } else if (src_.substr(pos_, kTick.size()) == kTick) {
                pos_ += kTick.size();
                ++col_;
                toks.push_back({Tok::Tick, std::string(kTick), l, c});
            } else if (src_.substr(pos_, 2) == "->") {
                advance();
                advance();
                toks.push_back({Tok::Punct, "->", l, c});
            } else if (std::string_view("{};:,()!?").find(ch) != std::string_view::npos) {
                advance();
                toks.push_back({Tok::Punct, std::string(1, ch), l, c});
            } else {
                throw ParseError(ParseError::Kind::Syntax, l, c, std::string("unexpected character '") + ch + "'");
            }
        }
    }

private:
    void advance()
    {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
            ++col_;
        }
        ++pos_;
    }

    void skip()
    {
        while (pos_ < src_.size()) {
            if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
                advance();
            } else if (src_.substr(pos_, 2) == "//") {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                return;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

    StsDocument document()
    {
        StsDocument doc;
        std::set<std::string> names;
        do {
            const Token& at = peek();
            Sts sts = system();
            if (!names.insert(sts.name()).second)
                throw ParseError(ParseError::Kind::DuplicateName, at.line, at.col,
                                 "transition system '" + sts.name() + "' defined twice");
            doc.systems.push_back(std::move(sts));
        } while (peek().kind != Tok::End);
        return doc;
    }

    Workflow workflow()
    {
        keyword("workflow");
        Workflow wf;
        wf.name = ident("workflow name");
        punct("{");
        wf.body = activity();
        punct("}");
        expect_end();
        return wf;
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    [[noreturn]] void fail(const Token& t, const std::string& what) const
    {
        std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(ParseError::Kind::Syntax, t.line, t.col, "expected " + what + ", found " + found);
    }

    bool at_punct(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }
    bool at_keyword(std::string_view k) const { return peek().kind == Tok::Ident && peek().text == k; }

    void punct(std::string_view p)
    {
        if (!at_punct(p)) fail(peek(), "'" + std::string(p) + "'");
        ++pos_;
    }

    void keyword(std::string_view k)
    {
        if (!at_keyword(k)) fail(peek(), "'" + std::string(k) + "'");
        ++pos_;
    }

    std::string ident(const std::string& what)
    {
        if (peek().kind != Tok::Ident) fail(peek(), what);
        return next().text;
    }

    void expect_end()
    {
        if (peek().kind != Tok::End) fail(peek(), "end of input");
    }

    std::vector<std::string> params()
    {
        std::vector<std::string> sorts;
        if (!at_punct("(")) return sorts;
        ++pos_;
        sorts.push_back(ident("sort name"));
        while (at_punct(",")) {
            ++pos_;
            sorts.push_back(ident("sort name"));
        }
        punct(")");
        return sorts;
    }

    Label label()
    {
        const Token& t = peek();
        if (t.kind == Tok::Ident && t.text == "tau" && !(peek(1).kind == Tok::Punct && (peek(1).text == "!" || peek(1).text == "?"))) {
            ++pos_;
            return Label::tau();
        }
        if (t.kind != Tok::Ident && t.kind != Tok::Tick) fail(t, "label");
        std::string message = next().text;
        Direction dir;
        if (at_punct("!"))
            dir = Direction::Emission;
        else if (at_punct("?"))
            dir = Direction::Reception;
        else
            fail(peek(), "'!' or '?'");
        ++pos_;
        return Label::observable(std::move(message), dir, params());
    }

    Sts system()
    {
        const Token start = peek();
        keyword("sts");
        RawSts raw;
        raw.name = ident("transition system name");
        punct("{");
        keyword("init");
        raw.initial = ident("state name");
        punct(";");
        keyword("final");
        raw.finals.push_back(ident("state name"));
        while (at_punct(",")) {
            ++pos_;
            raw.finals.push_back(ident("state name"));
        }
        punct(";");
        while (!at_punct("}")) {
            Transition t;
            t.source = ident("state name or '}'");
            punct("->");
            t.target = ident("state name");
            punct(":");
            t.label = label();
            punct(";");
            raw.transitions.push_back(std::move(t));
        }
        punct("}");
        try {
            return validate(raw);
        } catch (const ValidationError& e) {
            throw ParseError(ParseError::Kind::Validation, start.line, start.col, "in '" + raw.name + "'",
                             e.violations());
        }
    }

    WfActivity activity()
    {
        const Token& t = peek();
        if (at_punct("{")) {
            ++pos_;
            std::vector<WfActivity> items;
            while (!at_punct("}")) items.push_back(activity());
            ++pos_;
            return WfActivity::sequence(std::move(items));
        }
        if (t.kind != Tok::Ident) fail(t, "activity");
        if (t.text == "receive" || t.text == "send") {
            const bool recv = t.text == "receive";
            ++pos_;
            std::string msg = ident("message name");
            auto sorts = params();
            punct(";");
            return recv ? WfActivity::receive(std::move(msg), std::move(sorts))
                        : WfActivity::send(std::move(msg), std::move(sorts));
        }
        if (t.text == "ifelse") {
            const Token at = next();
            punct("{");
            std::vector<WfActivity> branches;
            while (at_keyword("branch")) {
                ++pos_;
                branches.push_back(activity());
            }
            punct("}");
            if (branches.empty())
                throw ParseError(ParseError::Kind::EmptyIfElse, at.line, at.col, "ifelse needs at least one branch");
            return WfActivity::if_else(std::move(branches));
        }
        if (t.text == "listen") {
            const Token at = next();
            punct("{");
            std::vector<std::pair<Label, WfActivity>> events;
            while (at_keyword("event")) {
                ++pos_;
                keyword("receive");
                std::string msg = ident("message name");
                auto sorts = params();
                punct(";");
                auto body = activity();
                events.emplace_back(Label::reception(std::move(msg), std::move(sorts)), std::move(body));
            }
            std::vector<WfActivity> delay;
            if (at_keyword("delay")) {
                ++pos_;
                delay.push_back(activity());
            }
            punct("}");
            if (events.empty())
                throw ParseError(ParseError::Kind::EmptyListen, at.line, at.col, "listen needs at least one event");
            return WfActivity::listen(std::move(events), std::move(delay));
        }
        if (t.text == "while") {
            ++pos_;
            return WfActivity::while_loop(activity());
        }
        if (t.text == "terminate" || t.text == "code") {
            const bool term = t.text == "terminate";
            ++pos_;
            punct(";");
            return term ? WfActivity::terminate() : WfActivity::code();
        }
        if (t.text == "parallel")
            throw ParseError(ParseError::Kind::Unsupported, t.line, t.col,
                             "the parallel activity has no translation to a transition system");
        fail(t, "activity");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string aut_quote(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

} // namespace

ParseError::ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message,
                       std::vector<Violation> violations)
    : Error(format_message(kind, line, column, message, violations)),
      kind_(kind),
      line_(line),
      column_(column),
      violations_(std::move(violations))
{
}

const Sts* StsDocument::find(std::string_view name) const
{
    for (const auto& s : systems)
        if (s.name() == name) return &s;
    return nullptr;
}

StsDocument parse_sts(std::string_view text)
{
    return Parser(text).document();
}

std::string print_sts(const Sts& sts)
{
    std::ostringstream os;
    os << "sts " << sts.name() << " {\n";
    os << "  init " << sts.initial_id() << ";\n";
    os << "  final ";
    bool first = true;
    for (auto f : sts.finals()) {
        os << (first ? "" : ", ") << sts.state(f);
        first = false;
    }
    os << ";\n";
    for (const auto& e : sts.edges())
        os << "  " << sts.state(e.source) << " -> " << sts.state(e.target) << " : " << e.label.to_string() << ";\n";
    os << "}\n";
    return os.str();
}

std::string print_sts(const StsDocument& doc)
{
    std::string out;
    for (std::size_t i = 0; i < doc.systems.size(); ++i) {
        if (i) out += '\n';
        out += print_sts(doc.systems[i]);
    }
    return out;
}

std::string aut_label(const Label& label)
{
    if (label.is_tau()) return "i";
    std::string s = label.message();
    s += direction_char(label.direction());
    for (std::size_t i = 0; i < label.sorts().size(); ++i) {
        if (i) s += ',';
        s += label.sorts()[i];
    }
    return s;
}

std::string export_aut(const Sts& sts)
{
    std::ostringstream os;
    os << "des (" << sts.initial() << ", " << sts.edges().size() << ", " << sts.size() << ")\n";
    for (const auto& e : sts.edges())
        os << "(" << e.source << ", \"" << aut_quote(aut_label(e.label)) << "\", " << e.target << ")\n";
    return os.str();
}

std::string export_aut(const ProductLts& product)
{
    std::ostringstream os;
    os << "des (" << product.initial() << ", " << product.steps().size() << ", " << product.size() << ")\n";
    for (const auto& st : product.steps()) {
        const std::string lbl = st.kind == StepKind::Sync ? st.label.message() : "i";
        os << "(" << st.from << ", \"" << aut_quote(lbl) << "\", " << st.to << ")\n";
    }
    return os.str();
}

Workflow parse_workflow(std::string_view text)
{
    return Parser(text).workflow();
}

} // namespace protochk
