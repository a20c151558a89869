#include "masp/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace masp {

namespace {

enum class Tok {
    ident,     // lowercase-initial
    variable,  // uppercase-initial
    integer,
    lbrace,
    rbrace,
    lparen,
    rparen,
    comma,
    dot,
    semicolon,
    slash,
    eq,
    neq,
    if_,  // :-
    show_directive,
    eof,
};

struct Token {
    Tok kind;
    std::string text;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        skip_ws();
        Token t;
        t.line = line_;
        t.column = col_;
        if (pos_ >= src_.size()) {
            t.kind = Tok::eof;
            return t;
        }
        char c = src_[pos_];
        if (c == '#') {
            size_t start = pos_;
            advance();
            while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_])))
                advance();
            t.text = src_.substr(start, pos_ - start);
            if (t.text == "#show") {
                t.kind = Tok::show_directive;
                return t;
            }
            throw LexError{t.line, t.column, "unknown directive '" + t.text + "'"};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                advance();
            t.text = src_.substr(start, pos_ - start);
            t.kind = std::isupper(static_cast<unsigned char>(c)) ? Tok::variable : Tok::ident;
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                advance();
            t.text = src_.substr(start, pos_ - start);
            t.kind = Tok::integer;
            return t;
        }
        switch (c) {
            case '{': advance(); t.kind = Tok::lbrace; return t;
            case '}': advance(); t.kind = Tok::rbrace; return t;
            case '(': advance(); t.kind = Tok::lparen; return t;
            case ')': advance(); t.kind = Tok::rparen; return t;
            case ',': advance(); t.kind = Tok::comma; return t;
            case '.': advance(); t.kind = Tok::dot; return t;
            case ';': advance(); t.kind = Tok::semicolon; return t;
            case '/': advance(); t.kind = Tok::slash; return t;
            case '=': advance(); t.kind = Tok::eq; return t;
            case '!':
                advance();
                if (pos_ < src_.size() && src_[pos_] == '=') {
                    advance();
                    t.kind = Tok::neq;
                    return t;
                }
                throw LexError{t.line, t.column, "expected '=' after '!'"};
            case ':':
                advance();
                if (pos_ < src_.size() && src_[pos_] == '-') {
                    advance();
                    t.kind = Tok::if_;
                    return t;
                }
                throw LexError{t.line, t.column, "expected '-' after ':'"};
            default:
                throw LexError{t.line, t.column,
                               std::string("unexpected character '") + c + "'"};
        }
    }

    struct LexError {
        int line;
        int column;
        std::string message;
    };

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

bool is_keyword(const std::string& s) {
    return s == "module" || s == "def" || s == "show" || s == "not";
}

class Parser {
public:
    Parser(const std::string& src, std::vector<Diagnostic>& diags)
        : lexer_(src), diags_(diags) {
        bump();
    }

    struct Abort {};  // unwinds to the entry point after a fatal diagnostic

    ModularProgram parse_program_toplevel() {
        Level top = parse_level(/*toplevel=*/true);
        expect(Tok::eof, "expected end of input");
        ModularProgram p;
        p.members = std::move(top.members);
        if (show_) {
            p.public_preds = canonical_predicates(*show_);
        } else {
            // HL-modular default: everything is public
            p.public_preds = predicates_of(p);
        }
        return p;
    }

    DefModule parse_instance_toplevel() {
        DefModule m;
        while (cur_.kind != Tok::eof) {
            Token at = cur_;
            if (cur_.kind != Tok::ident || is_keyword(cur_.text))
                fail(at, "instances may contain only ground facts");
            Rule r = parse_rule();
            if (!r.is_fact()) fail(at, "instances may contain only ground facts");
            if (!r.head[0].is_ground()) fail(at, "non-ground fact");
            m.rules.push_back(std::move(r));
        }
        std::vector<PredicateSymbol> preds;
        for (const auto& r : m.rules) preds.push_back(r.head[0].pred);
        m.intensional = canonical_predicates(std::move(preds));
        return m;
    }

    void fail(const Token& at, const std::string& msg) {
        diags_.push_back({Diagnostic::Severity::error, at.line, at.column, msg});
        throw Abort{};
    }

private:
    struct Level {
        std::vector<Member> members;
    };

    void bump() {
        try {
            cur_ = lexer_.next();
        } catch (const Lexer::LexError& e) {
            diags_.push_back({Diagnostic::Severity::error, e.line, e.column, e.message});
            throw Abort{};
        }
    }

    Token expect(Tok kind, const std::string& what) {
        if (cur_.kind != kind) fail(cur_, what);
        Token t = cur_;
        bump();
        return t;
    }

    bool at_ident(const char* kw) const { return cur_.kind == Tok::ident && cur_.text == kw; }

    // item* until the given closer; bare rules become one implicit def-module
    // at the position of the first bare rule.
    Level parse_level(bool toplevel) {
        Level level;
        std::vector<Rule> bare;
        std::optional<size_t> bare_slot;
        auto flush = [&]() {
            if (bare.empty()) return;
            DefModule m;
            std::vector<PredicateSymbol> preds;
            for (const auto& r : bare) {
                for (const auto& a : r.head) preds.push_back(a.pred);
                for (const auto& a : r.positive_body) preds.push_back(a.pred);
                for (const auto& a : r.negative_body) preds.push_back(a.pred);
                for (const auto& a : r.double_negated_body) preds.push_back(a.pred);
            }
            m.intensional = canonical_predicates(std::move(preds));
            m.rules = std::move(bare);
            Member mem;
            mem.node = std::move(m);
            level.members.insert(level.members.begin() + static_cast<long>(*bare_slot),
                                 std::move(mem));
        };

        while (true) {
            if (cur_.kind == Tok::eof || cur_.kind == Tok::rbrace) break;
            if (at_ident("module")) {
                Member mem;
                mem.node = parse_module();
                level.members.push_back(std::move(mem));
            } else if (at_ident("def")) {
                Member mem;
                mem.node = parse_defblock();
                level.members.push_back(std::move(mem));
            } else if (cur_.kind == Tok::show_directive) {
                Token at = cur_;
                if (!toplevel) fail(at, "#show is only allowed at the top level");
                bump();
                auto preds = parse_predlist();
                expect(Tok::dot, "expected '.' after #show");
                if (show_) fail(at, "duplicate #show directive");
                show_ = std::move(preds);
            } else {
                if (!bare_slot) bare_slot = level.members.size();
                bare.push_back(parse_rule());
            }
        }
        flush();
        return level;
    }

    ModularProgram parse_module() {
        bump();  // module
        Token name = expect(Tok::ident, "expected module name");
        if (is_keyword(name.text)) fail(name, "'" + name.text + "' cannot be a module name");
        if (!at_ident("show")) fail(cur_, "expected 'show' after module name");
        bump();
        auto pub = parse_predlist();
        expect(Tok::lbrace, "expected '{' to open module body");
        Level body = parse_level(/*toplevel=*/false);
        expect(Tok::rbrace, "expected '}' to close module body");
        ModularProgram p;
        p.name = name.text;
        p.public_preds = canonical_predicates(std::move(pub));
        p.members = std::move(body.members);
        return p;
    }

    DefModule parse_defblock() {
        bump();  // def
        auto intensional = parse_predlist();
        expect(Tok::lbrace, "expected '{' to open def block");
        DefModule m;
        m.intensional = canonical_predicates(std::move(intensional));
        while (cur_.kind != Tok::rbrace) {
            if (cur_.kind == Tok::eof) fail(cur_, "unterminated def block");
            Token at = cur_;
            Rule r = parse_rule();
            for (const auto& a : r.head) {
                if (std::find(m.intensional.begin(), m.intensional.end(), a.pred) ==
                    m.intensional.end()) {
                    diags_.push_back({Diagnostic::Severity::warning, at.line, at.column,
                                      "head predicate " + a.pred.to_string() +
                                          " is not in the def block's intensional list"});
                }
            }
            m.rules.push_back(std::move(r));
        }
        bump();  // }
        return m;
    }

    std::vector<PredicateSymbol> parse_predlist() {
        std::vector<PredicateSymbol> out;
        if (cur_.kind != Tok::ident || is_keyword(cur_.text)) return out;  // may be empty
        while (true) {
            Token name = expect(Tok::ident, "expected predicate name");
            expect(Tok::slash, "expected '/' after predicate name");
            Token ar = expect(Tok::integer, "expected arity");
            if (ar.text.size() > 2) fail(ar, "arity out of range");
            out.push_back({name.text, std::stoi(ar.text)});
            if (cur_.kind != Tok::comma) break;
            bump();
        }
        return out;
    }

    Term parse_term() {
        if (cur_.kind == Tok::ident) {
            if (is_keyword(cur_.text)) fail(cur_, "'" + cur_.text + "' is a reserved word");
            Term t = Term::constant(cur_.text);
            bump();
            return t;
        }
        if (cur_.kind == Tok::variable) {
            Term t = Term::variable(cur_.text);
            bump();
            return t;
        }
        fail(cur_, "expected a term");
        return {};
    }

    Atom parse_atom() {
        Token name = expect(Tok::ident, "expected an atom");
        if (is_keyword(name.text)) fail(name, "'" + name.text + "' is a reserved word");
        Atom a;
        a.pred.name = name.text;
        if (cur_.kind == Tok::lparen) {
            bump();
            while (true) {
                a.args.push_back(parse_term());
                if (cur_.kind != Tok::comma) break;
                bump();
            }
            expect(Tok::rparen, "expected ')' to close argument list");
        }
        a.pred.arity = static_cast<int>(a.args.size());
        return a;
    }

    Rule parse_rule() {
        Rule r;
        bool has_head = false;
        if (cur_.kind == Tok::lbrace) {
            bump();
            r.choice = true;
            r.head.push_back(parse_atom());
            expect(Tok::rbrace, "expected '}' to close choice head");
            has_head = true;
        } else if (cur_.kind == Tok::ident && !is_keyword(cur_.text)) {
            r.head.push_back(parse_atom());
            while (cur_.kind == Tok::semicolon) {
                bump();
                r.head.push_back(parse_atom());
            }
            has_head = true;
        }
        if (cur_.kind == Tok::if_) {
            bump();
            parse_body(r);
        } else if (!has_head) {
            fail(cur_, "expected a rule");
        }
        expect(Tok::dot, "expected '.' to terminate rule");
        return r;
    }

    void parse_body(Rule& r) {
        while (true) {
            if (at_ident("not")) {
                bump();
                bool dbl = false;
                if (at_ident("not")) {
                    bump();
                    dbl = true;
                }
                Atom a = parse_atom();
                (dbl ? r.double_negated_body : r.negative_body).push_back(std::move(a));
            } else if (cur_.kind == Tok::variable ||
                       (cur_.kind == Tok::ident && !is_keyword(cur_.text))) {
                // could be an atom or the left term of a comparison
                if (cur_.kind == Tok::variable) {
                    Term lhs = parse_term();
                    Comparison c;
                    c.lhs = std::move(lhs);
                    if (cur_.kind == Tok::eq)
                        c.op = Comparison::Op::eq;
                    else if (cur_.kind == Tok::neq)
                        c.op = Comparison::Op::neq;
                    else
                        fail(cur_, "expected '=' or '!=' after term");
                    bump();
                    c.rhs = parse_term();
                    r.comparisons.push_back(std::move(c));
                } else {
                    Token name = cur_;
                    bump();
                    if (cur_.kind == Tok::eq || cur_.kind == Tok::neq) {
                        Comparison c;
                        c.lhs = Term::constant(name.text);
                        c.op = cur_.kind == Tok::eq ? Comparison::Op::eq : Comparison::Op::neq;
                        bump();
                        c.rhs = parse_term();
                        r.comparisons.push_back(std::move(c));
                    } else {
                        Atom a;
                        a.pred.name = name.text;
                        if (cur_.kind == Tok::lparen) {
                            bump();
                            while (true) {
                                a.args.push_back(parse_term());
                                if (cur_.kind != Tok::comma) break;
                                bump();
                            }
                            expect(Tok::rparen, "expected ')' to close argument list");
                        }
                        a.pred.arity = static_cast<int>(a.args.size());
                        r.positive_body.push_back(std::move(a));
                    }
                }
            } else {
                fail(cur_, "expected a body literal");
            }
            if (cur_.kind != Tok::comma) break;
            bump();
        }
    }

    Lexer lexer_;
    Token cur_;
    std::vector<Diagnostic>& diags_;
    std::optional<std::vector<PredicateSymbol>> show_;
};

}  // namespace

ParseResult parse_program(const SourceUnit& source) {
    ParseResult result;
    if (source.kind != SourceUnit::Kind::program) {
        result.diagnostics.push_back(
            {Diagnostic::Severity::error, 1, 1, "source unit is not a program"});
        return result;
    }
    try {
        Parser p(source.content, result.diagnostics);
        result.program = p.parse_program_toplevel();
    } catch (const Parser::Abort&) {
        result.program.reset();
    }
    return result;
}

InstanceParseResult parse_instance(const SourceUnit& source) {
    InstanceParseResult result;
    if (source.kind != SourceUnit::Kind::instance) {
        result.diagnostics.push_back(
            {Diagnostic::Severity::error, 1, 1, "source unit is not an instance"});
        return result;
    }
    try {
        Parser p(source.content, result.diagnostics);
        result.instance = p.parse_instance_toplevel();
    } catch (const Parser::Abort&) {
        result.instance.reset();
    }
    return result;
}

SourceUnit load_source(const std::string& path, SourceUnit::Kind kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return SourceUnit{path, ss.str(), kind};
}

}  // namespace masp
