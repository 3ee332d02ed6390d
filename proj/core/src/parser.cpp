#include "dms/parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <utility>
#include <vector>

namespace dms {

SourceError::SourceError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      message_(message) {}

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Dot, Implies, Or, Question, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

const char* describe(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Comma: return "','";
        case Tok::Dot: return "'.'";
        case Tok::Implies: return "':-'";
        case Tok::Or: return "disjunction";
        case Tok::Question: return "'?'";
        case Tok::End: return "end of input";
    }
    return "token";
}

bool ident_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_';
}

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        const char c = text[i];
        if (c == '%') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        const std::size_t l = line, k = col;
        auto single = [&](Tok t) {
            out.push_back({t, std::string(1, c), l, k});
            advance(1);
        };
        switch (c) {
            case '(': single(Tok::LParen); continue;
            case ')': single(Tok::RParen); continue;
            case ',': single(Tok::Comma); continue;
            case '.': single(Tok::Dot); continue;
            case '|': single(Tok::Or); continue;
            case '?': single(Tok::Question); continue;
            case ':':
                if (i + 1 < text.size() && text[i + 1] == '-') {
                    out.push_back({Tok::Implies, ":-", l, k});
                    advance(2);
                    continue;
                }
                throw SourceError(l, k, "expected ':-'");
            default: break;
        }
        if (ident_char(c)) {
            if (c == '_') throw SourceError(l, k, "identifiers may not start with '_'");
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            std::string word(text.substr(i, j - i));
            advance(j - i);
            out.push_back({word == "v" ? Tok::Or : Tok::Ident, std::move(word), l, k});
            continue;
        }
        throw SourceError(l, k, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    Program program() {
        Program p;
        while (peek().kind != Tok::End) {
            const Token start = peek();
            std::vector<Atom> head, pos, neg;
            head.push_back(atom());
            while (accept(Tok::Or)) head.push_back(atom());
            if (accept(Tok::Implies)) {
                do {
                    if (peek().kind == Tok::Ident && peek().text == "not") {
                        next();
                        neg.push_back(atom());
                    } else {
                        pos.push_back(atom());
                    }
                } while (accept(Tok::Comma));
            }
            expect(Tok::Dot);
            try {
                p.add(Rule(std::move(head), std::move(pos), std::move(neg)));
            } catch (const ProgramError& e) {
                throw SourceError(start.line, start.column, e.what());
            }
        }
        return p;
    }

    Query query() {
        Query q{atom()};
        expect(Tok::Question);
        if (peek().kind != Tok::End) fail(peek(), "a query is a single atom followed by '?'");
        return q;
    }

    Atom lone_atom() {
        Atom a = atom();
        if (peek().kind != Tok::End) fail(peek(), "trailing input after atom");
        return a;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }

    bool accept(Tok t) {
        if (peek().kind != t) return false;
        ++pos_;
        return true;
    }

    [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw SourceError(t.line, t.column, msg); }

    const Token& expect(Tok t) {
        if (peek().kind != t)
            fail(peek(), std::string("expected ") + describe(t) + ", found " +
                             (peek().kind == Tok::End ? std::string("end of input") : "'" + peek().text + "'"));
        return next();
    }

    Atom atom() {
        const Token& name = expect(Tok::Ident);
        if (name.text == "not") fail(name, "'not' is reserved");
        if (!std::islower(static_cast<unsigned char>(name.text.front())))
            fail(name, "predicate names start with a lowercase letter");
        Atom a{name.text, {}};
        if (accept(Tok::LParen)) {
            do {
                const Token& t = expect(Tok::Ident);
                if (t.text == "not") fail(t, "'not' is reserved");
                a.args.push_back(is_variable_name(t.text) ? Term::variable(t.text) : Term::constant(t.text));
            } while (accept(Tok::Comma));
            expect(Tok::RParen);
        }
        return a;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

Program parse_program(std::string_view text) { return Parser(text).program(); }

Query parse_query(std::string_view text) { return Parser(text).query(); }

Atom parse_atom(std::string_view text) { return Parser(text).lone_atom(); }

std::string print_atom(const Atom& atom) {
    std::string s = atom.predicate;
    if (!atom.args.empty()) {
        s += '(';
        for (std::size_t i = 0; i < atom.args.size(); ++i) {
            if (i) s += ',';
            s += atom.args[i].name();
        }
        s += ')';
    }
    return s;
}

std::string print_rule(const Rule& rule) {
    std::string s;
    for (std::size_t i = 0; i < rule.head().size(); ++i) {
        if (i) s += " v ";
        s += print_atom(rule.head()[i]);
    }
    if (!rule.pos_body().empty() || !rule.neg_body().empty()) {
        s += " :- ";
        bool first = true;
        for (const auto& a : rule.pos_body()) {
            if (!first) s += ", ";
            first = false;
            s += print_atom(a);
        }
        for (const auto& a : rule.neg_body()) {
            if (!first) s += ", ";
            first = false;
            s += "not " + print_atom(a);
        }
    }
    s += '.';
    return s;
}

std::string print_program(const Program& p) {
    std::vector<std::pair<std::string, std::string>> lines;
    lines.reserve(p.size());
    for (const auto& r : p.rules()) lines.emplace_back(r.head().front().predicate, print_rule(r));
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& [pred, text] : lines) out += text + '\n';
    return out;
}

std::string print_query(const Query& q) { return print_atom(q.atom) + "?"; }

std::string print_interpretation(const Interpretation& i) {
    std::string s = "{";
    bool first = true;
    for (const auto& a : i) {
        if (!first) s += ", ";
        first = false;
        s += print_atom(a);
    }
    return s + "}";
}

}  // namespace dms
