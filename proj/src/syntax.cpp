#include "relunif/syntax.hpp"

#include <cctype>
#include <unordered_map>

#include "relunif/errors.hpp"

namespace relunif {

namespace {

bool ident_start(char c) { return c >= 'a' && c <= 'z'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Formula run() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("empty formula", pos_);
        Formula f = implication();
        skip_ws();
        if (pos_ < s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
        return f;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(std::string_view tok) {
        skip_ws();
        if (s_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    Formula implication() {
        Formula lhs = disjunction();
        if (accept("->")) return Formula::imp(lhs, implication());
        return lhs;
    }

    Formula disjunction() {
        Formula acc = conjunction();
        while (accept("|")) acc = Formula::disj(acc, conjunction());
        return acc;
    }

    Formula conjunction() {
        Formula acc = unary();
        while (accept("&")) acc = Formula::conj(acc, unary());
        return acc;
    }

    Formula unary() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        char c = s_[pos_];
        if (c == '~') {
            ++pos_;
            return Formula::neg(unary());
        }
        if (c == '(') {
            ++pos_;
            Formula f = implication();
            if (!accept(")")) throw ParseError("expected ')'", pos_);
            return f;
        }
        bool param = false;
        std::size_t start = pos_;
        if (c == '#') {
            param = true;
            ++pos_;
            if (pos_ >= s_.size() || !ident_start(s_[pos_]))
                throw ParseError("expected parameter name after '#'", pos_);
        } else if (!ident_start(c)) {
            throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
        }
        std::size_t name_start = pos_;
        while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
        std::string name(s_.substr(name_start, pos_ - name_start));
        if (!param && name == "false") return Formula::bot();
        if (!param && name == "true") return Formula::top();
        auto [it, fresh] = sorts_.emplace(name, param);
        if (!fresh && it->second != param)
            throw ParseError("'" + name + "' used both as variable and as parameter", start);
        return param ? Formula::par(name) : Formula::var(name);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::unordered_map<std::string, bool> sorts_;
};

int level(Formula f) {
    switch (f.kind()) {
        case Kind::Imp:
            return f.rhs().is_bot() ? 4 : 1;
        case Kind::Or:
            return 2;
        case Kind::And:
            return 3;
        default:
            return 4;
    }
}

void emit(Formula f, int need, std::string& out) {
    bool paren = level(f) < need;
    if (paren) out += '(';
    switch (f.kind()) {
        case Kind::Bot:
            out += "false";
            break;
        case Kind::Var:
        case Kind::Par:
            out += f.atom().text();
            break;
        case Kind::And:
            emit(f.lhs(), 3, out);
            out += " & ";
            emit(f.rhs(), 4, out);
            break;
        case Kind::Or:
            emit(f.lhs(), 2, out);
            out += " | ";
            emit(f.rhs(), 3, out);
            break;
        case Kind::Imp:
            if (f.is_top()) {
                out += "true";
            } else if (f.rhs().is_bot()) {
                out += '~';
                emit(f.lhs(), 4, out);
            } else {
                emit(f.lhs(), 2, out);
                out += " -> ";
                emit(f.rhs(), 1, out);
            }
            break;
    }
    if (paren) out += ')';
}

}  // namespace

Formula parse(std::string_view text) { return Parser(text).run(); }

std::string print(Formula f) {
    std::string out;
    emit(f, 0, out);
    return out;
}

AtomSet parse_atoms(std::string_view text) {
    std::vector<Atom> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = text.substr(pos, end - pos);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front())))
            item.remove_prefix(1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back())))
            item.remove_suffix(1);
        bool param = !item.empty() && item.front() == '#';
        if (param) item.remove_prefix(1);
        if (item.empty() || !ident_start(item.front()))
            throw ParseError("bad atom in list", pos);
        for (char c : item)
            if (!ident_char(c)) throw ParseError("bad atom in list", pos);
        if (!param && (item == "true" || item == "false")) throw ParseError("literal in atom list", pos);
        out.push_back(param ? Atom::par(item) : Atom::var(item));
        pos = end + 1;
    }
    return AtomSet(std::move(out));
}

std::string print(const AtomSet& atoms) {
    std::string out;
    for (Atom a : atoms) {
        if (!out.empty()) out += ',';
        out += a.text();
    }
    return out;
}

}  // namespace relunif
