#include "trp/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace trp {

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool done() {
        skip_ws();
        return pos_ >= text_.size();
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) fail(std::string("expected '") + c + "' (" + what + ")");
    }

    std::string word() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    int integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ == start) fail("expected an integer");
        long v = 0;
        for (std::size_t i = start; i < pos_; ++i) {
            v = v * 10 + (text_[i] - '0');
            if (v > 1'000'000'000L) fail("interval bound too large");
        }
        return static_cast<int>(v);
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    std::size_t pos() const { return pos_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

Interval parse_interval(Cursor& c) {
    c.expect('[', "interval");
    Interval w;
    w.lo = c.integer();
    c.expect(',', "interval");
    w.hi = c.integer();
    c.expect(']', "interval");
    if (w.lo > w.hi) c.fail("interval has a > b");
    return w;
}

Formula parse_until_level(Cursor& c);

Formula parse_primary(Cursor& c) {
    if (c.accept('(')) {
        Formula inner = parse_until_level(c);
        c.expect(')', "closing parenthesis");
        return inner;
    }
    if (c.accept('"')) {
        std::string name = c.word();
        if (name.empty()) c.fail("empty atom name");
        c.expect('"', "closing quote");
        return make_atom(std::move(name));
    }
    std::string kw = c.word();
    if (kw == "TRUE") return make_true();
    if (kw.empty()) c.fail("expected a formula");
    c.fail("unexpected token '" + kw + "' (atoms must be double-quoted)");
}

Formula parse_unary(Cursor& c) {
    if (c.accept('!')) return make_not(parse_unary(c));
    // G / F keywords need one-token lookahead; atoms are quoted so a bare
    // letter can only be an operator or TRUE
    if (c.peek() == 'G' || c.peek() == 'F' || c.peek() == 'T' || c.peek() == 'U') {
        std::size_t mark = c.pos();
        std::string kw = c.word();
        if (kw == "G") {
            const Interval w = parse_interval(c);
            return make_globally(w, parse_unary(c));
        }
        if (kw == "F") {
            const Interval w = parse_interval(c);
            return make_eventually(w, parse_unary(c));
        }
        if (kw == "TRUE") return make_true();
        throw ParseError("unexpected token '" + kw + "'", mark);
    }
    return parse_primary(c);
}

Formula parse_and_level(Cursor& c) {
    std::vector<Formula> items{parse_unary(c)};
    while (c.accept('&')) items.push_back(parse_unary(c));
    if (items.size() == 1) return items[0];
    return make_and(std::move(items));
}

Formula parse_or_level(Cursor& c) {
    std::vector<Formula> items{parse_and_level(c)};
    while (c.accept('|')) items.push_back(parse_and_level(c));
    if (items.size() == 1) return items[0];
    return make_or(std::move(items));
}

Formula parse_until_level(Cursor& c) {
    Formula lhs = parse_or_level(c);
    if (c.peek() == 'U') {
        std::size_t mark = c.pos();
        std::string kw = c.word();
        if (kw != "U") throw ParseError("unexpected token '" + kw + "'", mark);
        Interval w = parse_interval(c);
        return make_until(w, std::move(lhs), parse_until_level(c)); // right-associative
    }
    return lhs;
}

int precedence(const Formula& f) {
    switch (f->op) {
    case Op::True:
    case Op::Atom: return 5;
    case Op::Not:
    case Op::Globally:
    case Op::Eventually: return 4;
    case Op::And: return 3;
    case Op::Or: return 2;
    case Op::Until: return 1;
    }
    return 0;
}

void print_rec(const Formula& f, int min_prec, std::string& out) {
    const bool parens = precedence(f) < min_prec;
    if (parens) out += '(';
    switch (f->op) {
    case Op::True:
        out += "TRUE";
        break;
    case Op::Atom:
        out += '"';
        out += f->atom;
        out += '"';
        break;
    case Op::Not:
        out += '!';
        print_rec(f->children[0], 4, out);
        break;
    case Op::Globally:
    case Op::Eventually:
        out += f->op == Op::Globally ? 'G' : 'F';
        out += '[' + std::to_string(f->window.lo) + ',' + std::to_string(f->window.hi) + "] ";
        print_rec(f->children[0], 4, out);
        break;
    case Op::And:
    case Op::Or: {
        const char* sep = f->op == Op::And ? " & " : " | ";
        // nested same-operator children keep their parentheses so the parser's
        // chain flattening reproduces this exact tree
        const int child_prec = f->op == Op::And ? 4 : 3;
        for (std::size_t i = 0; i < f->children.size(); ++i) {
            if (i) out += sep;
            print_rec(f->children[i], child_prec, out);
        }
        break;
    }
    case Op::Until:
        print_rec(f->children[0], 2, out);
        out += " U[" + std::to_string(f->window.lo) + ',' + std::to_string(f->window.hi) + "] ";
        print_rec(f->children[1], 1, out);
        break;
    }
    if (parens) out += ')';
}

} // namespace

Formula parse_formula(std::string_view text) {
    Cursor c(text);
    if (c.done()) throw ParseError("empty formula", 0);
    Formula f = parse_until_level(c);
    if (!c.done()) c.fail("trailing input after formula");
    return f;
}

std::string print_formula(const Formula& f) {
    if (!f) throw ModelError("null formula");
    std::string out;
    print_rec(f, 0, out);
    return out;
}

TaskSet parse_task_set(std::istream& in) {
    TaskSet set;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;
        std::size_t sep = line.find(';');
        if (sep == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected '<priority> ; <formula>'");
        std::string prio_text = line.substr(0, sep);
        double priority = 0;
        try {
            std::size_t used = 0;
            priority = std::stod(prio_text, &used);
            while (used < prio_text.size() &&
                   std::isspace(static_cast<unsigned char>(prio_text[used])))
                ++used;
            if (used != prio_text.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(lineno) + ": bad priority '" +
                             prio_text + "'");
        }
        if (priority < 0)
            throw ParseError("line " + std::to_string(lineno) + ": priority must be >= 0");
        try {
            set.tasks.push_back({parse_formula(line.substr(sep + 1)), priority});
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    set.validate();
    return set;
}

TaskSet load_task_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open task file '" + path + "'");
    return parse_task_set(in);
}

} // namespace trp
