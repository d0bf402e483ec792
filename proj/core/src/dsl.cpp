#include "mlc/dsl.hpp"

#include "mlc/errors.hpp"

#include <cctype>
#include <sstream>

namespace mlc {

namespace {

enum class Tok {
    Number, Ident, LParen, RParen, LBracket, RBracket, Comma, Colon, Dot,
    SubDot, AddDot, Le, Eq, Assign, Semi, End
};

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space_and_comments();
            if (pos_ >= src_.size()) {
                out.push_back({Tok::End, "", line_, col_});
                return out;
            }
            const int line = line_, col = col_;
            const char c = src_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                out.push_back({Tok::Number, lex_number(), line, col});
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                out.push_back({Tok::Ident, lex_ident(), line, col});
            } else {
                switch (c) {
                case '(': out.push_back({Tok::LParen, "(", line, col}); advance(); break;
                case ')': out.push_back({Tok::RParen, ")", line, col}); advance(); break;
                case '[': out.push_back({Tok::LBracket, "[", line, col}); advance(); break;
                case ']': out.push_back({Tok::RBracket, "]", line, col}); advance(); break;
                case ',': out.push_back({Tok::Comma, ",", line, col}); advance(); break;
                case ':': out.push_back({Tok::Colon, ":", line, col}); advance(); break;
                case ';': out.push_back({Tok::Semi, ";", line, col}); advance(); break;
                case '.': out.push_back({Tok::Dot, ".", line, col}); advance(); break;
                case '-':
                    advance();
                    if (pos_ < src_.size() && src_[pos_] == '.') {
                        advance();
                        out.push_back({Tok::SubDot, "-.", line, col});
                    } else {
                        throw ParseError(line, col, "expected '-.' (truncated subtraction)");
                    }
                    break;
                case '+':
                    advance();
                    if (pos_ < src_.size() && src_[pos_] == '.') {
                        advance();
                        out.push_back({Tok::AddDot, "+.", line, col});
                    } else {
                        throw ParseError(line, col, "expected '+.' (truncated addition)");
                    }
                    break;
                case '<':
                    advance();
                    if (pos_ < src_.size() && src_[pos_] == '=') {
                        advance();
                        out.push_back({Tok::Le, "<=", line, col});
                    } else {
                        throw ParseError(line, col, "expected '<='");
                    }
                    break;
                case '=':
                    advance();
                    out.push_back({Tok::Eq, "=", line, col});
                    break;
                default:
                    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
                }
            }
        }
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string lex_number() {
        std::string out;
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                out += src_[pos_];
                advance();
            }
        };
        digits();
        if (pos_ < src_.size() && (src_[pos_] == '/' || src_[pos_] == '.')) {
            // "1.5" and "1/2" are single tokens; "1 . 5" is not.
            const char sep = src_[pos_];
            if (pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
                out += sep;
                advance();
                digits();
            }
        }
        return out;
    }

    std::string lex_ident() {
        std::string out;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            out += src_[pos_];
            advance();
        }
        return out;
    }
};

bool is_keyword(const std::string& s) {
    return s == "d" || s == "sup" || s == "inf" || s == "min" || s == "max" || s == "half" ||
           s == "not" || s == "absdiff" || s == "cmin" || s == "cmax";
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(Lexer(text).run()) {}

    ParsedFormula parse_single() {
        ParsedFormula out;
        out.formula = parse_expr();
        if (peek().kind == Tok::Le) {
            next();
            out.has_condition = true;
            out.eq_zero = false;
            out.threshold = parse_rational();
        } else if (peek().kind == Tok::Eq) {
            next();
            const Token t = expect(Tok::Number, "expected 0 after '='");
            if (t.text != "0") throw ParseError(t.line, t.col, "only '= 0' conditions are supported");
            out.has_condition = true;
            out.eq_zero = true;
            out.threshold = Rat(0);
        }
        expect(Tok::End, "unexpected trailing input");
        return out;
    }

    std::vector<NamedFormula> parse_file() {
        std::vector<NamedFormula> out;
        while (peek().kind != Tok::End) {
            NamedFormula nf;
            const Token name = expect(Tok::Ident, "expected formula name");
            if (is_keyword(name.text))
                throw ParseError(name.line, name.col, "keyword cannot name a formula");
            nf.name = name.text;
            expect(Tok::Colon, "expected ':=' after formula name");
            expect(Tok::Eq, "expected ':=' after formula name");
            nf.formula = parse_expr();
            if (peek().kind == Tok::Le) {
                next();
                nf.has_condition = true;
                nf.eq_zero = false;
                nf.threshold = parse_rational();
            } else if (peek().kind == Tok::Eq) {
                next();
                const Token t = expect(Tok::Number, "expected 0 after '='");
                if (t.text != "0")
                    throw ParseError(t.line, t.col, "only '= 0' conditions are supported");
                nf.has_condition = true;
                nf.eq_zero = true;
                nf.threshold = Rat(0);
            }
            expect(Tok::Semi, "expected ';' after formula definition");
            for (const auto& existing : out)
                if (existing.name == nf.name)
                    throw ParseError(name.line, name.col, "duplicate formula name " + nf.name);
            out.push_back(std::move(nf));
        }
        return out;
    }

private:
    std::vector<Token> toks_;
    std::size_t at_ = 0;

    const Token& peek(std::size_t ahead = 0) const {
        const std::size_t i = at_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    Token next() { return toks_[at_ < toks_.size() - 1 ? at_++ : at_]; }
    Token expect(Tok k, const std::string& msg) {
        const Token& t = peek();
        if (t.kind != k) throw ParseError(t.line, t.col, msg);
        return next();
    }

    Rat parse_rational() {
        const Token t = expect(Tok::Number, "expected rational literal");
        auto r = rat_parse(t.text);
        if (!r) throw ParseError(t.line, t.col, "invalid rational literal " + t.text);
        return *r;
    }

    FormulaPtr parse_expr() {
        FormulaPtr acc = parse_operand();
        for (;;) {
            if (peek().kind == Tok::SubDot) {
                next();
                acc = Formula::trunc_sub(acc, parse_operand());
            } else if (peek().kind == Tok::AddDot) {
                next();
                acc = Formula::trunc_add(acc, parse_operand());
            } else {
                return acc;
            }
        }
    }

    std::vector<FormulaPtr> parse_expr_list_until_rparen() {
        std::vector<FormulaPtr> out;
        if (peek().kind == Tok::RParen) {
            next();
            return out;
        }
        out.push_back(parse_expr());
        while (peek().kind == Tok::Comma) {
            next();
            out.push_back(parse_expr());
        }
        expect(Tok::RParen, "expected ')'");
        return out;
    }

    Term parse_term() {
        const Token id = expect(Tok::Ident, "expected term");
        if (is_keyword(id.text))
            throw ParseError(id.line, id.col, "keyword '" + id.text + "' cannot appear in a term");
        if (peek().kind != Tok::LParen) return Term::var(id.text);
        next();
        std::vector<Term> args;
        if (peek().kind != Tok::RParen) {
            args.push_back(parse_term());
            while (peek().kind == Tok::Comma) {
                next();
                args.push_back(parse_term());
            }
        }
        expect(Tok::RParen, "expected ')' in term");
        return Term::app(id.text, std::move(args));
    }

    FormulaPtr parse_operand() {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Number: {
            next();
            auto r = rat_parse(t.text);
            if (!r) throw ParseError(t.line, t.col, "invalid rational literal " + t.text);
            return Formula::constant(*r);
        }
        case Tok::LParen: {
            next();
            FormulaPtr inner = parse_expr();
            expect(Tok::RParen, "expected ')'");
            return inner;
        }
        case Tok::Ident:
            break;
        default:
            throw ParseError(t.line, t.col, "expected formula");
        }

        const Token id = next();
        const std::string& w = id.text;
        if (w == "d") {
            expect(Tok::LParen, "expected '(' after d");
            Term a = parse_term();
            expect(Tok::Comma, "expected ',' in metric atom");
            Term b = parse_term();
            expect(Tok::RParen, "expected ')'");
            return Formula::dist(std::move(a), std::move(b));
        }
        if (w == "half" || w == "not") {
            expect(Tok::LParen, std::string("expected '(' after ") + w);
            FormulaPtr inner = parse_expr();
            expect(Tok::RParen, "expected ')'");
            return w == "half" ? Formula::half(inner) : Formula::neg(inner);
        }
        if (w == "absdiff") {
            expect(Tok::LParen, "expected '(' after absdiff");
            FormulaPtr a = parse_expr();
            expect(Tok::Comma, "expected ',' in absdiff");
            FormulaPtr b = parse_expr();
            expect(Tok::RParen, "expected ')'");
            return Formula::abs_diff(a, b);
        }
        if (w == "min" || w == "max") {
            expect(Tok::LParen, std::string("expected '(' after ") + w);
            auto xs = parse_expr_list_until_rparen();
            return w == "min" ? Formula::min_of(std::move(xs)) : Formula::max_of(std::move(xs));
        }
        if (w == "cmin" || w == "cmax") {
            expect(Tok::LBracket, std::string("expected '[' after ") + w);
            const Token b = expect(Tok::Number, "expected truncation bound");
            auto bound = rat_parse(b.text);
            if (!bound || *bound < 1 || boost::multiprecision::denominator(*bound) != 1)
                throw ParseError(b.line, b.col, "truncation bound must be a positive integer");
            expect(Tok::RBracket, "expected ']'");
            expect(Tok::LParen, std::string("expected '(' after ") + w + "[n]");
            auto xs = parse_expr_list_until_rparen();
            if (xs.empty())
                throw ParseError(b.line, b.col, w + " requires at least one member");
            const auto n = static_cast<std::size_t>(
                boost::multiprecision::numerator(*bound).convert_to<unsigned long>());
            try {
                return w == "cmin" ? Formula::cmin(std::move(xs), n, Modulus::identity())
                                   : Formula::cmax(std::move(xs), n, Modulus::identity());
            } catch (const Error& e) {
                throw ParseError(b.line, b.col, e.what());
            }
        }
        if (w == "sup" || w == "inf") {
            const Token var = expect(Tok::Ident, "expected binder variable");
            if (is_keyword(var.text))
                throw ParseError(var.line, var.col, "keyword cannot be a binder variable");
            expect(Tok::Colon, "expected ':' after binder variable");
            const Token sort = expect(Tok::Ident, "expected sort name");
            expect(Tok::Dot, "expected '.' after binder sort");
            FormulaPtr body = parse_expr();
            return w == "sup" ? Formula::sup(var.text, sort.text, body)
                              : Formula::inf(var.text, sort.text, body);
        }
        // Plain identifier: predicate application.
        expect(Tok::LParen, "expected '(' after predicate " + w);
        std::vector<Term> args;
        if (peek().kind != Tok::RParen) {
            args.push_back(parse_term());
            while (peek().kind == Tok::Comma) {
                next();
                args.push_back(parse_term());
            }
        }
        expect(Tok::RParen, "expected ')'");
        return Formula::pred(w, std::move(args));
    }
};

// ------------------------------------------------------------- printing --

bool is_sum(const Formula& f) {
    return f.kind == Conn::TruncSub || f.kind == Conn::TruncAdd;
}
bool is_binder(const Formula& f) {
    return f.kind == Conn::Sup || f.kind == Conn::Inf;
}

void print_node(const Formula& f, std::ostringstream& os);

// Operand of a sum: parenthesize nested sums on the right (left-assoc) and
// binders anywhere in a sum (their body would otherwise swallow the rest).
void print_sum_operand(const Formula& f, bool leftmost, std::ostringstream& os) {
    const bool parens = is_binder(f) || (!leftmost && is_sum(f));
    if (parens) os << "(";
    print_node(f, os);
    if (parens) os << ")";
}

void print_list(const std::vector<FormulaPtr>& xs, std::ostringstream& os) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) os << ", ";
        print_node(*xs[i], os);
    }
}

void print_node(const Formula& f, std::ostringstream& os) {
    switch (f.kind) {
    case Conn::Const:
        os << rat_to_string(f.value);
        return;
    case Conn::Dist:
        os << "d(" << print_term(f.terms[0]) << ", " << print_term(f.terms[1]) << ")";
        return;
    case Conn::Pred: {
        os << f.symbol << "(";
        for (std::size_t i = 0; i < f.terms.size(); ++i) {
            if (i) os << ", ";
            os << print_term(f.terms[i]);
        }
        os << ")";
        return;
    }
    case Conn::Neg:
        os << "not(";
        print_node(*f.children[0], os);
        os << ")";
        return;
    case Conn::Half:
        os << "half(";
        print_node(*f.children[0], os);
        os << ")";
        return;
    case Conn::TruncSub:
    case Conn::TruncAdd:
        print_sum_operand(*f.children[0], true, os);
        os << (f.kind == Conn::TruncSub ? " -. " : " +. ");
        print_sum_operand(*f.children[1], false, os);
        return;
    case Conn::AbsDiff:
        os << "absdiff(";
        print_node(*f.children[0], os);
        os << ", ";
        print_node(*f.children[1], os);
        os << ")";
        return;
    case Conn::Min:
    case Conn::Max:
        os << (f.kind == Conn::Min ? "min(" : "max(");
        print_list(f.children, os);
        os << ")";
        return;
    case Conn::CMin:
    case Conn::CMax:
        os << (f.kind == Conn::CMin ? "cmin[" : "cmax[") << f.family_bound << "](";
        print_list(f.children, os);
        os << ")";
        return;
    case Conn::Sup:
    case Conn::Inf:
        os << (f.kind == Conn::Sup ? "sup " : "inf ") << f.symbol << ":" << f.sort << " . ";
        print_node(*f.children[0], os);
        return;
    }
}

} // namespace

ParsedFormula parse_formula(std::string_view text) { return Parser(text).parse_single(); }

std::vector<NamedFormula> parse_formula_file(std::string_view text) {
    return Parser(text).parse_file();
}

std::string print_term(const Term& t) {
    if (t.kind == Term::Kind::Var) return t.name;
    std::string out = t.name + "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ", ";
        out += print_term(t.args[i]);
    }
    return out + ")";
}

std::string print_formula(const Formula& f) {
    std::ostringstream os;
    print_node(f, os);
    return os.str();
}

std::string print_formula_file(const std::vector<NamedFormula>& entries) {
    std::ostringstream os;
    for (const auto& nf : entries) {
        os << nf.name << " := " << print_formula(*nf.formula);
        if (nf.has_condition) {
            if (nf.eq_zero)
                os << " = 0";
            else
                os << " <= " << rat_to_string(nf.threshold);
        }
        os << ";\n";
    }
    return os.str();
}

} // namespace mlc
