#include "moserlab/sexpr.hpp"

#include "moserlab/errors.hpp"

#include <cctype>
#include <sstream>

namespace moserlab::poly {

namespace {

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    std::vector<SNode> read_all() {
        std::vector<SNode> out;
        skip();
        while (pos_ < text_.size()) {
            out.push_back(read());
            skip();
        }
        return out;
    }

private:
    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                if (c == '\n') ++line_;
                ++pos_;
            } else {
                break;
            }
        }
    }

    SNode read() {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        SNode node;
        node.line = line_;
        char c = text_[pos_];
        if (c == ')') fail("unexpected ')'");
        if (c == '(') {
            ++pos_;
            node.is_list = true;
            for (;;) {
                skip();
                if (pos_ >= text_.size()) fail("unterminated list opened on line " + std::to_string(node.line));
                if (text_[pos_] == ')') {
                    ++pos_;
                    break;
                }
                node.items.push_back(read());
            }
            return node;
        }
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char d = text_[pos_];
            if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
            ++pos_;
        }
        node.atom = std::string(text_.substr(start, pos_ - start));
        return node;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("s-expression line " + std::to_string(line_) + ": " + msg);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

[[noreturn]] void bad(const SNode& node, const std::string& msg) {
    throw ConfigError("s-expression line " + std::to_string(node.line) + ": " + msg + " in " + to_text(node));
}

bool looks_numeric(const std::string& a) {
    if (a.empty()) return false;
    std::size_t i = (a[0] == '-' || a[0] == '+') ? 1 : 0;
    return i < a.size() && (std::isdigit(static_cast<unsigned char>(a[i])) || a[i] == '.');
}

void expect_arity(const SNode& node, std::size_t n) {
    if (node.items.size() != n + 1) bad(node, "expected " + std::to_string(n) + " argument(s)");
}

void expect_t(const SNode& node) {
    if (node.is_list || node.atom != "t") bad(node, "argument must be t");
}

}  // namespace

std::vector<SNode> parse_sexprs(std::string_view text) { return Reader(text).read_all(); }

std::string to_text(const SNode& node) {
    if (!node.is_list) return node.atom;
    std::string out = "(";
    for (std::size_t i = 0; i < node.items.size(); ++i) {
        if (i) out += ' ';
        out += to_text(node.items[i]);
    }
    return out + ")";
}

Expr eval_expr(const SNode& node, const Definitions& defs) {
    if (!node.is_list) {
        const std::string& a = node.atom;
        if (a == "t") return Expr::t();
        if (a == "s") return Expr::s();
        if (looks_numeric(a)) {
            try {
                return Expr::constant(parse_rational(a));
            } catch (const std::exception& e) {
                bad(node, e.what());
            }
        }
        if (auto it = defs.find(a); it != defs.end()) return it->second;
        bad(node, "unknown symbol");
    }
    if (node.items.empty() || node.items[0].is_list) bad(node, "expected operator");
    const std::string& op = node.items[0].atom;
    const auto args = [&](std::size_t i) { return eval_expr(node.items.at(i), defs); };
    const std::size_t n = node.items.size() - 1;

    if (op == "+") {
        Expr r;
        for (std::size_t i = 1; i <= n; ++i) r += args(i);
        return r;
    }
    if (op == "*") {
        Expr r = Expr::constant(1);
        for (std::size_t i = 1; i <= n; ++i) r *= args(i);
        return r;
    }
    if (op == "-") {
        if (n == 0) bad(node, "'-' needs an argument");
        if (n == 1) return -args(1);
        Expr r = args(1);
        for (std::size_t i = 2; i <= n; ++i) r -= args(i);
        return r;
    }
    if (op == "/") {
        expect_arity(node, 2);
        const Rational den = eval_rational(node.items[2], defs);
        if (den == 0) bad(node, "division by zero");
        return args(1) * Expr::constant(Rational(1) / den);
    }
    if (op == "^") {
        expect_arity(node, 2);
        const Rational k = eval_rational(node.items[2], defs);
        if (!is_integer(k)) bad(node, "exponent must be an integer");
        return args(1).pow(boost::multiprecision::numerator(k).convert_to<int>());
    }
    if (op == "abs") {
        expect_arity(node, 1);
        expect_t(node.items[1]);
        return Expr::abs_t();
    }
    if (op == "sign") {
        expect_arity(node, 1);
        expect_t(node.items[1]);
        return Expr::sign_t();
    }
    if (op == "abspow") {
        expect_arity(node, 2);
        return Expr::abs_pow(eval_rational(node.items[1], defs), eval_rational(node.items[2], defs));
    }
    if (op == "d") {
        expect_arity(node, 1);
        return differentiate(args(1));
    }
    if (op == "ds") {
        expect_arity(node, 1);
        return differentiate_s(args(1));
    }
    if (op == "nonneg") {
        expect_arity(node, 1);
        return on_nonneg(args(1));
    }
    if (op == "at-one") {
        expect_arity(node, 1);
        return Expr::coefficient(at_one(args(1)));
    }
    if (op == "subs-s") {
        expect_arity(node, 2);
        return substitute_s(args(1), eval_rational(node.items[2], defs));
    }
    bad(node, "unknown operator '" + op + "'");
}

Rational eval_rational(const SNode& node, const Definitions& defs) {
    Expr e = eval_expr(node, defs);
    if (e.is_zero()) return 0;
    const auto& terms = e.terms();
    if (terms.size() != 1) bad(node, "expected a rational constant");
    const auto& [k, c] = *terms.begin();
    if (!(k == TermKey{0, 0, 0}) || !c.is_constant()) bad(node, "expected a rational constant");
    return c.coeff(0);
}

Expr parse_expr(std::string_view text, const Definitions& defs) {
    auto forms = parse_sexprs(text);
    if (forms.size() != 1) throw ConfigError("expected exactly one expression");
    return eval_expr(forms[0], defs);
}

namespace {

std::string serialize_poly(const Poly& p) {
    const auto& c = p.coeffs();
    std::vector<std::string> parts;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0) continue;
        if (k == 0) {
            parts.push_back(to_string(c[k]));
        } else if (k == 1) {
            parts.push_back("(* " + to_string(c[k]) + " s)");
        } else {
            parts.push_back("(* " + to_string(c[k]) + " (^ s " + std::to_string(k) + "))");
        }
    }
    if (parts.size() == 1) return parts[0];
    std::string out = "(+";
    for (const auto& s : parts) out += " " + s;
    return out + ")";
}

}  // namespace

std::string serialize(const Expr& e) {
    if (e.is_zero()) return "0";
    std::vector<std::string> parts;
    for (const auto& [k, c] : e.terms()) {
        std::string term = "(* " + serialize_poly(c);
        if (k.sign_power == 1) term += " (sign t)";
        term += " (abspow " + to_string(k.a) + " " + to_string(k.q) + "))";
        parts.push_back(std::move(term));
    }
    if (parts.size() == 1) return parts[0];
    std::string out = "(+";
    for (const auto& s : parts) out += " " + s;
    return out + ")";
}

}  // namespace moserlab::poly
