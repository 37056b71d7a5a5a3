#pragma once

#include "k3pic/errors.hpp"

#include <cctype>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace k3pic {

/// Symbolic lattice expression: atoms A(n), D(n), E(6|7|8), U with optional
/// twist U(m), <k>, T(p,q,r), M(p1..;i1..;k), combined with orthogonal sum
/// '+' (or '\perp') and powers '^'.
struct LatticeExpr;
using LatticeExprPtr = std::shared_ptr<const LatticeExpr>;

struct LatticeExpr {
    enum class Kind { A, D, E, U, Gen, T, M, Sum, Pow };
    Kind kind;
    // atom parameters
    long long n = 0;                  // A/D/E index, Gen value, U twist
    std::array<long long, 3> tpr{};   // T parameters
    std::vector<long long> m_p;       // M leg lengths
    std::vector<long long> m_i;       // M attachment indices
    long long m_k = 0;                // M central self-intersection
    // structure
    std::vector<LatticeExprPtr> children;
    long long power = 1;

    static LatticeExprPtr atom_a(long long v) { return make(Kind::A, v); }
    static LatticeExprPtr atom_d(long long v) { return make(Kind::D, v); }
    static LatticeExprPtr atom_e(long long v) { return make(Kind::E, v); }
    static LatticeExprPtr atom_u(long long twist = 1) { return make(Kind::U, twist); }
    static LatticeExprPtr atom_gen(long long k) { return make(Kind::Gen, k); }
    static LatticeExprPtr atom_t(long long p, long long q, long long r) {
        auto e = std::make_shared<LatticeExpr>();
        e->kind = Kind::T;
        e->tpr = {p, q, r};
        e->validate();
        return e;
    }
    static LatticeExprPtr atom_m(std::vector<long long> p, std::vector<long long> i,
                                 long long k) {
        auto e = std::make_shared<LatticeExpr>();
        e->kind = Kind::M;
        e->m_p = std::move(p);
        e->m_i = std::move(i);
        e->m_k = k;
        e->validate();
        return e;
    }
    static LatticeExprPtr sum(std::vector<LatticeExprPtr> parts) {
        auto e = std::make_shared<LatticeExpr>();
        e->kind = Kind::Sum;
        e->children = std::move(parts);
        return e;
    }
    static LatticeExprPtr pow(LatticeExprPtr base, long long m) {
        if (m < 1) throw ValidationError("power exponent must be >= 1");
        auto e = std::make_shared<LatticeExpr>();
        e->kind = Kind::Pow;
        e->children = {std::move(base)};
        e->power = m;
        return e;
    }

    long long rank() const {
        switch (kind) {
            case Kind::A:
            case Kind::D:
            case Kind::E: return n;
            case Kind::U: return 2;
            case Kind::Gen: return 1;
            case Kind::T: return tpr[0] + tpr[1] + tpr[2] - 2;
            case Kind::M: {
                long long r = 1;
                for (long long p : m_p) r += p;
                return r;
            }
            case Kind::Sum: {
                long long r = 0;
                for (const auto& c : children) r += c->rank();
                return r;
            }
            case Kind::Pow: return power * children[0]->rank();
        }
        return 0;
    }

    void validate() const {
        switch (kind) {
            case Kind::A:
                if (n < 1) throw ValidationError("A(n) requires n >= 1");
                break;
            case Kind::D:
                if (n < 4) throw ValidationError("D(n) requires n >= 4");
                break;
            case Kind::E:
                if (n < 6 || n > 8) throw ValidationError("E(n) requires n in {6,7,8}");
                break;
            case Kind::U:
                if (n < 1) throw ValidationError("U twist must be a positive integer");
                break;
            case Kind::Gen:
                if (n == 0 || n % 2 != 0)
                    throw ValidationError("<k> requires a nonzero even k");
                break;
            case Kind::T:
                for (long long v : tpr)
                    if (v < 2) throw ValidationError("T(p,q,r) requires p,q,r >= 2");
                break;
            case Kind::M: {
                if (m_p.empty() || m_p.size() != m_i.size())
                    throw ValidationError("M requires matching nonempty leg lists");
                for (std::size_t j = 0; j < m_p.size(); ++j) {
                    if (m_p[j] < 1) throw ValidationError("M leg lengths must be >= 1");
                    if (j > 0 && m_p[j] < m_p[j - 1])
                        throw ValidationError("M leg lengths must be ascending");
                    if (m_i[j] < 1 || m_i[j] > (m_p[j] + 1) / 2)
                        throw ValidationError("M attachment index out of range");
                }
                if (m_k % 2 != 0 || m_k < -4)
                    throw ValidationError("M central value must be even and >= -4");
                break;
            }
            default: break;
        }
    }

private:
    static LatticeExprPtr make(Kind k, long long v) {
        auto e = std::make_shared<LatticeExpr>();
        e->kind = k;
        e->n = v;
        e->validate();
        return e;
    }
};

/// Canonical text form: atoms joined by '+', powers as '^', lists in M
/// separated by ';'.
inline std::string print_expr(const LatticeExprPtr& e) {
    switch (e->kind) {
        case LatticeExpr::Kind::A: return "A" + std::to_string(e->n);
        case LatticeExpr::Kind::D: return "D" + std::to_string(e->n);
        case LatticeExpr::Kind::E: return "E" + std::to_string(e->n);
        case LatticeExpr::Kind::U:
            return e->n == 1 ? "U" : "U(" + std::to_string(e->n) + ")";
        case LatticeExpr::Kind::Gen: return "<" + std::to_string(e->n) + ">";
        case LatticeExpr::Kind::T:
            return "T(" + std::to_string(e->tpr[0]) + "," + std::to_string(e->tpr[1]) +
                   "," + std::to_string(e->tpr[2]) + ")";
        case LatticeExpr::Kind::M: {
            std::string s = "M(";
            for (std::size_t j = 0; j < e->m_p.size(); ++j)
                s += (j ? "," : "") + std::to_string(e->m_p[j]);
            s += ";";
            for (std::size_t j = 0; j < e->m_i.size(); ++j)
                s += (j ? "," : "") + std::to_string(e->m_i[j]);
            s += ";" + std::to_string(e->m_k) + ")";
            return s;
        }
        case LatticeExpr::Kind::Sum: {
            std::string s;
            for (std::size_t j = 0; j < e->children.size(); ++j)
                s += (j ? "+" : "") + print_expr(e->children[j]);
            return s;
        }
        case LatticeExpr::Kind::Pow: {
            const auto& base = e->children[0];
            bool wrap = base->kind == LatticeExpr::Kind::Sum;
            std::string b = print_expr(base);
            return (wrap ? "(" + b + ")" : b) + "^" + std::to_string(e->power);
        }
    }
    return "";
}

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string text) : text_(std::move(text)) {}

    LatticeExprPtr parse() {
        LatticeExprPtr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("trailing input", pos_);
        return e;
    }

private:
    std::string text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) { ++pos_; return true; }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    bool eat_perp() {
        skip_ws();
        if (text_.compare(pos_, 5, "\\perp") == 0) { pos_ += 5; return true; }
        return eat('+');
    }
    long long parse_int() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
        std::size_t digits = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ == digits) throw ParseError("expected integer", start);
        return std::stoll(text_.substr(start, pos_ - start));
    }
    std::vector<long long> parse_int_list() {
        bool wrapped = eat('(');
        std::vector<long long> out{parse_int()};
        while (eat(',')) out.push_back(parse_int());
        if (wrapped) expect(')');
        return out;
    }

    LatticeExprPtr parse_sum() {
        std::vector<LatticeExprPtr> parts{parse_term()};
        while (true) {
            std::size_t save = pos_;
            if (!eat_perp()) break;
            skip_ws();
            if (pos_ == text_.size()) { pos_ = save; break; }
            parts.push_back(parse_term());
        }
        if (parts.size() == 1) return parts[0];
        return LatticeExpr::sum(std::move(parts));
    }

    LatticeExprPtr parse_term() {
        LatticeExprPtr a = parse_atom();
        if (eat('^')) return LatticeExpr::pow(a, parse_int());
        return a;
    }

    LatticeExprPtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        std::size_t at = pos_;
        char c = text_[pos_];
        try {
            if (c == '(') {
                ++pos_;
                LatticeExprPtr e = parse_sum();
                expect(')');
                return e;
            }
            if (c == '<') {
                ++pos_;
                long long k = parse_int();
                expect('>');
                return LatticeExpr::atom_gen(k);
            }
            if (c == 'A') { ++pos_; return LatticeExpr::atom_a(parse_int()); }
            if (c == 'D') { ++pos_; return LatticeExpr::atom_d(parse_int()); }
            if (c == 'E') { ++pos_; return LatticeExpr::atom_e(parse_int()); }
            if (c == 'U') {
                ++pos_;
                std::size_t save = pos_;
                if (eat('(')) {
                    long long m = parse_int();
                    if (!eat(')')) { pos_ = save; return LatticeExpr::atom_u(); }
                    return LatticeExpr::atom_u(m);
                }
                return LatticeExpr::atom_u();
            }
            if (c == 'T') {
                ++pos_;
                expect('(');
                long long p = parse_int();
                expect(',');
                long long q = parse_int();
                expect(',');
                long long r = parse_int();
                expect(')');
                return LatticeExpr::atom_t(p, q, r);
            }
            if (c == 'M') {
                ++pos_;
                expect('(');
                auto p = parse_int_list();
                expect(';');
                auto i = parse_int_list();
                expect(';');
                long long k = parse_int();
                expect(')');
                return LatticeExpr::atom_m(p, i, k);
            }
        } catch (const ValidationError&) {
            throw;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", at);
    }
};

} // namespace detail

inline LatticeExprPtr parse_lattice_expr(const std::string& text) {
    return detail::ExprParser(text).parse();
}

} // namespace k3pic
