#include "ddh/parser.hpp"

#include "ddh/prolongation.hpp"

namespace ddh {

namespace {

class Parser {
public:
    Parser(const std::string& text, const ParseContext& ctx) : s_(text), ctx_(ctx) {}

    PolyR parse() {
        PolyR v = expr();
        skip_ws();
        if (pos_ < s_.size()) fail("end of input");
        return v;
    }

private:
    const std::string& s_;
    const ParseContext& ctx_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected) const {
        int line = 1, col = 1;
        for (size_t i = 0; i < pos_ && i < s_.size(); ++i) {
            if (s_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw SyntaxError(line, col, expected);
    }

    [[noreturn]] void unknown(size_t at, const std::string& symbol) const {
        int line = 1, col = 1;
        for (size_t i = 0; i < at && i < s_.size(); ++i) {
            if (s_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw UnknownSymbol(line, col, symbol);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
    }
    char peek() { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool digit_at(size_t p) const { return p < s_.size() && std::isdigit((unsigned char)s_[p]); }

    long nat(const std::string& what) {
        if (!digit_at(pos_)) fail(what);
        long v = 0;
        while (digit_at(pos_)) v = v * 10 + (s_[pos_++] - '0');
        return v;
    }

    PolyR expr() {
        skip_ws();
        bool neg = eat('-');
        PolyR v = term();
        if (neg) v = -v;
        for (;;) {
            skip_ws();
            if (eat('+')) {
                v = v + term();
            } else if (eat('-')) {
                v = v - term();
            } else {
                return v;
            }
        }
    }

    PolyR term() {
        PolyR v = factor();
        for (;;) {
            skip_ws();
            if (eat('*')) {
                v = v * factor();
            } else if (eat('/')) {
                PolyR d = factor();
                if (!d.in_ring()) fail("a coefficient-ring divisor");
                LocalElem u = d.ring_value();
                if (!u.is_scalar() || u.scalar().is_zero()) fail("a unit divisor");
                v = v * LocalElem(u.scalar().inverse());
            } else {
                return v;
            }
        }
    }

    PolyR factor() {
        PolyR v = atom();
        skip_ws();
        if (eat('^')) {
            skip_ws();
            long k = nat("an exponent");
            if (k < 1) fail("a positive exponent");
            v = v.pow((int)k);
        }
        return v;
    }

    PolyR atom() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            ++pos_;
            PolyR v = expr();
            skip_ws();
            if (!eat(')')) fail("')'");
            return v;
        }
        if (std::isdigit((unsigned char)c)) return rational();
        if (c == 't' && digit_at(pos_ + 1)) return genvar();
        if (c == 'e' && digit_at(pos_ + 1)) return basis();
        if ((c == 'd' && digit_at(pos_ + 1)) || (c == 'x' && digit_at(pos_ + 1)))
            return indet();
        if (std::isalpha((unsigned char)c)) {
            size_t at = pos_;
            std::string sym;
            while (pos_ < s_.size() &&
                   (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_'))
                sym += s_[pos_++];
            unknown(at, sym);
        }
        fail("a rational, a variable, or '('");
    }

    PolyR rational() {
        long num = nat("a number");
        mpq_class v(num);
        // greedy: int '/' nat is a rational literal; '/' before a non-digit
        // stays the division operator
        if (peek() == '/' && digit_at(pos_ + 1)) {
            ++pos_;
            long den = nat("a denominator");
            if (den == 0) fail("a nonzero denominator");
            v = mpq_class(num, den);
            v.canonicalize();
        }
        return PolyR(LocalElem(FieldElem(v)));
    }

    PolyR genvar() {
        size_t at = pos_;
        ++pos_;  // 't'
        long j = nat("a generator index");
        if (j < 1 || j > ctx_.fc.s)
            unknown(at, "t" + std::to_string(j) + " (the field has " +
                            std::to_string(ctx_.fc.s) + " generators)");
        return PolyR(LocalElem(FieldElem::t((int)j, ctx_.fc.s)));
    }

    PolyR basis() {
        size_t at = pos_;
        ++pos_;  // 'e'
        long j = nat("a basis index");
        if (!ctx_.algebra) unknown(at, "e" + std::to_string(j) + " (no algebra in scope)");
        if (j < 0 || j >= ctx_.algebra->dim())
            unknown(at, "e" + std::to_string(j) + " (algebra dimension is " +
                            std::to_string(ctx_.algebra->dim()) + ")");
        std::vector<FieldElem> coords(ctx_.algebra->dim());
        coords[j] = FieldElem(1);
        return PolyR(LocalElem(ctx_.algebra, std::move(coords)));
    }

    PolyR indet() {
        DerivOp theta = DerivOp::identity(ctx_.fc.m);
        while (peek() == 'd' && digit_at(pos_ + 1)) {
            size_t at = pos_;
            ++pos_;
            long j = nat("a derivation index");
            if (j < 1 || j > ctx_.fc.m)
                unknown(at, "d" + std::to_string(j) + " (the field has " +
                                std::to_string(ctx_.fc.m) + " derivations)");
            long k = 1;
            skip_ws();
            if (eat('^')) {
                skip_ws();
                k = nat("an exponent");
            }
            theta.e[j - 1] += (int)k;
            skip_ws();
        }
        if (peek() != 'x' || !digit_at(pos_ + 1)) fail("an indeterminate");
        size_t at = pos_;
        ++pos_;
        long i = nat("a variable index");
        int var = (int)i;
        if (peek() == '_' && digit_at(pos_ + 1)) {
            ++pos_;
            long j = nat("a coordinate index");
            if (!ctx_.ell)
                unknown(at, "x" + std::to_string(i) + "_" + std::to_string(j) +
                                " (prolonged variables not in scope)");
            if (j > *ctx_.ell)
                unknown(at, "x" + std::to_string(i) + "_" + std::to_string(j) +
                                " (coordinate exceeds " + std::to_string(*ctx_.ell) + ")");
            var = prolonged_var((int)i, (int)j, *ctx_.ell);
        }
        if (var < 1) unknown(at, "x" + std::to_string(i));
        return PolyR::indet(AlgIndet{var, theta}, LocalElem(FieldElem(1)));
    }
};

}  // namespace

PolyR parse_poly_r(const std::string& text, const ParseContext& ctx) {
    return Parser(text, ctx).parse();
}

PolyQ parse_poly(const std::string& text, const FieldConfig& fc, std::optional<int> ell) {
    PolyR p = parse_poly_r(text, ParseContext{fc, ell, nullptr});
    return p.map_coeffs<FieldElem>([](const LocalElem& c) { return c.scalar(); });
}

std::string render_poly(const PolyQ& f, std::optional<int> ell) {
    return ell ? f.str(prolonged_namer(*ell)) : f.str();
}

}  // namespace ddh
