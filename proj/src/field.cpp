#include "ddh/field.hpp"

#include <sstream>

namespace ddh {

FieldElem::FieldElem(const QPoly& num, const QPoly& den) : num_(num), den_(den) {
    if (den_.is_zero()) throw std::invalid_argument("FieldElem: zero denominator");
    normalize();
}

void FieldElem::normalize() {
    if (num_.is_zero()) {
        den_ = QPoly(mpq_class(1));
        return;
    }
    if (den_.is_constant()) {
        mpq_class c = den_.constant_term();
        num_ = num_.scaled(c);
        den_ = QPoly(mpq_class(1));
        return;
    }
    QPoly g = QPoly::gcd(num_, den_);
    if (!g.is_constant()) {
        QPoly qn, qd;
        if (!num_.try_divide(g, qn) || !den_.try_divide(g, qd))
            throw std::logic_error("FieldElem: gcd does not divide");
        num_ = qn;
        den_ = qd;
    }
    mpq_class lc = den_.leading_coeff();
    den_ = den_.scaled(lc);
    num_ = num_.scaled(lc);
}

mpq_class FieldElem::rational_value() const {
    if (!is_rational()) throw std::logic_error("FieldElem: not a rational constant");
    return num_.constant_term() / den_.constant_term();
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
    return FieldElem(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

FieldElem FieldElem::operator-(const FieldElem& o) const {
    return FieldElem(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

FieldElem FieldElem::operator-() const {
    FieldElem r(*this);
    r.num_ = -r.num_;
    return r;
}

FieldElem FieldElem::operator*(const FieldElem& o) const {
    return FieldElem(num_ * o.num_, den_ * o.den_);
}

FieldElem FieldElem::operator/(const FieldElem& o) const {
    if (o.is_zero()) throw std::invalid_argument("FieldElem: division by zero");
    return FieldElem(num_ * o.den_, den_ * o.num_);
}

FieldElem FieldElem::inverse() const {
    if (is_zero()) throw std::invalid_argument("FieldElem: inverse of zero");
    return FieldElem(den_, num_);
}

bool FieldElem::operator<(const FieldElem& o) const {
    if (num_ != o.num_) return num_ < o.num_;
    return den_ < o.den_;
}

FieldElem FieldElem::derive(int j) const {
    if (j < 1) throw std::out_of_range("FieldElem::derive: index out of range");
    // quotient rule; delta_j kills everything when t_j does not occur
    QPoly dn = num_.derive(j), dd = den_.derive(j);
    if (dn.is_zero() && dd.is_zero()) return FieldElem();
    return FieldElem(dn * den_ - num_ * dd, den_ * den_);
}

mpq_class FieldElem::eval_at_point(const std::vector<mpq_class>& p) const {
    mpq_class d = den_.eval(p);
    if (d == 0) throw PoleAtPoint();
    return num_.eval(p) / d;
}

std::string FieldElem::str() const {
    if (den_ == QPoly(mpq_class(1))) return num_.str();
    std::ostringstream os;
    bool wrap_num = num_.terms().size() > 1;
    // parenthesize the denominator unless it is a single power of one
    // variable with unit coefficient; '/' binds a single factor when parsed
    auto needs_parens = [](const QPoly& p) {
        if (p.terms().size() > 1) return true;
        auto& [e, c] = *p.terms().begin();
        if (c != 1) return true;
        int nonzero = 0;
        for (int k : e)
            if (k != 0) ++nonzero;
        return nonzero > 1;
    };
    bool wrap_den = needs_parens(den_);
    os << (wrap_num ? "(" : "") << num_.str() << (wrap_num ? ")" : "");
    os << "/";
    os << (wrap_den ? "(" : "") << den_.str() << (wrap_den ? ")" : "");
    return os.str();
}

}  // namespace ddh
