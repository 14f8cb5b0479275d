#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddh/field.hpp"

namespace ddh {

struct ConstantPolynomial : std::logic_error {
    ConstantPolynomial() : std::logic_error("polynomial lies in the coefficient ring") {}
};
struct MissingIndeterminate : std::runtime_error {
    explicit MissingIndeterminate(const std::string& what) : std::runtime_error(what) {}
};

// theta = delta_m^{e_m} ... delta_1^{e_1}; commutative, composition adds exponents.
struct DerivOp {
    std::vector<int> e;  // length m

    static DerivOp identity(int m) { return DerivOp{std::vector<int>(m, 0)}; }
    static DerivOp single(int j, int m) {
        DerivOp t = identity(std::max(j, m));
        t.e[j - 1] = 1;
        return t;
    }
    int order() const {
        int s = 0;
        for (int x : e) s += x;
        return s;
    }
    bool is_identity() const { return order() == 0; }
    // exponent vectors of different lengths are tolerated throughout;
    // missing entries count as zero
    DerivOp compose(const DerivOp& o) const {
        DerivOp r(*this);
        if (o.e.size() > r.e.size()) r.e.resize(o.e.size(), 0);
        for (size_t i = 0; i < o.e.size(); ++i) r.e[i] += o.e[i];
        return r;
    }
    bool divides(const DerivOp& o) const {
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > (i < o.e.size() ? o.e[i] : 0)) return false;
        return true;
    }
    DerivOp quotient_into(const DerivOp& o) const {  // o / *this
        DerivOp r = o;
        if (e.size() > r.e.size()) r.e.resize(e.size(), 0);
        for (size_t i = 0; i < e.size(); ++i) r.e[i] -= e[i];
        return r;
    }
    static DerivOp lcm(const DerivOp& a, const DerivOp& b) {
        DerivOp r = a;
        if (b.e.size() > r.e.size()) r.e.resize(b.e.size(), 0);
        for (size_t i = 0; i < b.e.size(); ++i) r.e[i] = std::max(r.e[i], b.e[i]);
        return r;
    }
    // equality matches the ordering: missing entries count as zero
    bool operator==(const DerivOp& o) const {
        for (size_t i = 0; i < std::max(e.size(), o.e.size()); ++i) {
            int a = i < e.size() ? e[i] : 0;
            int b = i < o.e.size() ? o.e[i] : 0;
            if (a != b) return false;
        }
        return true;
    }
    std::string str() const {
        std::ostringstream os;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            os << "d" << (i + 1);
            if (e[i] > 1) os << "^" << e[i];
            os << " ";
        }
        return os.str();
    }
};

// theta x_i
struct AlgIndet {
    int var = 1;  // 1-based
    DerivOp theta;

    bool operator==(const AlgIndet&) const = default;
};

// The canonical ranking: compare (sum e, i, e_m, ..., e_1) lexicographically.
inline std::strong_ordering rank_compare(const AlgIndet& u, const AlgIndet& v) {
    if (auto c = u.theta.order() <=> v.theta.order(); c != 0) return c;
    if (auto c = u.var <=> v.var; c != 0) return c;
    // tolerate exponent vectors of different lengths (missing entries are 0)
    for (int i = (int)std::max(u.theta.e.size(), v.theta.e.size()) - 1; i >= 0; --i) {
        int ue = i < (int)u.theta.e.size() ? u.theta.e[i] : 0;
        int ve = i < (int)v.theta.e.size() ? v.theta.e[i] : 0;
        if (auto c = ue <=> ve; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

struct IndetLess {
    bool operator()(const AlgIndet& a, const AlgIndet& b) const {
        return rank_compare(a, b) < 0;
    }
};

// Power product of algebraic indeterminates, factors sorted by decreasing rank.
struct Monomial {
    std::vector<std::pair<AlgIndet, int>> factors;

    bool empty() const { return factors.empty(); }
    int degree_in(const AlgIndet& u) const {
        for (auto& [w, k] : factors)
            if (w == u) return k;
        return 0;
    }
    Monomial times(const AlgIndet& u, int k) const {
        Monomial r;
        bool placed = false;
        for (auto& [w, d] : factors) {
            if (!placed && rank_compare(u, w) > 0) {
                r.factors.push_back({u, k});
                placed = true;
            }
            if (w == u) {
                if (d + k > 0) r.factors.push_back({w, d + k});
                placed = true;
            } else {
                r.factors.push_back({w, d});
            }
        }
        if (!placed) r.factors.push_back({u, k});
        return r;
    }
    Monomial times(const Monomial& o) const {
        Monomial r = *this;
        for (auto& [u, k] : o.factors) r = r.times(u, k);
        return r;
    }
    bool operator==(const Monomial&) const = default;
};

// Ranking-lex order on monomials: highest indeterminate first, then its degree,
// then recurse; the empty monomial is least.
inline std::strong_ordering mono_compare(const Monomial& a, const Monomial& b) {
    size_t n = std::min(a.factors.size(), b.factors.size());
    for (size_t i = 0; i < n; ++i) {
        if (auto c = rank_compare(a.factors[i].first, b.factors[i].first); c != 0) return c;
        if (auto c = a.factors[i].second <=> b.factors[i].second; c != 0) return c;
    }
    return a.factors.size() <=> b.factors.size();
}

struct MonoLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return mono_compare(a, b) < 0; }
};

using VarNamer = std::function<std::string(int)>;

inline std::string default_var_name(int v) { return "x" + std::to_string(v); }

inline std::string indet_str(const AlgIndet& u, const VarNamer& name = default_var_name) {
    return u.theta.str() + name(u.var);
}

// Sparse differential polynomial with coefficients in C.
//
// C must provide: default construction (zero), +, -, unary -, *, ==, is_zero(),
// derive(j), scaled_by_int(k), and str().
template <class C>
class Poly {
public:
    using Terms = std::map<Monomial, C, MonoLess>;

    Poly() = default;
    explicit Poly(const C& c) {
        if (!c.is_zero()) terms_[Monomial{}] = c;
    }
    static Poly indet(const AlgIndet& u, const C& one) {
        Poly p;
        p.terms_[Monomial{}.times(u, 1)] = one;
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool in_ring() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    C ring_value() const {
        if (terms_.empty()) return C();
        if (!in_ring()) throw std::logic_error("Poly: not a ring element");
        return terms_.begin()->second;
    }

    const Terms& terms() const { return terms_; }

    void add_term(const Monomial& mono, const C& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(mono);
        if (it == terms_.end()) {
            terms_[mono] = c;
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Poly operator+(const Poly& o) const {
        Poly r(*this);
        for (auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }
    Poly operator-() const {
        Poly r(*this);
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }
    Poly operator*(const Poly& o) const {
        Poly r;
        for (auto& [ma, ca] : terms_)
            for (auto& [mb, cb] : o.terms_) r.add_term(ma.times(mb), ca * cb);
        return r;
    }
    Poly operator*(const C& c) const {
        Poly r;
        for (auto& [m, cc] : terms_) r.add_term(m, cc * c);
        return r;
    }
    bool operator==(const Poly& o) const { return terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly pow(int k) const {
        Poly r = *this, acc;
        if (k == 0) throw std::invalid_argument("Poly::pow: use explicit constant for k=0");
        for (int i = 1; i < k; ++i) r = r * *this;
        return r;
    }

    std::set<AlgIndet, IndetLess> indeterminates() const {
        std::set<AlgIndet, IndetLess> s;
        for (auto& [m, c] : terms_)
            for (auto& [u, k] : m.factors) s.insert(u);
        return s;
    }

    AlgIndet leader() const {
        if (in_ring()) throw ConstantPolynomial();
        // leading monomial starts with the highest-ranking indeterminate present
        return terms_.rbegin()->first.factors.front().first;
    }
    int degree() const {
        if (in_ring()) throw ConstantPolynomial();
        return terms_.rbegin()->first.factors.front().second;
    }
    std::pair<AlgIndet, int> rank() const { return {leader(), degree()}; }

    // formal partial derivative with respect to an algebraic indeterminate
    Poly partial(const AlgIndet& u) const {
        Poly r;
        for (auto& [m, c] : terms_) {
            int k = m.degree_in(u);
            if (k == 0) continue;
            r.add_term(m.times(u, -1), c.scaled_by_int(k));
        }
        return r;
    }

    Poly separant() const { return partial(leader()); }

    Poly initial() const {
        AlgIndet v = leader();
        int d = degree();
        Poly r;
        for (auto& [m, c] : terms_)
            if (m.degree_in(v) == d) r.add_term(m.times(v, -d), c);
        return r;
    }

    // delta_j f: Leibniz over coefficients and indeterminates
    Poly apply_derivation(int j) const {
        Poly r;
        for (auto& [m, c] : terms_) {
            r.add_term(m, c.derive(j));
            for (size_t i = 0; i < m.factors.size(); ++i) {
                auto& [u, k] = m.factors[i];
                AlgIndet du{u.var, u.theta.compose(DerivOp::single(j, (int)u.theta.e.size()))};
                Monomial nm = m.times(u, -1).times(du, 1);
                r.add_term(nm, c.scaled_by_int(k));
            }
        }
        return r;
    }

    Poly theta_apply(const DerivOp& th) const {
        Poly r = *this;
        for (size_t j = 0; j < th.e.size(); ++j)
            for (int k = 0; k < th.e[j]; ++k) r = r.apply_derivation((int)j + 1);
        return r;
    }

    // Evaluate with an explicit value for every algebraic indeterminate.
    C evaluate(const std::function<C(const AlgIndet&)>& val) const {
        C acc{};
        for (auto& [m, c] : terms_) {
            C term = c;
            for (auto& [u, k] : m.factors)
                for (int i = 0; i < k; ++i) term = term * val(u);
            acc = acc + term;
        }
        return acc;
    }

    // Evaluate at a point: x_i -> a_i, with jets theta(a_i) computed via derive.
    C evaluate_at_point(const std::vector<C>& point) const {
        return evaluate([&](const AlgIndet& u) {
            if (u.var < 1 || u.var > (int)point.size())
                throw MissingIndeterminate("no point coordinate for variable x" +
                                           std::to_string(u.var));
            C v = point[u.var - 1];
            for (size_t j = 0; j < u.theta.e.size(); ++j)
                for (int k = 0; k < u.theta.e[j]; ++k) v = v.derive((int)j + 1);
            return v;
        });
    }

    // Apply a map to every coefficient (e.g. a field endomorphism).
    template <class C2>
    Poly<C2> map_coeffs(const std::function<C2(const C&)>& phi) const {
        Poly<C2> r;
        for (auto& [m, c] : terms_) r.add_term(m, phi(c));
        return r;
    }

    std::string str(const VarNamer& name = default_var_name) const;

private:
    Terms terms_;
};

using PolyQ = Poly<FieldElem>;

// --- rendering -------------------------------------------------------------

namespace detail {

inline std::string mono_str(const Monomial& m, const VarNamer& name) {
    std::ostringstream os;
    bool first = true;
    for (auto& [u, k] : m.factors) {
        if (!first) os << "*";
        first = false;
        bool has_deriv = !u.theta.is_identity();
        if (k > 1 && has_deriv)
            os << "(" << indet_str(u, name) << ")^" << k;
        else if (k > 1)
            os << indet_str(u, name) << "^" << k;
        else
            os << indet_str(u, name);
    }
    return os.str();
}

// sign-split a FieldElem: returns (negative?, magnitude)
inline std::pair<bool, FieldElem> coeff_sign(const FieldElem& c) {
    bool neg = c.num().leading_coeff() < 0;
    return {neg, neg ? -c : c};
}

inline std::string coeff_str_for_term(const FieldElem& c) {
    // parenthesize unless the magnitude is a plain rational or single monomial
    if (c.den() == QPoly(mpq_class(1)) && c.num().terms().size() <= 1) return c.str();
    if (c.num().terms().size() > 1 && c.den() == QPoly(mpq_class(1)))
        return "(" + c.str() + ")";
    return c.str();  // fraction; FieldElem::str already parenthesizes as needed
}

}  // namespace detail

template <>
inline std::string Poly<FieldElem>::str(const VarNamer& name) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        auto [neg, mag] = detail::coeff_sign(it->second);
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        if (it->first.empty()) {
            os << detail::coeff_str_for_term(mag);
        } else if (mag.is_one()) {
            os << detail::mono_str(it->first, name);
        } else {
            os << detail::coeff_str_for_term(mag) << "*" << detail::mono_str(it->first, name);
        }
    }
    return os.str();
}

template <class C>
std::string Poly<C>::str(const VarNamer& name) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!first) os << " + ";
        first = false;
        if (it->first.empty())
            os << "(" << it->second.str() << ")";
        else
            os << "(" << it->second.str() << ")*" << detail::mono_str(it->first, name);
    }
    return os.str();
}

}  // namespace ddh
