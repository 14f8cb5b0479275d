#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

namespace ddh {

// Sparse multivariate polynomial over Q in variables t1..ts.
// Keys are exponent vectors; all stored coefficients are nonzero.
class QPoly {
public:
    using Exps = std::vector<int>;

    QPoly() = default;
    explicit QPoly(const mpq_class& c);
    static QPoly var(int j, int s);  // t_j, 1-based, in s variables
    static QPoly monomial(const mpq_class& c, const Exps& e);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    const mpq_class& constant_term() const;
    int nvars() const;
    int degree(int j) const;  // degree in t_j, 1-based; -1 convention not used (0 for absent)
    int total_degree() const;

    QPoly operator+(const QPoly& o) const;
    QPoly operator-(const QPoly& o) const;
    QPoly operator-() const;
    QPoly operator*(const QPoly& o) const;
    QPoly operator*(const mpq_class& c) const;
    bool operator==(const QPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const QPoly& o) const { return !(*this == o); }
    bool operator<(const QPoly& o) const { return terms_ < o.terms_; }

    QPoly derive(int j) const;  // formal d/dt_j, 1-based
    mpq_class eval(const std::vector<mpq_class>& point) const;

    // Leading term under graded-lex on exponent vectors.
    const mpq_class& leading_coeff() const;
    const Exps& leading_exps() const;

    // Divides every coefficient; exact field division.
    QPoly scaled(const mpq_class& c) const;

    // Exact division check: *this = q * d for some q; returns true and sets q.
    bool try_divide(const QPoly& d, QPoly& q) const;

    static QPoly gcd(const QPoly& a, const QPoly& b);

    std::string str() const;  // canonical rendering, e.g. "t1^2 - 2*t1*t2 + 1"

    const std::map<Exps, mpq_class>& terms() const { return terms_; }
    void set_term(const Exps& e, const mpq_class& c);

private:
    // graded-lex: compare total degree then exponent vector lexicographically
    std::map<Exps, mpq_class> terms_;
};

}  // namespace ddh
