#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddh/qpoly.hpp"

namespace ddh {

struct PoleAtPoint : std::runtime_error {
    PoleAtPoint() : std::runtime_error("denominator vanishes at the given point") {}
};

// Q or Q(t1..ts) with m commuting derivations; delta_j = d/dt_j for j <= min(m,s),
// zero otherwise.
struct FieldConfig {
    int m = 0;  // number of derivations
    int s = 0;  // number of function variables; s == 0 means plain rationals

    bool operator==(const FieldConfig&) const = default;
};

// Reduced fraction num/den of polynomials; den monic under the fixed (lex) order.
// Canonical: equality is representation equality.
class FieldElem {
public:
    FieldElem() : num_(), den_(mpq_class(1)) {}
    FieldElem(const mpq_class& c) : num_(c), den_(mpq_class(1)) {}
    FieldElem(long c) : num_(mpq_class(c)), den_(mpq_class(1)) {}
    FieldElem(const QPoly& num, const QPoly& den);
    explicit FieldElem(const QPoly& p) : num_(p), den_(mpq_class(1)) {}

    static FieldElem t(int j, int s) { return FieldElem(QPoly::var(j, s)); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_ == QPoly(mpq_class(1)) && den_ == QPoly(mpq_class(1)); }
    bool is_rational() const { return num_.is_constant() && den_.is_constant(); }
    mpq_class rational_value() const;

    FieldElem operator+(const FieldElem& o) const;
    FieldElem operator-(const FieldElem& o) const;
    FieldElem operator-() const;
    FieldElem operator*(const FieldElem& o) const;
    FieldElem operator/(const FieldElem& o) const;
    FieldElem inverse() const;
    bool operator==(const FieldElem& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const FieldElem& o) const { return !(*this == o); }
    bool operator<(const FieldElem& o) const;  // arbitrary total order for containers

    // delta_j; j beyond the number of polynomial variables acts as zero
    FieldElem derive(int j) const;

    FieldElem scaled_by_int(long k) const { return *this * FieldElem(k); }

    mpq_class eval_at_point(const std::vector<mpq_class>& p) const;

    const QPoly& num() const { return num_; }
    const QPoly& den() const { return den_; }

    std::string str() const;

private:
    QPoly num_, den_;
    void normalize();
};

inline FieldElem operator*(const mpq_class& c, const FieldElem& a) { return FieldElem(c) * a; }

}  // namespace ddh
