#pragma once

#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddh/diffpoly.hpp"

namespace ddh {

struct AlgebraMismatch : std::logic_error {
    AlgebraMismatch() : std::logic_error("operands live over different finite algebras") {}
};
struct NoDecomposition : std::logic_error {
    NoDecomposition() : std::logic_error("no local decomposition attached to the algebra") {}
};
struct IdempotentsRequired : std::runtime_error {
    IdempotentsRequired()
        : std::runtime_error(
              "structure constants alone do not determine a decomposition; supply idempotents") {
    }
};
struct InvalidIdempotents : std::runtime_error {
    explicit InvalidIdempotents(const std::string& what) : std::runtime_error(what) {}
};
struct NotAUnit : std::runtime_error {
    explicit NotAUnit(int i)
        : std::runtime_error("residue " + std::to_string(i) + " vanishes"), factor(i) {}
    int factor;
};

using Coords = std::vector<mpq_class>;

// Orthogonal idempotent system with per-factor residue maps and the nilpotent
// structure of each local factor. Factor 0 carries the distinguished pi.
struct LocalDecomposition {
    std::vector<Coords> idempotents;          // u_0..u_t, coordinates in B
    std::vector<Coords> pi;                   // pi[i][j] = pi_i(eps_j)
    std::vector<std::vector<Coords>> nilpotents;  // generators of each maximal ideal
    std::vector<int> index;                   // per-factor nilpotency index (1 for a point)

    int factors() const { return (int)idempotents.size(); }
    int global_index() const {
        int n = 1;
        for (int i : index) n = std::max(n, i);
        return n;
    }
};

// Finite commutative Q-algebra B of dimension l+1 given by structure constants,
// with the distinguished projection pi = coordinate 0 (pi(eps_0)=1, else 0).
class FiniteAlgebra {
public:
    using Ptr = std::shared_ptr<const FiniteAlgebra>;

    // Product of local pieces: dimension d per factor, Q[eta]/(eta^d); d = 1 is
    // a plain copy of Q. Factor 0 comes first; its unit is eps_0. The local
    // decomposition is attached automatically.
    static Ptr product(const std::vector<int>& factor_dims);

    // Arbitrary structure constants c[j][k] = coordinates of eps_j * eps_k,
    // optionally with idempotent hints from which a decomposition is computed.
    static Ptr from_structure(std::vector<std::vector<Coords>> c,
                              const std::optional<std::vector<Coords>>& idempotent_hints = {});

    int dim() const { return (int)c_.size(); }
    const Coords& table(int j, int k) const { return c_[j][k]; }
    const Coords& one() const { return one_; }
    Coords multiply(const Coords& a, const Coords& b) const;
    mpq_class pi(const Coords& a) const { return a[0]; }

    // Product form (dimensions of the local factors) when known.
    const std::optional<std::vector<int>>& product_form() const { return form_; }

    const LocalDecomposition& decomposition() const {
        if (!dec_) throw NoDecomposition();
        return *dec_;
    }
    bool has_decomposition() const { return dec_.has_value(); }

    // Returns the attached decomposition, or validates the supplied hints.
    LocalDecomposition decompose(
        const std::optional<std::vector<Coords>>& idempotent_hints = {}) const;

    bool same_as(const FiniteAlgebra& o) const { return c_ == o.c_; }

private:
    std::vector<std::vector<Coords>> c_;
    Coords one_;
    std::optional<std::vector<int>> form_;
    std::optional<LocalDecomposition> dec_;

    void validate() const;
    LocalDecomposition decompose_from_hints(const std::vector<Coords>& hints) const;
};

// Ring operations a DElement coefficient type must provide.
template <class R>
struct RingOps;

template <>
struct RingOps<FieldElem> {
    static FieldElem from_rat(const mpq_class& c) { return FieldElem(c); }
    static FieldElem derive(const FieldElem& a, int j) { return a.derive(j); }
    static FieldElem inverse(const FieldElem& a) { return a.inverse(); }
};

template <>
struct RingOps<PolyQ> {
    static PolyQ from_rat(const mpq_class& c) { return PolyQ(FieldElem(c)); }
    static PolyQ derive(const PolyQ& a, int j) { return a.apply_derivation(j); }
};

// Element of D(R) = B (x) R: coordinates over the basis eps_0..eps_l. The
// basis elements are Delta-constants, so derivations act coordinatewise.
template <class R>
class DElement {
public:
    explicit DElement(FiniteAlgebra::Ptr alg)
        : alg_(std::move(alg)), coeffs_(alg_->dim()) {}
    DElement(FiniteAlgebra::Ptr alg, std::vector<R> coeffs)
        : alg_(std::move(alg)), coeffs_(std::move(coeffs)) {
        if ((int)coeffs_.size() != alg_->dim())
            throw std::invalid_argument("DElement: wrong coordinate count");
    }

    static DElement one(FiniteAlgebra::Ptr alg) { return from_rat_coords(alg, alg->one()); }
    static DElement basis(FiniteAlgebra::Ptr alg, int j) {
        DElement r(alg);
        r.coeffs_[j] = RingOps<R>::from_rat(1);
        return r;
    }
    static DElement scalar(FiniteAlgebra::Ptr alg, const R& a) {
        DElement r(alg);
        for (int j = 0; j < alg->dim(); ++j)
            r.coeffs_[j] = a * RingOps<R>::from_rat(alg->one()[j]);
        return r;
    }
    static DElement from_rat_coords(FiniteAlgebra::Ptr alg, const Coords& c) {
        DElement r(alg);
        for (size_t j = 0; j < c.size(); ++j) r.coeffs_[j] = RingOps<R>::from_rat(c[j]);
        return r;
    }

    const FiniteAlgebra::Ptr& algebra() const { return alg_; }
    const std::vector<R>& coeffs() const { return coeffs_; }
    const R& operator[](int j) const { return coeffs_[j]; }
    R& operator[](int j) { return coeffs_[j]; }

    bool is_zero() const {
        for (auto& a : coeffs_)
            if (!a.is_zero()) return false;
        return true;
    }
    bool operator==(const DElement& o) const {
        check_same(o);
        return coeffs_ == o.coeffs_;
    }
    bool operator!=(const DElement& o) const { return !(*this == o); }

    DElement operator+(const DElement& o) const {
        check_same(o);
        DElement r(*this);
        for (size_t j = 0; j < coeffs_.size(); ++j) r.coeffs_[j] = r.coeffs_[j] + o.coeffs_[j];
        return r;
    }
    DElement operator-() const {
        DElement r(*this);
        for (auto& a : r.coeffs_) a = -a;
        return r;
    }
    DElement operator-(const DElement& o) const { return *this + (-o); }

    DElement operator*(const DElement& o) const {
        check_same(o);
        DElement r(alg_);
        int n = alg_->dim();
        for (int j = 0; j < n; ++j) {
            if (coeffs_[j].is_zero()) continue;
            for (int k = 0; k < n; ++k) {
                if (o.coeffs_[k].is_zero()) continue;
                R prod = coeffs_[j] * o.coeffs_[k];
                const Coords& t = alg_->table(j, k);
                for (int s = 0; s < n; ++s) {
                    if (t[s] == 0) continue;
                    r.coeffs_[s] = r.coeffs_[s] + prod * RingOps<R>::from_rat(t[s]);
                }
            }
        }
        return r;
    }
    DElement operator*(const R& a) const {
        DElement r(*this);
        for (auto& x : r.coeffs_) x = x * a;
        return r;
    }

    DElement apply_delta(int j) const {
        DElement r(*this);
        for (auto& a : r.coeffs_) a = RingOps<R>::derive(a, j);
        return r;
    }

    // i-th residue pi_i^R: sum_j a_j pi_i(eps_j)
    R residue(const LocalDecomposition& dec, int i) const {
        if (i < 0 || i >= dec.factors())
            throw std::out_of_range("DElement::residue: no local factor " + std::to_string(i));
        R r{};
        for (size_t j = 0; j < coeffs_.size(); ++j) {
            if (dec.pi[i][j] == 0 || coeffs_[j].is_zero()) continue;
            r = r + coeffs_[j] * RingOps<R>::from_rat(dec.pi[i][j]);
        }
        return r;
    }
    R residue(int i) const { return residue(alg_->decomposition(), i); }

    // Exact inverse, factor by factor: on B_i, a = r*u_i + n with n nilpotent,
    // and a^-1 = sum_k (-1)^k n^k r^-(k+1) u_i (finite by the nilpotency index).
    DElement invert() const {
        const LocalDecomposition& dec = alg_->decomposition();
        DElement inv(alg_);
        for (int i = 0; i < dec.factors(); ++i) {
            R r = residue(dec, i);
            if (r.is_zero()) throw NotAUnit(i);
            R rinv = RingOps<R>::inverse(r);
            DElement ui = from_rat_coords(alg_, dec.idempotents[i]);
            DElement n = *this * ui - ui * r;
            DElement term = ui * rinv;
            DElement acc = term;
            for (int k = 1; k < dec.index[i]; ++k) {
                term = -(term * n * rinv);
                acc = acc + term;
            }
            inv = inv + acc;
        }
        if (*this * inv != one(alg_)) throw std::logic_error("DElement::invert: check failed");
        return inv;
    }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (size_t j = 0; j < coeffs_.size(); ++j) {
            if (coeffs_[j].is_zero()) continue;
            if (!first) os << " + ";
            first = false;
            os << "(" << coeffs_[j].str() << ")*e" << j;
        }
        return first ? "0" : os.str();
    }

private:
    FiniteAlgebra::Ptr alg_;
    std::vector<R> coeffs_;

    void check_same(const DElement& o) const {
        if (alg_ != o.alg_ && !alg_->same_as(*o.alg_)) throw AlgebraMismatch();
    }
};

using DFieldElem = DElement<FieldElem>;
using DPolyQ = DElement<PolyQ>;

}  // namespace ddh
