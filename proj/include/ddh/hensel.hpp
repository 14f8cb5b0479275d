#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddh/finitealg.hpp"
#include "ddh/ratlinalg.hpp"
#include "ddh/reduction.hpp"

namespace ddh {

struct PreconditionFailed : std::runtime_error {
    explicit PreconditionFailed(const std::string& clause)
        : std::runtime_error("precondition failed: " + clause) {}
};
struct NotInFiltration : std::runtime_error {
    explicit NotInFiltration(int level)
        : std::runtime_error("value escapes the ideal power m^" + std::to_string(level)),
          level(level) {}
    int level;
};
struct NoSolutionFoundAtBound : std::runtime_error {
    explicit NoSolutionFoundAtBound(int bound)
        : std::runtime_error("no solution within bound " + std::to_string(bound)),
          bound(bound) {}
    int bound;
};
struct ProvenInconsistent : std::runtime_error {
    ProvenInconsistent() : std::runtime_error("linear system is inconsistent") {}
};
struct SingularPoint : std::runtime_error {
    SingularPoint() : std::runtime_error("a coefficient has a pole at the expansion point") {}
};
struct SolverFailed : std::runtime_error {
    SolverFailed(int level, const std::string& detail)
        : std::runtime_error("solver failed at level " + std::to_string(level) + ": " + detail),
          level(level) {}
    int level;
};

// Element of R = B_loc (x) L, or a plain base-field scalar when no algebra is
// attached. Scalars promote on mixed arithmetic, which makes this a valid
// coefficient type for Poly<>.
class LocalElem {
public:
    LocalElem() = default;
    /*implicit*/ LocalElem(const FieldElem& a) : scalar_(a) {}
    LocalElem(FiniteAlgebra::Ptr alg, std::vector<FieldElem> coords)
        : alg_(std::move(alg)), coords_(std::move(coords)) {
        if ((int)coords_.size() != alg_->dim())
            throw std::invalid_argument("LocalElem: wrong coordinate count");
    }

    bool is_scalar() const { return alg_ == nullptr; }
    const FieldElem& scalar() const { return scalar_; }
    const FiniteAlgebra::Ptr& algebra() const { return alg_; }
    const std::vector<FieldElem>& coords() const { return coords_; }

    // coordinates after promotion into the given algebra
    std::vector<FieldElem> coords_in(const FiniteAlgebra& alg) const;

    bool is_zero() const;
    bool operator==(const LocalElem& o) const;
    bool operator!=(const LocalElem& o) const { return !(*this == o); }

    LocalElem operator+(const LocalElem& o) const;
    LocalElem operator-() const;
    LocalElem operator-(const LocalElem& o) const { return *this + (-o); }
    LocalElem operator*(const LocalElem& o) const;

    LocalElem derive(int j) const;  // coordinatewise: the basis is Delta-constant
    LocalElem scaled_by_int(long k) const { return *this * LocalElem(FieldElem(k)); }

    std::string str() const;

private:
    FiniteAlgebra::Ptr alg_;            // null: plain scalar
    FieldElem scalar_;                  // used when alg_ is null
    std::vector<FieldElem> coords_;     // used when alg_ is set
};

using PolyR = Poly<LocalElem>;

// A local differential algebra R = B_loc (x) L: B_loc local with residue field
// Q and Delta-constant nilpotent generators, L the coefficient field. Carries
// the graded monomial bases of m^i/m^(i+1) and their coordinate functionals.
class LocalDiffAlgebra {
public:
    LocalDiffAlgebra(FiniteAlgebra::Ptr alg, FieldConfig fc);

    const FiniteAlgebra::Ptr& algebra() const { return alg_; }
    const FieldConfig& config() const { return fc_; }
    int dim() const { return alg_->dim(); }
    int nilpotency_index() const { return nu_; }

    // monomial basis of m^i/m^(i+1) (rational coordinates; Delta-constants)
    const std::vector<Coords>& graded(int i) const { return graded_.at(i); }
    // matching coordinate functionals lambda_k as rational rows
    const std::vector<Coords>& lambda(int i) const { return lambda_.at(i); }

    FieldElem res(const LocalElem& v) const;
    LocalElem embed(const FieldElem& a) const;
    LocalElem basis_elem(const Coords& c) const;

    FieldElem apply_functional(const Coords& row, const LocalElem& v) const;
    bool in_power(const LocalElem& v, int i) const;

private:
    FiniteAlgebra::Ptr alg_;
    FieldConfig fc_;
    int nu_;
    std::vector<std::vector<Coords>> graded_, lambda_;
};

// A local factor B_i of a decomposed algebra, with the coordinate projection
// from B and the section back into B.
struct FactorView {
    LocalDiffAlgebra local;
    linalg::Mat project;  // factor coords of u_i * eps_j, one column per eps_j
    linalg::Mat inject;   // B coords of the factor basis elements

    LocalElem project_elem(const LocalElem& v, const FiniteAlgebra& parent) const;
    std::vector<FieldElem> inject_coords(const LocalElem& v) const;
};

FactorView factor_view(const FiniteAlgebra::Ptr& alg, int factor, FieldConfig fc);

struct LiftState {
    int level = 1;
    LocalElem b;
    std::vector<Coords> graded;  // eps_k spanning m^level / m^(level+1)
    std::vector<Coords> lambda;  // their coordinate functionals
    // jet-mode corrections satisfy the filtration only up to truncation order,
    // so the exact membership check is skipped there
    bool enforce_filtration = true;
};

// The linearization at b_i of f for graded index k:
//   l_f(y) = lambda_k(f(b_i)) + sum_theta res(dF/d(theta x)(b_i)) * theta(y),
// encoded as a linear differential polynomial in the single variable y.
PolyQ assemble_linearization(const PolyR& f, const LocalDiffAlgebra& R, const LiftState& state,
                             int k);

// Mutual reduction of linear differential polynomials (single unknown) by the
// elementary step "replace l_g by l_g - (d/c) theta(l_f)"; output is monic,
// autoreduced, and generates the same ideal. A nonzero constant, if one
// arises, is returned as the single element.
std::vector<PolyQ> linear_autoreduce(std::vector<PolyQ> system);

// Reduce a linear polynomial by an autoreduced linear set, with division.
PolyQ linear_reduce(PolyQ p, const std::vector<PolyQ>& gamma);

struct SolverStrategy {
    enum class Kind { ExactAnsatz, Jet } kind;
    int bound;                    // max total degree D, or jet order N
    std::vector<mpq_class> point; // jet expansion point (one entry per t_j)

    static SolverStrategy exact_ansatz(int max_degree) {
        return {Kind::ExactAnsatz, max_degree, {}};
    }
    static SolverStrategy jet(std::vector<mpq_class> p, int order) {
        return {Kind::Jet, order, std::move(p)};
    }
};

struct LinearSolution {
    FieldElem y;
    bool exact;  // false for jet-mode truncations
};

// Particular solution of an autoreduced linear system; free coefficients are
// canonically set to zero.
LinearSolution solve_linear(const std::vector<PolyQ>& gamma, const FieldConfig& fc,
                            const SolverStrategy& strategy);

struct LiftResult {
    LocalElem b;
    bool exact;
    std::vector<std::string> trace;
};

// Differential Hensel lift of the nonsingular root a of the residue system
// across the nilpotent maximal ideal of R.
LiftResult lift(const std::vector<PolyR>& lambda_set, const FieldElem& a,
                const LocalDiffAlgebra& R, const SolverStrategy& solver);

// Non-local variant: lift factorwise across the Jacobson radical and
// reassemble along the idempotents.
LiftResult lift_nonlocal(const std::vector<PolyR>& lambda_set, const FieldElem& a,
                         const FiniteAlgebra::Ptr& alg, FieldConfig fc,
                         const SolverStrategy& solver);

}  // namespace ddh
