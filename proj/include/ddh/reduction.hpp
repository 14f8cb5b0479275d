#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ddh/diffpoly.hpp"

namespace ddh {

struct NotAutoreduced : std::runtime_error {
    NotAutoreduced(size_t i, size_t j, const std::string& what)
        : std::runtime_error(what), first(i), second(j) {}
    size_t first, second;
};

struct HVanishesUnderMap : std::runtime_error {
    HVanishesUnderMap() : std::runtime_error("H of the mapped set vanishes") {}
};

// Validated autoreduced set, sorted by increasing rank, with cached
// leaders/initials/separants and H = prod I_f * S_f.
class AutoreducedSet {
public:
    // Validates both autoreduction clauses; throws NotAutoreduced.
    static AutoreducedSet validate(std::vector<PolyQ> elems);

    const std::vector<PolyQ>& elements() const { return elems_; }
    size_t size() const { return elems_.size(); }
    const PolyQ& operator[](size_t i) const { return elems_[i]; }
    const AlgIndet& leader(size_t i) const { return leaders_[i]; }
    int leader_degree(size_t i) const { return degrees_[i]; }
    const PolyQ& separant(size_t i) const { return separants_[i]; }
    const PolyQ& initial(size_t i) const { return initials_[i]; }
    const PolyQ& H() const { return H_; }

    // Kolchin's ranking of autoreduced sets; lower = closer to characteristic.
    static std::strong_ordering compare(const AutoreducedSet& a, const AutoreducedSet& b);

    // Transport along a coefficient homomorphism phi: applies phi to every
    // coefficient and revalidates; requires phi(H) != 0.
    AutoreducedSet map_coefficients(
        const std::function<FieldElem(const FieldElem&)>& phi) const;

private:
    std::vector<PolyQ> elems_;
    std::vector<AlgIndet> leaders_;
    std::vector<int> degrees_;
    std::vector<PolyQ> separants_, initials_;
    PolyQ H_;
};

// One pseudo-division step: w <- multiplier * w - quotient * theta(element).
struct ReductionStep {
    size_t elem;          // index into the set
    DerivOp theta;        // identity for an algebraic (initial) step
    bool via_separant;    // true when the premultiplier is the separant
    PolyQ multiplier;     // S_g or I_g
    PolyQ quotient;
};

struct ReductionCertificate {
    PolyQ input;
    PolyQ remainder;
    std::vector<ReductionStep> steps;

    // (initial-power, separant-power) per element index
    std::vector<std::pair<int, int>> premultiplier_exponents(size_t nelems) const;

    // Expands the recorded identity M*f = sum c_i * theta_i(g_i) + r symbolically.
    bool verify(const AutoreducedSet& set) const;

    bool remainder_is_reduced(const AutoreducedSet& set) const;

    std::string report(const AutoreducedSet& set,
                       const VarNamer& name = default_var_name) const;
};

// Ritt-Kolchin pseudo-reduction; total.
ReductionCertificate ritt_remainder(const PolyQ& f, const AutoreducedSet& set);

// True iff the Ritt remainder vanishes. Under the caller's assertion that the
// set is characteristic for a prime differential ideal this decides membership.
bool ideal_member(const PolyQ& f, const AutoreducedSet& set);

struct CoherenceReport {
    enum class Status { Coherent, Incoherent, Inconclusive } status;
    std::optional<std::pair<size_t, size_t>> witness_pair;
    std::optional<PolyQ> witness;  // the irreducible residue of the delta-polynomial
    std::string note;

    bool coherent() const { return status == Status::Coherent; }
};

// Coherence check at the least common derivative of each leader pair.
// Membership in (Lambda)_v is decided by pseudo-reduction, falling back to a
// Groebner saturation computation with the given step budget.
CoherenceReport check_coherent(const AutoreducedSet& set, long budget = 200000);

}  // namespace ddh
