#pragma once

#include <string>
#include <vector>

#include "ddh/finitealg.hpp"

namespace ddh {

struct DenominatorNotUnit : std::runtime_error {
    explicit DenominatorNotUnit(int i)
        : std::runtime_error("sigma_" + std::to_string(i) +
                             "-image of a denominator vanishes"),
          factor(i) {}
    int factor;
};

struct StructureReport {
    bool pass = true;
    std::string counterexample;  // offending term, when pass is false
    std::vector<std::string> notes;
};

// A D-structure on K presented by generator images: the homomorphism
// e(r) = r eps_0 + partial_1(r) eps_1 + ... + partial_l(r) eps_l is determined
// by e(t_1)..e(t_s), and extends uniquely to fractions where denominators map
// to units.
class DStructure {
public:
    // images[j-1] is e(t_j); the 0-residue of each image must be t_j itself.
    DStructure(FiniteAlgebra::Ptr alg, FieldConfig fc, std::vector<DFieldElem> images);

    const FiniteAlgebra::Ptr& algebra() const { return alg_; }
    const FieldConfig& config() const { return fc_; }
    const DFieldElem& image(int j) const { return images_[j - 1]; }

    // Homomorphic extension of e to a fraction of polynomials in the t_j.
    DFieldElem e_of(const FieldElem& a) const;

    // Coordinate i of e(a); partial_0 is the identity.
    FieldElem partial_of(int i, const FieldElem& a) const { return e_of(a)[i]; }

    // sigma_i = (i-th residue) . e; sigma_0 = id.
    FieldElem sigma(int i, const FieldElem& a) const { return e_of(a).residue(i); }

    // Verifies the structure axioms on the generators and on random samples.
    StructureReport check_structure(int sample_budget = 40) const;

    // Coefficientwise maps on differential polynomials.
    std::vector<PolyQ> map_e(const PolyQ& f) const;        // the l+1 coordinates of f^e
    PolyQ map_sigma(int i, const PolyQ& f) const;          // f^{sigma_i}
    PolyQ map_component(int j, const PolyQ& f) const;      // f^{e_j}

private:
    FiniteAlgebra::Ptr alg_;
    FieldConfig fc_;
    std::vector<DFieldElem> images_;

    DFieldElem eval_poly(const QPoly& p) const;
};

}  // namespace ddh
