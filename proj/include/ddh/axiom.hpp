#pragma once

#include <string>
#include <vector>

#include "ddh/prolongation.hpp"

namespace ddh {

struct InvalidVStar : std::runtime_error {
    explicit InvalidVStar(const std::string& what) : std::runtime_error(what) {}
};

// The quasi-variety V*(Lambda) = V(Lambda) \ V(H_Lambda) presented by an
// asserted characteristic set.
struct VStar {
    AutoreducedSet set;
    PolyQ H;  // cached product of initials and separants

    // Spot-checks that H does not reduce to zero modulo the set (H must lie
    // outside the asserted ideal); throws InvalidVStar.
    static VStar of(AutoreducedSet s);
};

// true iff every element of the set vanishes at a and H(a) != 0
bool point_in_vstar(const std::vector<FieldElem>& a, const VStar& v);

struct AxiomReport {
    bool pass = true;
    std::vector<std::string> lines;

    std::string str() const;
};

// Condition (i) of the axiom scheme: every component f^(j) of every f in
// Lambda must lie in the ideal asserted by Gamma (over the prolonged
// variables). A pass is a sound certificate; a failure refutes only together
// with a witness point, and the report says so.
AxiomReport check_condition_i(const VStar& lambda, const VStar& gamma, const DStructure& s);

// Witness verification of the conclusion: a lies in V*(Lambda), nabla(a) lies
// in V*(Gamma); additionally reports whether each pihat_i image lies in
// V*(Lambda^{sigma_i}) as density evidence.
AxiomReport check_witness(const std::vector<FieldElem>& a, const VStar& lambda,
                          const VStar& gamma, const DStructure& s);

}  // namespace ddh
