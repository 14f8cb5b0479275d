#pragma once

#include <string>
#include <vector>

#include "ddh/dstructure.hpp"
#include "ddh/reduction.hpp"

namespace ddh {

// Prolonged variable numbering: x_i over basis coordinate j becomes the
// variable x<i>_<j>, stored at index (i-1)*(l+1) + j + 1.
inline int prolonged_var(int i, int j, int ell) { return (i - 1) * (ell + 1) + j + 1; }

// Renders prolonged variables as "x<i>_<j>".
inline VarNamer prolonged_namer(int ell) {
    return [ell](int v) {
        int i = (v - 1) / (ell + 1) + 1, j = (v - 1) % (ell + 1);
        return "x" + std::to_string(i) + "_" + std::to_string(j);
    };
}

// Rebuild a polynomial with every variable index replaced by remap(index).
PolyQ rename_vars(const PolyQ& f, const std::function<int(int)>& remap);

// The unique f^(0)..f^(l) with f^e(sum_j x^(j) eps_j) = sum_j f^(j)(xbar) eps_j.
std::vector<PolyQ> components(const PolyQ& f, const DStructure& s);

struct ProlongedSystem {
    std::vector<PolyQ> source;
    std::vector<std::vector<PolyQ>> components;  // one list per source element
    std::string note;

    std::vector<PolyQ> flat() const {
        std::vector<PolyQ> r;
        for (auto& c : components) r.insert(r.end(), c.begin(), c.end());
        return r;
    }
};

// Generator set of the prolongation tau V cut out by the components of Lambda.
ProlongedSystem tau_generators(const AutoreducedSet& set, const DStructure& s);

// The section a -> (a, partial_1 a, ..., partial_l a), in prolonged-variable order.
std::vector<FieldElem> nabla(const std::vector<FieldElem>& a, const DStructure& s);

// abar -> (sum_j a_i^(j) pi_i(eps_j))_i; pihat_0 projects to the 0-coordinates.
std::vector<FieldElem> pihat(int i, const std::vector<FieldElem>& abar, const DStructure& s);

}  // namespace ddh
