#include "ddh/prolongation.hpp"

namespace ddh {

PolyQ rename_vars(const PolyQ& f, const std::function<int(int)>& remap) {
    PolyQ r;
    for (auto& [m, c] : f.terms()) {
        Monomial nm;
        for (auto& [u, k] : m.factors) nm = nm.times(AlgIndet{remap(u.var), u.theta}, k);
        r.add_term(nm, c);
    }
    return r;
}

std::vector<PolyQ> components(const PolyQ& f, const DStructure& s) {
    const auto& alg = s.algebra();
    int ell = alg->dim() - 1;
    DPolyQ acc(alg);
    for (auto& [m, c] : f.terms()) {
        DFieldElem ec = s.e_of(c);
        DPolyQ term(alg);
        for (int j = 0; j <= ell; ++j) term[j] = PolyQ(ec[j]);
        for (auto& [u, k] : m.factors) {
            // x_i -> sum_j x_i^(j) eps_j; theta passes through the constant basis
            DPolyQ xbar(alg);
            for (int j = 0; j <= ell; ++j)
                xbar[j] = PolyQ::indet(AlgIndet{prolonged_var(u.var, j, ell), u.theta},
                                       FieldElem(1));
            for (int p = 0; p < k; ++p) term = term * xbar;
        }
        acc = acc + term;
    }
    std::vector<PolyQ> out;
    out.reserve(ell + 1);
    for (int j = 0; j <= ell; ++j) out.push_back(acc[j]);
    return out;
}

ProlongedSystem tau_generators(const AutoreducedSet& set, const DStructure& s) {
    ProlongedSystem ps;
    ps.source = set.elements();
    for (auto& f : ps.source) ps.components.push_back(components(f, s));
    ps.note =
        "generators assume the source set is a characteristic set of the variety's "
        "differential ideal (caller assertion, not verified)";
    return ps;
}

std::vector<FieldElem> nabla(const std::vector<FieldElem>& a, const DStructure& s) {
    int ell = s.algebra()->dim() - 1;
    std::vector<FieldElem> r;
    r.reserve(a.size() * (ell + 1));
    for (auto& ai : a) {
        DFieldElem e = s.e_of(ai);
        for (int j = 0; j <= ell; ++j) r.push_back(e[j]);
    }
    return r;
}

std::vector<FieldElem> pihat(int i, const std::vector<FieldElem>& abar, const DStructure& s) {
    const LocalDecomposition& dec = s.algebra()->decomposition();
    int ell = s.algebra()->dim() - 1;
    if (abar.size() % (ell + 1) != 0)
        throw std::invalid_argument("pihat: point has wrong number of coordinates");
    if (i < 0 || i >= dec.factors())
        throw std::out_of_range("pihat: no local factor " + std::to_string(i));
    std::vector<FieldElem> r(abar.size() / (ell + 1));
    for (size_t v = 0; v < r.size(); ++v)
        for (int j = 0; j <= ell; ++j) {
            if (dec.pi[i][j] == 0) continue;
            r[v] = r[v] + abar[v * (ell + 1) + j] * FieldElem(dec.pi[i][j]);
        }
    return r;
}

}  // namespace ddh
