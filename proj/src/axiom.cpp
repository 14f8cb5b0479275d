#include "ddh/axiom.hpp"

#include <sstream>

namespace ddh {

VStar VStar::of(AutoreducedSet s) {
    PolyQ h = s.H();
    if (ritt_remainder(h, s).remainder.is_zero())
        throw InvalidVStar("H reduces to zero modulo the set; V* would be empty");
    return VStar{std::move(s), std::move(h)};
}

bool point_in_vstar(const std::vector<FieldElem>& a, const VStar& v) {
    for (auto& f : v.set.elements())
        if (!f.evaluate_at_point(a).is_zero()) return false;
    return !v.H.evaluate_at_point(a).is_zero();
}

std::string AxiomReport::str() const {
    std::ostringstream os;
    for (auto& l : lines) os << l << "\n";
    os << (pass ? "PASS" : "FAIL") << "\n";
    return os.str();
}

AxiomReport check_condition_i(const VStar& lambda, const VStar& gamma, const DStructure& s) {
    AxiomReport rep;
    int ell = s.algebra()->dim() - 1;
    VarNamer namer = prolonged_namer(ell);
    for (size_t k = 0; k < lambda.set.size(); ++k) {
        auto comps = components(lambda.set[k], s);
        for (size_t j = 0; j < comps.size(); ++j) {
            std::ostringstream os;
            os << "element " << k << " component " << j << ": ";
            if (ideal_member(comps[j], gamma.set)) {
                os << "reduces to 0";
            } else {
                rep.pass = false;
                os << "remainder nonzero for " << comps[j].str(namer);
            }
            rep.lines.push_back(os.str());
        }
    }
    if (rep.pass)
        rep.lines.push_back(
            "certificate: every component lies in the asserted prime ideal, so "
            "condition (i) holds on V(Gamma)");
    else
        rep.lines.push_back(
            "note: a nonzero remainder shows non-membership in the asserted "
            "ideal only; refuting condition (i) additionally requires a "
            "witness point of V*(Gamma)");
    return rep;
}

AxiomReport check_witness(const std::vector<FieldElem>& a, const VStar& lambda,
                          const VStar& gamma, const DStructure& s) {
    AxiomReport rep;
    bool in_lambda = point_in_vstar(a, lambda);
    rep.pass = rep.pass && in_lambda;
    rep.lines.push_back(std::string("a in V*(Lambda): ") + (in_lambda ? "yes" : "no"));

    auto abar = nabla(a, s);
    bool in_gamma = point_in_vstar(abar, gamma);
    rep.pass = rep.pass && in_gamma;
    rep.lines.push_back(std::string("nabla(a) in V*(Gamma): ") + (in_gamma ? "yes" : "no"));

    const LocalDecomposition& dec = s.algebra()->decomposition();
    for (int i = 0; i < dec.factors(); ++i) {
        auto pa = pihat(i, abar, s);
        bool ok = true;
        for (auto& f : lambda.set.elements())
            ok = ok && s.map_sigma(i, f).evaluate_at_point(pa).is_zero();
        ok = ok && !s.map_sigma(i, lambda.H).evaluate_at_point(pa).is_zero();
        rep.lines.push_back("density evidence: pihat_" + std::to_string(i) +
                            "(nabla(a)) in V*(Lambda^sigma_" + std::to_string(i) +
                            "): " + (ok ? "yes" : "no"));
    }
    return rep;
}

}  // namespace ddh
