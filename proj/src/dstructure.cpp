#include "ddh/dstructure.hpp"

#include <random>
#include <sstream>

namespace ddh {

DStructure::DStructure(FiniteAlgebra::Ptr alg, FieldConfig fc, std::vector<DFieldElem> images)
    : alg_(std::move(alg)), fc_(fc), images_(std::move(images)) {
    if ((int)images_.size() != fc_.s)
        throw std::invalid_argument("DStructure: need one image per field generator");
    if (!alg_->has_decomposition())
        throw NoDecomposition();
    for (int j = 1; j <= fc_.s; ++j) {
        if (!image(j).algebra()->same_as(*alg_))
            throw AlgebraMismatch();
        if (image(j).residue(0) != FieldElem::t(j, fc_.s))
            throw std::invalid_argument("DStructure: 0-residue of e(t" + std::to_string(j) +
                                        ") must be t" + std::to_string(j));
    }
}

DFieldElem DStructure::eval_poly(const QPoly& p) const {
    DFieldElem acc(alg_);
    for (auto& [e, c] : p.terms()) {
        DFieldElem term = DFieldElem::scalar(alg_, FieldElem(c));
        for (size_t j = 0; j < e.size(); ++j)
            for (int k = 0; k < e[j]; ++k) term = term * images_[j];
        acc = acc + term;
    }
    return acc;
}

DFieldElem DStructure::e_of(const FieldElem& a) const {
    DFieldElem num = eval_poly(a.num());
    if (a.den() == QPoly(mpq_class(1))) return num;
    try {
        return num * eval_poly(a.den()).invert();
    } catch (const NotAUnit& e) {
        throw DenominatorNotUnit(e.factor);
    }
}

std::vector<PolyQ> DStructure::map_e(const PolyQ& f) const {
    std::vector<PolyQ> coords((size_t)alg_->dim());
    for (auto& [m, c] : f.terms()) {
        DFieldElem ec = e_of(c);
        for (int j = 0; j < alg_->dim(); ++j) coords[j].add_term(m, ec[j]);
    }
    return coords;
}

PolyQ DStructure::map_sigma(int i, const PolyQ& f) const {
    return f.map_coeffs<FieldElem>([&](const FieldElem& c) { return sigma(i, c); });
}

PolyQ DStructure::map_component(int j, const PolyQ& f) const {
    return f.map_coeffs<FieldElem>([&](const FieldElem& c) { return e_of(c)[j]; });
}

StructureReport DStructure::check_structure(int sample_budget) const {
    StructureReport rep;
    auto fail = [&](const std::string& what) {
        if (rep.pass) {
            rep.pass = false;
            rep.counterexample = what;
        }
    };
    const LocalDecomposition& dec = alg_->decomposition();

    // generator-level axioms
    for (int j = 1; j <= fc_.s; ++j) {
        FieldElem tj = FieldElem::t(j, fc_.s);
        if (e_of(tj).residue(0) != tj) fail("pi(e(t" + std::to_string(j) + ")) != t" +
                                            std::to_string(j));
        for (int d = 1; d <= fc_.m; ++d) {
            if (e_of(tj.derive(d)) != image(j).apply_delta(d))
                fail("e(delta_" + std::to_string(d) + " t" + std::to_string(j) +
                     ") != delta_" + std::to_string(d) + " e(t" + std::to_string(j) + ")");
        }
    }
    // injectivity witnesses: distinct generators stay distinct under each sigma_i
    for (int i = 0; i < dec.factors(); ++i)
        for (int j = 1; j <= fc_.s; ++j)
            for (int k = j + 1; k <= fc_.s; ++k)
                if (sigma(i, FieldElem::t(j, fc_.s)) == sigma(i, FieldElem::t(k, fc_.s)))
                    fail("sigma_" + std::to_string(i) + " identifies t" + std::to_string(j) +
                         " and t" + std::to_string(k));

    // randomized homomorphism / commutation checks
    std::mt19937 rng(271828);
    std::uniform_int_distribution<int> coef(-4, 4), pick(1, std::max(1, fc_.s)), deg(0, 2);
    auto sample = [&]() {
        FieldElem a(coef(rng));
        for (int f = 0; f < 2; ++f) {
            FieldElem g = FieldElem::t(pick(rng), fc_.s);
            int d = deg(rng);
            for (int k = 0; k < d; ++k) a = a * g;
            a = a + FieldElem(coef(rng));
        }
        return a;
    };
    for (int it = 0; it < sample_budget && rep.pass; ++it) {
        FieldElem a = sample(), b = sample();
        DFieldElem ea = e_of(a), eb = e_of(b);
        if (e_of(a * b) != ea * eb) fail("e not multiplicative on " + a.str() + ", " + b.str());
        if (e_of(a + b) != ea + eb) fail("e not additive on " + a.str() + ", " + b.str());
        if (ea.residue(0) != a) fail("pi(e(a)) != a for a = " + a.str());
        for (int d = 1; d <= fc_.m; ++d) {
            if (e_of(a.derive(d)) != ea.apply_delta(d))
                fail("e does not commute with delta_" + std::to_string(d) + " on " + a.str());
        }
        for (int i = 0; i < dec.factors(); ++i)
            for (int d = 1; d <= fc_.m; ++d)
                if (sigma(i, a).derive(d) != sigma(i, a.derive(d)))
                    fail("sigma_" + std::to_string(i) + " does not commute with delta_" +
                         std::to_string(d) + " on " + a.str());
        // fraction extension witness where the denominator is a unit
        if (!a.is_zero()) {
            bool unit = true;
            for (int i = 0; i < dec.factors(); ++i)
                if (ea.residue(i).is_zero()) unit = false;
            if (unit && e_of(a.inverse()) * ea != DFieldElem::one(alg_))
                fail("e(1/a) * e(a) != 1 for a = " + a.str());
        }
    }
    rep.notes.push_back(rep.pass ? "all generator axioms and sampled identities hold"
                                 : "structure axioms violated");
    return rep;
}

}  // namespace ddh
