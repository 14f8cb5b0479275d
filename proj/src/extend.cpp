#include "ddh/extend.hpp"

namespace ddh {

namespace {

AutoreducedSet validated_set(const std::vector<PolyQ>& elems) {
    try {
        return AutoreducedSet::validate(elems);
    } catch (const NotAutoreduced& e) {
        throw PreconditionFailed(std::string("charset is not autoreduced: ") + e.what());
    }
}

}  // namespace

void ExtensionRequest::validate() const {
    const LocalDecomposition& dec = structure.algebra()->decomposition();
    if ((int)targets.size() != dec.factors())
        throw PreconditionFailed("expected one residue target per local factor");
    if (targets[0] != a)
        throw PreconditionFailed("the distinguished factor's target must be a itself");
    if (!charset) return;
    AutoreducedSet set = validated_set(*charset);
    for (auto& f : set.elements())
        if (!f.evaluate_at_point({a}).is_zero())
            throw PreconditionFailed("a does not satisfy charset element " + f.str());
    if (set.H().evaluate_at_point({a}).is_zero())
        throw PreconditionFailed("H of the charset vanishes at a");
    for (int i = 0; i < dec.factors(); ++i)
        for (auto& f : set.elements()) {
            PolyQ fs = structure.map_sigma(i, f);
            if (!fs.evaluate_at_point({targets[i]}).is_zero())
                throw PreconditionFailed("target sigma_" + std::to_string(i) +
                                         "(a) does not satisfy the sigma-transform of " +
                                         f.str());
        }
}

ExtensionResult extend_to_element(const ExtensionRequest& req, const SolverStrategy& solver) {
    req.validate();
    const FiniteAlgebra::Ptr& alg = req.structure.algebra();
    const FieldConfig& fc = req.structure.config();
    const LocalDecomposition& dec = alg->decomposition();

    ExtensionResult out{DFieldElem(alg), true, {}};

    if (!req.charset) {
        // transcendental case: prescribed residues, zero nilpotent corrections
        for (int i = 0; i < dec.factors(); ++i)
            out.b = out.b + DFieldElem::from_rat_coords(alg, dec.idempotents[i]) *
                                req.targets[i];
        out.notes.push_back("transcendental element: canonical lift with zero "
                            "nilpotent part");
    } else {
        for (int i = 0; i < dec.factors(); ++i) {
            FactorView fv = factor_view(alg, i, fc);
            // transport Lambda along e_i = (projection to factor i) . e
            std::vector<PolyR> mapped;
            for (auto& f : *req.charset) {
                try {
                    mapped.push_back(f.map_coeffs<LocalElem>([&](const FieldElem& c) {
                        DFieldElem ec = req.structure.e_of(c);
                        return fv.project_elem(LocalElem(alg, ec.coeffs()), *alg);
                    }));
                } catch (const DenominatorNotUnit& e) {
                    throw PreconditionFailed("factor " + std::to_string(i) + ": " + e.what());
                }
            }
            try {
                LiftResult r = lift(mapped, req.targets[i], fv.local, solver);
                out.exact = out.exact && r.exact;
                auto add = fv.inject_coords(r.b);
                for (int j = 0; j < alg->dim(); ++j) out.b[j] = out.b[j] + add[j];
            } catch (const PreconditionFailed& e) {
                throw PreconditionFailed("factor " + std::to_string(i) + ": " + e.what());
            } catch (const SolverFailed& e) {
                throw SolverFailed(e.level, "factor " + std::to_string(i) + ": " + e.what());
            }
        }
    }

    for (int i = 0; i < dec.factors(); ++i) {
        FieldElem r = out.b.residue(dec, i);
        if (r != req.targets[i])
            throw SolverFailed(0, "assembled element has residue " + r.str() +
                                      " in factor " + std::to_string(i) +
                                      ", expected the target");
        out.notes.push_back("pi_" + std::to_string(i) + "-residue: " + r.str());
    }
    return out;
}

}  // namespace ddh
