#include "ddh/reduction.hpp"

#include <algorithm>
#include <sstream>

#include "ddh/groebner.hpp"

namespace ddh {

namespace {

int deg_in(const PolyQ& p, const AlgIndet& u) {
    int d = 0;
    for (auto& [m, c] : p.terms()) d = std::max(d, m.degree_in(u));
    return d;
}

// coefficient of u^k in p, as a polynomial free of u^k
PolyQ coeff_of(const PolyQ& p, const AlgIndet& u, int k) {
    PolyQ r;
    for (auto& [m, c] : p.terms())
        if (m.degree_in(u) == k) r.add_term(m.times(u, -k), c);
    return r;
}

PolyQ indet_pow(const AlgIndet& u, int k) {
    PolyQ r;
    if (k == 0) return PolyQ(FieldElem(1));
    r.add_term(Monomial{}.times(u, k), FieldElem(1));
    return r;
}

const PolyQ kOne = PolyQ(FieldElem(1));

}  // namespace

// --- AutoreducedSet --------------------------------------------------------

AutoreducedSet AutoreducedSet::validate(std::vector<PolyQ> elems) {
    AutoreducedSet s;
    s.elems_ = std::move(elems);
    for (size_t i = 0; i < s.elems_.size(); ++i)
        if (s.elems_[i].in_ring())
            throw NotAutoreduced(i, i, "element " + std::to_string(i) +
                                           " lies in the coefficient ring");
    std::sort(s.elems_.begin(), s.elems_.end(), [](const PolyQ& a, const PolyQ& b) {
        if (auto c = rank_compare(a.leader(), b.leader()); c != 0) return c < 0;
        return a.degree() < b.degree();
    });
    for (auto& f : s.elems_) {
        s.leaders_.push_back(f.leader());
        s.degrees_.push_back(f.degree());
        s.separants_.push_back(f.separant());
        s.initials_.push_back(f.initial());
    }
    for (size_t i = 0; i + 1 < s.elems_.size(); ++i)
        if (s.leaders_[i] == s.leaders_[i + 1])
            throw NotAutoreduced(i, i + 1, "elements " + std::to_string(i) + " and " +
                                               std::to_string(i + 1) + " share leader " +
                                               indet_str(s.leaders_[i]));
    for (size_t i = 0; i < s.elems_.size(); ++i) {
        for (size_t j = 0; j < s.elems_.size(); ++j) {
            if (i == j) continue;
            for (const AlgIndet& u : s.elems_[j].indeterminates()) {
                if (u.var != s.leaders_[i].var || !s.leaders_[i].theta.divides(u.theta))
                    continue;
                if (!(u == s.leaders_[i]))
                    throw NotAutoreduced(
                        i, j, "element " + std::to_string(j) + " contains " + indet_str(u) +
                                  ", a proper derivative of the leader " +
                                  indet_str(s.leaders_[i]) + " of element " + std::to_string(i));
                if (deg_in(s.elems_[j], u) >= s.degrees_[i])
                    throw NotAutoreduced(
                        i, j, "element " + std::to_string(j) + " has degree >= " +
                                  std::to_string(s.degrees_[i]) + " in the leader " +
                                  indet_str(u) + " of element " + std::to_string(i));
            }
        }
    }
    s.H_ = kOne;
    for (size_t i = 0; i < s.elems_.size(); ++i)
        s.H_ = s.H_ * s.initials_[i] * s.separants_[i];
    return s;
}

std::strong_ordering AutoreducedSet::compare(const AutoreducedSet& a, const AutoreducedSet& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        if (auto c = rank_compare(a.leaders_[i], b.leaders_[i]); c != 0) return c;
        if (auto c = a.degrees_[i] <=> b.degrees_[i]; c != 0) return c;
    }
    // a strictly longer set with a dominating prefix ranks lower
    return b.size() <=> a.size();
}

AutoreducedSet AutoreducedSet::map_coefficients(
    const std::function<FieldElem(const FieldElem&)>& phi) const {
    if (H_.map_coeffs<FieldElem>(phi).is_zero()) throw HVanishesUnderMap();
    std::vector<PolyQ> mapped;
    mapped.reserve(elems_.size());
    for (auto& f : elems_) mapped.push_back(f.map_coeffs<FieldElem>(phi));
    return validate(std::move(mapped));
}

// --- Ritt-Kolchin reduction ------------------------------------------------

namespace {

struct Target {
    AlgIndet u;     // the indeterminate being eliminated / degree-lowered
    size_t elem;
    DerivOp theta;  // identity for a degree-lowering step
};

// Highest reducible indeterminate; proper-derivative elimination applies at
// any positive degree, a leader itself only at degree >= d_g.
std::optional<Target> find_target(const PolyQ& w, const AutoreducedSet& set) {
    auto indets = w.indeterminates();
    for (auto it = indets.rbegin(); it != indets.rend(); ++it) {
        const AlgIndet& u = *it;
        for (size_t g = 0; g < set.size(); ++g) {
            if (u.var != set.leader(g).var || !set.leader(g).theta.divides(u.theta)) continue;
            DerivOp th = set.leader(g).theta.quotient_into(u.theta);
            if (!th.is_identity()) return Target{u, g, th};
            if (deg_in(w, u) >= set.leader_degree(g)) return Target{u, g, th};
        }
    }
    return std::nullopt;
}

}  // namespace

ReductionCertificate ritt_remainder(const PolyQ& f, const AutoreducedSet& set) {
    ReductionCertificate cert;
    cert.input = f;
    PolyQ w = f;
    while (auto t = find_target(w, set)) {
        bool proper = !t->theta.is_identity();
        PolyQ target = proper ? set[t->elem].theta_apply(t->theta) : set[t->elem];
        const PolyQ& mult = proper ? set.separant(t->elem) : set.initial(t->elem);
        int dtar = proper ? 1 : set.leader_degree(t->elem);
        int k = deg_in(w, t->u);
        PolyQ q = coeff_of(w, t->u, k) * indet_pow(t->u, k - dtar);
        w = mult * w - q * target;
        cert.steps.push_back({t->elem, t->theta, proper, mult, q});
    }
    cert.remainder = w;
    return cert;
}

bool ideal_member(const PolyQ& f, const AutoreducedSet& set) {
    return ritt_remainder(f, set).remainder.is_zero();
}

std::vector<std::pair<int, int>> ReductionCertificate::premultiplier_exponents(
    size_t nelems) const {
    std::vector<std::pair<int, int>> r(nelems, {0, 0});
    for (auto& s : steps)
        (s.via_separant ? r[s.elem].second : r[s.elem].first)++;
    return r;
}

bool ReductionCertificate::verify(const AutoreducedSet& set) const {
    // Expand M*f = sum c_k * theta_k(g_k) + r, where M is the product of all
    // step multipliers and c_k carries the multipliers of the later steps.
    PolyQ M = kOne, suffix = kOne, combo;
    for (auto& s : steps) M = M * s.multiplier;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        PolyQ thg = it->theta.is_identity() ? set[it->elem] : set[it->elem].theta_apply(it->theta);
        combo = combo + suffix * it->quotient * thg;
        suffix = suffix * it->multiplier;
    }
    return M * input == combo + remainder;
}

bool ReductionCertificate::remainder_is_reduced(const AutoreducedSet& set) const {
    for (const AlgIndet& u : remainder.indeterminates()) {
        for (size_t i = 0; i < set.size(); ++i) {
            if (u.var != set.leader(i).var || !set.leader(i).theta.divides(u.theta)) continue;
            if (!(u == set.leader(i))) return false;
            if (deg_in(remainder, u) >= set.leader_degree(i)) return false;
        }
    }
    return true;
}

std::string ReductionCertificate::report(const AutoreducedSet& set, const VarNamer& name) const {
    std::ostringstream os;
    os << "reduction certificate\n";
    os << "  input:     " << input.str(name) << "\n";
    os << "  remainder: " << remainder.str(name) << "\n";
    auto exps = premultiplier_exponents(set.size());
    for (size_t i = 0; i < exps.size(); ++i)
        os << "  element " << i << " [" << set[i].str(name) << "]: initial^" << exps[i].first
           << ", separant^" << exps[i].second << "\n";
    for (size_t k = 0; k < steps.size(); ++k) {
        auto& s = steps[k];
        os << "  step " << (k + 1) << ": element " << s.elem << ", theta = "
           << (s.theta.is_identity() ? std::string("id ") : s.theta.str()) << ", multiplier ("
           << (s.via_separant ? "separant" : "initial") << ") = " << s.multiplier.str(name)
           << ", quotient = " << s.quotient.str(name) << "\n";
    }
    os << "  note: membership verdicts assume the set is a characteristic set of a prime "
          "differential ideal (caller assertion, not verified)\n";
    return os.str();
}

// --- coherence -------------------------------------------------------------

namespace {

void enum_thetas(int m, int budget, DerivOp cur, int pos, std::vector<DerivOp>& out) {
    if (pos == m) {
        out.push_back(cur);
        return;
    }
    for (int k = 0; k <= budget; ++k) {
        cur.e[pos] = k;
        enum_thetas(m, budget - k, cur, pos + 1, out);
    }
    cur.e[pos] = 0;
}

// generators of (Lambda)_v: all theta(h) whose leader ranks strictly below v
std::vector<PolyQ> ideal_below(const AutoreducedSet& set, const AlgIndet& v) {
    std::vector<PolyQ> gens;
    int m = (int)v.theta.e.size();
    for (size_t i = 0; i < set.size(); ++i) {
        int budget = v.theta.order() - set.leader(i).theta.order();
        if (budget < 0) continue;
        std::vector<DerivOp> thetas;
        enum_thetas(m, budget, DerivOp::identity(m), 0, thetas);
        for (auto& th : thetas) {
            AlgIndet lu{set.leader(i).var, set.leader(i).theta.compose(th)};
            if (rank_compare(lu, v) < 0)
                gens.push_back(th.is_identity() ? set[i] : set[i].theta_apply(th));
        }
    }
    return gens;
}

// purely algebraic pseudo-reduction by polynomials with their rank leaders
PolyQ alg_reduce(PolyQ w, const std::vector<PolyQ>& gens) {
    bool progress = true;
    while (progress && !w.in_ring()) {
        progress = false;
        for (auto& g : gens) {
            AlgIndet u = g.leader();
            int d = g.degree();
            int k;
            while ((k = deg_in(w, u)) >= d) {
                PolyQ lc = coeff_of(g, u, d);
                w = lc * w - coeff_of(w, u, k) * indet_pow(u, k - d) * g;
                progress = true;
            }
            if (w.in_ring()) break;
        }
    }
    return w;
}

GroebnerEngine::GPoly to_gpoly(const PolyQ& p, const std::map<AlgIndet, int, IndetLess>& idx,
                               int nvars, int extra_z) {
    GroebnerEngine::GPoly r;
    for (auto& [m, c] : p.terms()) {
        GroebnerEngine::Mono e(nvars + 1, 0);
        for (auto& [u, k] : m.factors) e[idx.at(u)] = k;
        e[nvars] = extra_z;
        r[e] = c;
    }
    return r;
}

}  // namespace

CoherenceReport check_coherent(const AutoreducedSet& set, long budget) {
    CoherenceReport rep{CoherenceReport::Status::Coherent, {}, {}, ""};
    for (size_t i = 0; i < set.size(); ++i) {
        for (size_t j = i + 1; j < set.size(); ++j) {
            const AlgIndet &vi = set.leader(i), &vj = set.leader(j);
            if (vi.var != vj.var) continue;
            AlgIndet v{vi.var, DerivOp::lcm(vi.theta, vj.theta)};
            DerivOp thf = vi.theta.quotient_into(v.theta);
            DerivOp thg = vj.theta.quotient_into(v.theta);
            PolyQ d = set.separant(j) * set[i].theta_apply(thf) -
                      set.separant(i) * set[j].theta_apply(thg);
            if (d.is_zero()) continue;
            std::vector<PolyQ> gens = ideal_below(set, v);
            PolyQ r = alg_reduce(d, gens);
            if (r.is_zero()) continue;
            // saturation test: r in (gens) : H^inf, via the auxiliary z*H - 1
            std::map<AlgIndet, int, IndetLess> idx;
            auto collect = [&](const PolyQ& p) {
                for (const AlgIndet& u : p.indeterminates())
                    idx.emplace(u, 0);
            };
            for (auto& g : gens) collect(g);
            collect(r);
            collect(set.H());
            int n = 0;
            for (auto& [u, k] : idx) k = n++;
            GroebnerEngine eng(n + 1, budget);
            for (auto& g : gens) eng.add_generator(to_gpoly(g, idx, n, 0));
            if (!set.H().in_ring()) {
                auto zh = to_gpoly(set.H(), idx, n, 1);
                GroebnerEngine::Mono zero(n + 1, 0);
                zh[zero] = zh.count(zero) ? zh[zero] - FieldElem(1) : FieldElem(-1);
                if (zh[zero].is_zero()) zh.erase(zero);
                eng.add_generator(std::move(zh));
            }
            if (!eng.compute()) {
                rep.status = CoherenceReport::Status::Inconclusive;
                rep.witness_pair = {i, j};
                rep.witness = r;
                rep.note = "step budget exhausted during saturation for pair (" +
                           std::to_string(i) + "," + std::to_string(j) + ")";
                return rep;
            }
            if (!eng.reduces_to_zero(to_gpoly(r, idx, n, 0))) {
                rep.status = CoherenceReport::Status::Incoherent;
                rep.witness_pair = {i, j};
                rep.witness = r;
                rep.note = "cross delta-polynomial of pair (" + std::to_string(i) + "," +
                           std::to_string(j) + ") leaves a nonzero residue outside the ideal";
                return rep;
            }
        }
    }
    rep.note = "all pairs coherent";
    return rep;
}

}  // namespace ddh
