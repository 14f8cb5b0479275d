#include "ddh/hensel.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ddh {

// --- LocalElem -------------------------------------------------------------

std::vector<FieldElem> LocalElem::coords_in(const FiniteAlgebra& alg) const {
    if (alg_) {
        if (!alg_->same_as(alg)) throw AlgebraMismatch();
        return coords_;
    }
    std::vector<FieldElem> r(alg.dim());
    for (int j = 0; j < alg.dim(); ++j) r[j] = scalar_ * FieldElem(alg.one()[j]);
    return r;
}

bool LocalElem::is_zero() const {
    if (!alg_) return scalar_.is_zero();
    for (auto& c : coords_)
        if (!c.is_zero()) return false;
    return true;
}

bool LocalElem::operator==(const LocalElem& o) const {
    if (!alg_ && !o.alg_) return scalar_ == o.scalar_;
    const FiniteAlgebra& alg = alg_ ? *alg_ : *o.alg_;
    return coords_in(alg) == o.coords_in(alg);
}

LocalElem LocalElem::operator+(const LocalElem& o) const {
    if (!alg_ && !o.alg_) return LocalElem(scalar_ + o.scalar_);
    FiniteAlgebra::Ptr alg = alg_ ? alg_ : o.alg_;
    auto a = coords_in(*alg), b = o.coords_in(*alg);
    for (size_t j = 0; j < a.size(); ++j) a[j] = a[j] + b[j];
    return LocalElem(alg, std::move(a));
}

LocalElem LocalElem::operator-() const {
    if (!alg_) return LocalElem(-scalar_);
    auto c = coords_;
    for (auto& x : c) x = -x;
    return LocalElem(alg_, std::move(c));
}

LocalElem LocalElem::operator*(const LocalElem& o) const {
    if (!alg_ && !o.alg_) return LocalElem(scalar_ * o.scalar_);
    if (!alg_) {
        auto c = o.coords_;
        for (auto& x : c) x = x * scalar_;
        return LocalElem(o.alg_, std::move(c));
    }
    if (!o.alg_) return o * *this;
    if (!alg_->same_as(*o.alg_)) throw AlgebraMismatch();
    int n = alg_->dim();
    std::vector<FieldElem> r(n);
    for (int j = 0; j < n; ++j) {
        if (coords_[j].is_zero()) continue;
        for (int k = 0; k < n; ++k) {
            if (o.coords_[k].is_zero()) continue;
            FieldElem prod = coords_[j] * o.coords_[k];
            const Coords& t = alg_->table(j, k);
            for (int s = 0; s < n; ++s)
                if (t[s] != 0) r[s] = r[s] + prod * FieldElem(t[s]);
        }
    }
    return LocalElem(alg_, std::move(r));
}

LocalElem LocalElem::derive(int j) const {
    if (!alg_) return LocalElem(scalar_.derive(j));
    auto c = coords_;
    for (auto& x : c) x = x.derive(j);
    return LocalElem(alg_, std::move(c));
}

std::string LocalElem::str() const {
    if (!alg_) return scalar_.str();
    std::ostringstream os;
    bool first = true;
    for (size_t j = 0; j < coords_.size(); ++j) {
        if (coords_[j].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << coords_[j].str() << ")*e" << j;
    }
    return first ? "0" : os.str();
}

// --- LocalDiffAlgebra ------------------------------------------------------

namespace {

linalg::Mat transpose(const linalg::Mat& m) {
    if (m.empty()) return {};
    linalg::Mat t(m[0].size(), linalg::Vec(m.size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

int rank_of(linalg::Mat m) { return linalg::rref(m); }

}  // namespace

LocalDiffAlgebra::LocalDiffAlgebra(FiniteAlgebra::Ptr alg, FieldConfig fc)
    : alg_(std::move(alg)), fc_(fc) {
    const LocalDecomposition& dec = alg_->decomposition();
    if (dec.factors() != 1)
        throw std::invalid_argument("LocalDiffAlgebra: the algebra must be local");
    nu_ = dec.index[0];
    const std::vector<Coords>& gens = dec.nilpotents[0];
    int n = dim();
    // bases of the powers m^1, m^2, ...
    std::vector<linalg::Mat> powers{linalg::row_basis(gens)};
    while (!powers.back().empty()) {
        linalg::Mat next;
        for (auto& g : gens)
            for (auto& b : powers.back()) next.push_back(alg_->multiply(g, b));
        powers.push_back(linalg::row_basis(std::move(next)));
    }
    // graded monomial bases: level 0 is the unit; at level i, products of a
    // generator with a level-(i-1) monomial, kept while independent mod m^(i+1)
    graded_.push_back({alg_->one()});
    for (int i = 1; i < nu_; ++i) {
        linalg::Mat accum = i < (int)powers.size() ? powers[i] : linalg::Mat{};
        int rank = rank_of(accum);
        std::vector<Coords> level;
        for (auto& g : gens)
            for (auto& b : graded_[i - 1]) {
                Coords cand = alg_->multiply(g, b);
                accum.push_back(cand);
                int r2 = rank_of(accum);
                if (r2 > rank) {
                    rank = r2;
                    level.push_back(std::move(cand));
                } else {
                    accum.pop_back();
                }
            }
        graded_.push_back(std::move(level));
    }
    // coordinate functionals: rows of the inverse of the change-of-basis matrix
    linalg::Mat rows;
    for (auto& lvl : graded_)
        for (auto& v : lvl) rows.push_back(v);
    if ((int)rows.size() != n)
        throw std::logic_error("LocalDiffAlgebra: graded pieces do not fill the algebra");
    auto inv = linalg::inverse(transpose(rows));
    if (!inv) throw std::logic_error("LocalDiffAlgebra: graded basis is singular");
    size_t pos = 0;
    for (auto& lvl : graded_) {
        std::vector<Coords> lam;
        for (size_t k = 0; k < lvl.size(); ++k) lam.push_back((*inv)[pos++]);
        lambda_.push_back(std::move(lam));
    }
}

FieldElem LocalDiffAlgebra::res(const LocalElem& v) const {
    if (!v.algebra()) return v.scalar();
    return apply_functional(alg_->decomposition().pi[0], v);
}

LocalElem LocalDiffAlgebra::embed(const FieldElem& a) const {
    return LocalElem(alg_, LocalElem(a).coords_in(*alg_));
}

LocalElem LocalDiffAlgebra::basis_elem(const Coords& c) const {
    std::vector<FieldElem> v(c.size());
    for (size_t j = 0; j < c.size(); ++j) v[j] = FieldElem(c[j]);
    return LocalElem(alg_, std::move(v));
}

FieldElem LocalDiffAlgebra::apply_functional(const Coords& row, const LocalElem& v) const {
    auto c = v.coords_in(*alg_);
    FieldElem r;
    for (size_t j = 0; j < row.size(); ++j)
        if (row[j] != 0) r = r + c[j] * FieldElem(row[j]);
    return r;
}

bool LocalDiffAlgebra::in_power(const LocalElem& v, int i) const {
    for (int lvl = 0; lvl < i && lvl < nu_; ++lvl)
        for (auto& row : lambda_[lvl])
            if (!apply_functional(row, v).is_zero()) return false;
    return true;
}

// --- factor extraction -----------------------------------------------------

FactorView factor_view(const FiniteAlgebra::Ptr& alg, int factor, FieldConfig fc) {
    const LocalDecomposition& dec = alg->decomposition();
    if (factor < 0 || factor >= dec.factors())
        throw std::out_of_range("factor_view: no local factor " + std::to_string(factor));
    const Coords& u = dec.idempotents[factor];
    // full basis of the maximal ideal: close the generators under products
    linalg::Mat span = linalg::row_basis(dec.nilpotents[factor]);
    for (;;) {
        linalg::Mat next = span;
        for (auto& g : dec.nilpotents[factor])
            for (auto& b : span) next.push_back(alg->multiply(g, b));
        next = linalg::row_basis(std::move(next));
        if (next.size() == span.size()) break;
        span = std::move(next);
    }
    linalg::Mat basis{u};
    for (auto& v : span) basis.push_back(v);
    int fd = (int)basis.size(), n = alg->dim();
    linalg::Mat bt = transpose(basis);
    auto coords_of = [&](const Coords& v) {
        auto x = linalg::solve(bt, v);
        if (!x) throw std::logic_error("factor_view: element outside the factor span");
        return *x;
    };
    std::vector<std::vector<Coords>> c(fd, std::vector<Coords>(fd));
    for (int p = 0; p < fd; ++p)
        for (int q = 0; q < fd; ++q)
            c[p][q] = coords_of(alg->multiply(basis[p], basis[q]));
    Coords e0(fd, 0);
    e0[0] = 1;
    auto local_alg = FiniteAlgebra::from_structure(std::move(c), std::vector<Coords>{e0});
    linalg::Mat project(fd, linalg::Vec(n));
    for (int j = 0; j < n; ++j) {
        Coords ej(n, 0);
        ej[j] = 1;
        Coords col = coords_of(alg->multiply(u, ej));
        for (int r = 0; r < fd; ++r) project[r][j] = col[r];
    }
    return FactorView{LocalDiffAlgebra(local_alg, fc), std::move(project), std::move(basis)};
}

LocalElem FactorView::project_elem(const LocalElem& v, const FiniteAlgebra& parent) const {
    auto vb = v.coords_in(parent);
    std::vector<FieldElem> r(project.size());
    for (size_t i = 0; i < project.size(); ++i)
        for (size_t j = 0; j < vb.size(); ++j)
            if (project[i][j] != 0) r[i] = r[i] + vb[j] * FieldElem(project[i][j]);
    return LocalElem(local.algebra(), std::move(r));
}

std::vector<FieldElem> FactorView::inject_coords(const LocalElem& v) const {
    auto vf = v.coords_in(*local.algebra());
    std::vector<FieldElem> r(inject.empty() ? 0 : inject[0].size());
    for (size_t p = 0; p < inject.size(); ++p)
        for (size_t j = 0; j < r.size(); ++j)
            if (inject[p][j] != 0) r[j] = r[j] + vf[p] * FieldElem(inject[p][j]);
    return r;
}

// --- linearization ---------------------------------------------------------

PolyQ assemble_linearization(const PolyR& f, const LocalDiffAlgebra& R, const LiftState& state,
                             int k) {
    LocalElem fb = f.evaluate_at_point({state.b});
    if (state.level > 0 && !R.in_power(fb, state.level)) {
        // jet-mode approximations satisfy the filtration only up to truncation
        if (state.enforce_filtration) throw NotInFiltration(state.level);
    }
    PolyQ l(R.apply_functional(state.lambda.at(k), fb));
    for (const AlgIndet& u : f.indeterminates()) {
        if (u.var != 1)
            throw std::invalid_argument("assemble_linearization: single-variable systems only");
        LocalElem val = f.partial(u).evaluate_at_point({state.b});
        FieldElem c = R.res(val);
        if (!c.is_zero()) l.add_term(Monomial{}.times(AlgIndet{1, u.theta}, 1), c);
    }
    return l;
}

// --- linear autoreduction --------------------------------------------------

namespace {

// leading coefficient of a linear polynomial (coefficient of its leader)
FieldElem lead_coeff(const PolyQ& p) { return p.terms().rbegin()->second; }

PolyQ make_monic(const PolyQ& p) {
    if (p.in_ring()) return p;
    return p * lead_coeff(p).inverse();
}

}  // namespace

std::vector<PolyQ> linear_autoreduce(std::vector<PolyQ> system) {
    std::vector<PolyQ> w;
    for (auto& p : system)
        if (!p.is_zero()) w.push_back(make_monic(p));
    bool changed = true;
    long guard = 100000;
    while (changed) {
        if (--guard < 0) throw std::logic_error("linear_autoreduce: no convergence");
        changed = false;
        for (size_t f = 0; f < w.size() && !changed; ++f) {
            if (w[f].in_ring()) continue;
            AlgIndet vf = w[f].leader();
            for (size_t g = 0; g < w.size() && !changed; ++g) {
                if (g == f) continue;
                // the elementary step eliminates occurrences of the leader of
                // w[f] itself; proper derivatives are absent by precondition
                for (const AlgIndet& u : w[g].indeterminates()) {
                    if (!(u == vf)) continue;
                    FieldElem d = w[g].terms().at(Monomial{}.times(u, 1));
                    w[g] = w[g] - w[f] * d;
                    if (w[g].is_zero())
                        w.erase(w.begin() + g);
                    else
                        w[g] = make_monic(w[g]);
                    changed = true;
                    break;
                }
            }
        }
    }
    // a nonzero constant collapses the whole system
    for (auto& p : w)
        if (p.in_ring() && !p.is_zero()) return {PolyQ(FieldElem(1))};
    std::sort(w.begin(), w.end(), [](const PolyQ& a, const PolyQ& b) {
        return rank_compare(a.leader(), b.leader()) < 0;
    });
    return w;
}

PolyQ linear_reduce(PolyQ p, const std::vector<PolyQ>& gamma) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& g : gamma) {
            if (g.in_ring()) continue;
            AlgIndet vg = g.leader();
            for (const AlgIndet& u : p.indeterminates()) {
                if (u.var != vg.var || !vg.theta.divides(u.theta)) continue;
                DerivOp th = vg.theta.quotient_into(u.theta);
                FieldElem d = p.terms().at(Monomial{}.times(u, 1));
                p = p - g.theta_apply(th) * (d / lead_coeff(g));
                changed = true;
                break;
            }
            if (changed) break;
        }
    }
    return p;
}

// --- solvers ---------------------------------------------------------------

namespace {

void enum_exps(int s, int budget, std::vector<int>& cur, int pos,
               std::vector<std::vector<int>>& out) {
    if (pos == s) {
        out.push_back(cur);
        return;
    }
    for (int k = 0; k <= budget; ++k) {
        cur[pos] = k;
        enum_exps(s, budget - k, cur, pos + 1, out);
    }
    cur[pos] = 0;
}

FieldElem monomial_in_t(const std::vector<int>& e, int s) {
    FieldElem r(1);
    for (int j = 0; j < s; ++j)
        for (int k = 0; k < e[j]; ++k) r = r * FieldElem::t(j + 1, s);
    return r;
}

// substitute t_j -> t_j + p_j
QPoly shift_poly(const QPoly& q, const std::vector<mpq_class>& p, int s) {
    QPoly r;
    for (auto& [e, c] : q.terms()) {
        QPoly term{c};
        for (int j = 0; j < s; ++j) {
            int ej = (int)e.size() > j ? e[j] : 0;
            if (ej == 0) continue;
            QPoly::Exps one(j + 1, 0);
            one[j] = 1;
            QPoly base = QPoly::monomial(mpq_class(1), one) + QPoly(p[j]);
            for (int k = 0; k < ej; ++k) term = term * base;
        }
        r = r + term;
    }
    return r;
}

int total_deg_exps(const QPoly::Exps& e) {
    int d = 0;
    for (int x : e) d += x;
    return d;
}

struct LinearRow {
    std::vector<FieldElem> a;  // per unknown
    FieldElem w;               // inhomogeneous part
};

// one row per equation of gamma, in the unknowns' ansatz
std::vector<LinearRow> build_rows(const std::vector<PolyQ>& gamma,
                                  const std::vector<FieldElem>& ansatz_terms) {
    std::vector<LinearRow> rows;
    for (auto& eq : gamma) {
        LinearRow row;
        row.w = eq.terms().count(Monomial{}) ? eq.terms().at(Monomial{}) : FieldElem();
        for (auto& term : ansatz_terms) {
            FieldElem acc;
            for (auto& [m, c] : eq.terms()) {
                if (m.empty()) continue;
                const AlgIndet& u = m.factors[0].first;
                FieldElem v = term;
                for (size_t j = 0; j < u.theta.e.size(); ++j)
                    for (int k = 0; k < u.theta.e[j]; ++k) v = v.derive((int)j + 1);
                acc = acc + c * v;
            }
            row.a.push_back(acc);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

LinearSolution solve_linear(const std::vector<PolyQ>& gamma, const FieldConfig& fc,
                            const SolverStrategy& strategy) {
    for (auto& p : gamma)
        if (p.in_ring() && !p.is_zero()) throw ProvenInconsistent();
    if (gamma.empty()) return {FieldElem(), true};

    int s = fc.s;
    bool jet = strategy.kind == SolverStrategy::Kind::Jet;
    if (jet && (int)strategy.point.size() != s)
        throw std::invalid_argument("jet solver: expansion point has wrong dimension");

    // ansatz terms: monomials in t (shifted to the expansion point for jets)
    std::vector<std::vector<int>> exps;
    std::vector<int> cur(s, 0);
    enum_exps(s, strategy.bound, cur, 0, exps);
    std::vector<FieldElem> terms;
    for (auto& e : exps) {
        if (!jet) {
            terms.push_back(monomial_in_t(e, s));
        } else {
            FieldElem m(1);
            for (int j = 0; j < s; ++j)
                for (int k = 0; k < e[j]; ++k)
                    m = m * (FieldElem::t(j + 1, s) - FieldElem(strategy.point[j]));
            terms.push_back(m);
        }
    }
    auto rows = build_rows(gamma, terms);

    int max_order = 0;
    for (auto& eq : gamma)
        for (const AlgIndet& u : eq.indeterminates())
            max_order = std::max(max_order, u.theta.order());

    linalg::Mat A;
    linalg::Vec rhs;
    for (auto& row : rows) {
        // clear denominators of the whole equation
        QPoly den{mpq_class(1)};
        for (auto& a : row.a) den = den * a.den();
        den = den * row.w.den();
        if (jet) {
            mpq_class dp = den.eval(strategy.point);
            if (dp == 0) throw SingularPoint();
        }
        std::vector<QPoly> nums;
        for (auto& a : row.a) {
            FieldElem cleared = a * FieldElem(den, QPoly(mpq_class(1)));
            nums.push_back(cleared.num());
        }
        QPoly wn = (row.w * FieldElem(den, QPoly(mpq_class(1)))).num();
        if (jet) {
            for (auto& n : nums) n = shift_poly(n, strategy.point, s);
            wn = shift_poly(wn, strategy.point, s);
        }
        int cutoff = jet ? std::max(strategy.bound - max_order, 0) : -1;
        std::map<QPoly::Exps, size_t> keyidx;
        auto keys_of = [&](const QPoly& q) {
            for (auto& [e, c] : q.terms()) {
                if (jet && total_deg_exps(e) > cutoff) continue;
                keyidx.emplace(e, keyidx.size());
            }
        };
        for (auto& n : nums) keys_of(n);
        keys_of(wn);
        size_t base = A.size();
        A.resize(base + keyidx.size(), linalg::Vec(terms.size(), 0));
        rhs.resize(base + keyidx.size(), 0);
        for (auto& [e, idx] : keyidx) {
            for (size_t col = 0; col < nums.size(); ++col) {
                auto it = nums[col].terms().find(e);
                if (it != nums[col].terms().end()) A[base + idx][col] = it->second;
            }
            auto it = wn.terms().find(e);
            if (it != wn.terms().end()) rhs[base + idx] = -it->second;
        }
    }
    if (A.empty()) return {FieldElem(), !jet};  // every equation is identically zero
    auto x = linalg::solve(std::move(A), std::move(rhs));
    if (!x) throw NoSolutionFoundAtBound(strategy.bound);
    FieldElem y;
    for (size_t i = 0; i < terms.size(); ++i)
        if ((*x)[i] != 0) y = y + terms[i] * FieldElem((*x)[i]);
    return {y, !jet};
}

// --- the lift --------------------------------------------------------------

namespace {

FieldElem res_coeff(const LocalDiffAlgebra& R, const LocalElem& c) { return R.res(c); }

}  // namespace

LiftResult lift(const std::vector<PolyR>& lambda_set, const FieldElem& a,
                const LocalDiffAlgebra& R, const SolverStrategy& solver) {
    LiftResult out;
    out.exact = solver.kind == SolverStrategy::Kind::ExactAnsatz;

    // residue image and preconditions
    std::vector<PolyQ> res_polys;
    for (auto& f : lambda_set)
        res_polys.push_back(
            f.map_coeffs<FieldElem>([&](const LocalElem& c) { return res_coeff(R, c); }));
    AutoreducedSet set0 = [&] {
        try {
            return AutoreducedSet::validate(res_polys);
        } catch (const NotAutoreduced& e) {
            throw PreconditionFailed(std::string("residue image is not autoreduced: ") +
                                     e.what());
        }
    }();
    if (!check_coherent(set0).coherent())
        throw PreconditionFailed("residue image is not coherent");
    for (auto& f0 : set0.elements())
        if (!f0.evaluate_at_point({a}).is_zero())
            throw PreconditionFailed("res(f)(a) != 0 for " + f0.str());
    if (set0.H().evaluate_at_point({a}).is_zero())
        throw PreconditionFailed("res(H)(a) = 0: the root is singular");

    LocalElem b = R.embed(a);
    int nu = R.nilpotency_index();
    for (int i = 1; i < nu; ++i) {
        LiftState state{i, b, R.graded(i), R.lambda(i), out.exact};
        for (size_t k = 0; k < state.graded.size(); ++k) {
            std::vector<PolyQ> sys;
            for (auto& f : lambda_set)
                sys.push_back(assemble_linearization(f, R, state, (int)k));
            auto gamma = linear_autoreduce(std::move(sys));
            FieldElem y;
            try {
                auto sol = solve_linear(gamma, R.config(), solver);
                y = sol.y;
                if (!sol.exact) out.exact = false;
            } catch (const NoSolutionFoundAtBound& e) {
                throw SolverFailed(i, e.what());
            } catch (const ProvenInconsistent& e) {
                throw SolverFailed(i, std::string(e.what()) +
                                          " (incoherent input or singular expansion point)");
            } catch (const SingularPoint& e) {
                throw SolverFailed(i, e.what());
            }
            b = b + R.basis_elem(state.graded[k]) * LocalElem(y);
        }
        out.trace.push_back("level " + std::to_string(i) + ": corrected " +
                            std::to_string(state.graded.size()) + " graded coordinates");
    }
    if (out.exact) {
        for (auto& f : lambda_set)
            if (!f.evaluate_at_point({b}).is_zero())
                throw SolverFailed(nu, "lift verification failed for " +
                                           f.str([](int) { return std::string("x"); }));
        if (R.res(b) != a) throw SolverFailed(nu, "residue of the lift is not a");
    }
    out.b = b;
    return out;
}

LiftResult lift_nonlocal(const std::vector<PolyR>& lambda_set, const FieldElem& a,
                         const FiniteAlgebra::Ptr& alg, FieldConfig fc,
                         const SolverStrategy& solver) {
    const LocalDecomposition& dec = alg->decomposition();
    std::vector<FieldElem> coords(alg->dim());
    bool exact = true;
    std::vector<std::string> trace;
    for (int i = 0; i < dec.factors(); ++i) {
        FactorView fv = factor_view(alg, i, fc);
        std::vector<PolyR> proj;
        for (auto& f : lambda_set)
            proj.push_back(f.map_coeffs<LocalElem>(
                [&](const LocalElem& c) { return fv.project_elem(c, *alg); }));
        try {
            LiftResult r = lift(proj, a, fv.local, solver);
            exact = exact && r.exact;
            auto add = fv.inject_coords(r.b);
            for (size_t j = 0; j < coords.size(); ++j) coords[j] = coords[j] + add[j];
            trace.push_back("factor " + std::to_string(i) + ": lifted");
        } catch (const PreconditionFailed& e) {
            throw PreconditionFailed("factor " + std::to_string(i) + ": " + e.what());
        } catch (const SolverFailed& e) {
            throw SolverFailed(e.level, "factor " + std::to_string(i) + ": " + e.what());
        }
    }
    LiftResult out{LocalElem(alg, std::move(coords)), exact, std::move(trace)};
    if (exact) {
        for (auto& f : lambda_set)
            if (!f.evaluate_at_point({out.b}).is_zero())
                throw SolverFailed(0, "reassembled lift fails verification");
    }
    return out;
}

}  // namespace ddh
