#include "ddh/finitealg.hpp"

#include <algorithm>

#include "ddh/ratlinalg.hpp"

namespace ddh {

namespace {

using Mat = linalg::Mat;
using linalg::kernel;
using linalg::row_basis;
using linalg::rref;
using linalg::solve;

bool all_zero(const Coords& v) {
    return std::all_of(v.begin(), v.end(), [](const mpq_class& x) { return x == 0; });
}

}  // namespace

Coords FiniteAlgebra::multiply(const Coords& a, const Coords& b) const {
    int n = dim();
    Coords r(n, 0);
    for (int j = 0; j < n; ++j) {
        if (a[j] == 0) continue;
        for (int k = 0; k < n; ++k) {
            if (b[k] == 0) continue;
            mpq_class f = a[j] * b[k];
            for (int s = 0; s < n; ++s) r[s] += f * c_[j][k][s];
        }
    }
    return r;
}

namespace {
// trace of multiplication by x on B
mpq_class mult_trace(const std::vector<std::vector<Coords>>& c, const Coords& x) {
    mpq_class tr = 0;
    size_t n = x.size();
    for (size_t r = 0; r < n; ++r)
        for (size_t k = 0; k < n; ++k)
            if (x[k] != 0) tr += x[k] * c[k][r][r];
    return tr;
}
}  // namespace

void FiniteAlgebra::validate() const {
    int n = dim();
    if (n == 0) throw std::invalid_argument("FiniteAlgebra: empty basis");
    for (auto& row : c_) {
        if ((int)row.size() != n) throw std::invalid_argument("FiniteAlgebra: ragged table");
        for (auto& e : row)
            if ((int)e.size() != n) throw std::invalid_argument("FiniteAlgebra: ragged table");
    }
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (c_[j][k] != c_[k][j])
                throw std::invalid_argument("FiniteAlgebra: product not commutative");
            // pi = coordinate 0 must be multiplicative on the basis
            mpq_class want = (j == 0 && k == 0) ? 1 : 0;
            if (c_[j][k][0] != want)
                throw std::invalid_argument(
                    "FiniteAlgebra: coordinate 0 is not the distinguished projection");
        }
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                Coords ej(n, 0), ek(n, 0), el(n, 0);
                ej[j] = 1;
                ek[k] = 1;
                el[l] = 1;
                if (multiply(multiply(ej, ek), el) != multiply(ej, multiply(ek, el)))
                    throw std::invalid_argument("FiniteAlgebra: product not associative");
            }
}

FiniteAlgebra::Ptr FiniteAlgebra::from_structure(
    std::vector<std::vector<Coords>> c, const std::optional<std::vector<Coords>>& hints) {
    auto alg = std::make_shared<FiniteAlgebra>();
    alg->c_ = std::move(c);
    alg->validate();
    int n = alg->dim();
    // identity element: solve e * eps_j = eps_j for all j
    Mat a(n * n, Coords(n, 0));
    Coords b(n * n, 0);
    for (int j = 0; j < n; ++j)
        for (int r = 0; r < n; ++r) {
            for (int k = 0; k < n; ++k) a[j * n + r][k] = alg->c_[k][j][r];
            b[j * n + r] = (j == r) ? 1 : 0;
        }
    auto e = solve(std::move(a), std::move(b));
    if (!e) throw std::invalid_argument("FiniteAlgebra: no identity element");
    alg->one_ = *e;
    if (hints) alg->dec_ = alg->decompose_from_hints(*hints);
    return alg;
}

FiniteAlgebra::Ptr FiniteAlgebra::product(const std::vector<int>& factor_dims) {
    if (factor_dims.empty()) throw std::invalid_argument("FiniteAlgebra: no factors");
    int n = 0;
    for (int d : factor_dims) {
        if (d < 1) throw std::invalid_argument("FiniteAlgebra: factor dimension must be >= 1");
        n += d;
    }
    std::vector<std::vector<Coords>> c(n, std::vector<Coords>(n, Coords(n, 0)));
    LocalDecomposition dec;
    int off = 0;
    for (int d : factor_dims) {
        // basis of this factor: eta^0 .. eta^(d-1)
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                if (a + b < d) c[off + a][off + b][off + a + b] = 1;
        Coords u(n, 0), piv(n, 0);
        u[off] = 1;
        piv[off] = 1;
        dec.idempotents.push_back(u);
        dec.pi.push_back(piv);
        std::vector<Coords> gens;
        if (d > 1) {
            Coords g(n, 0);
            g[off + 1] = 1;
            gens.push_back(g);
        }
        dec.nilpotents.push_back(std::move(gens));
        dec.index.push_back(d);
        off += d;
    }
    auto alg = std::make_shared<FiniteAlgebra>();
    alg->c_ = std::move(c);
    alg->validate();
    alg->one_ = Coords(n, 0);
    off = 0;
    for (int d : factor_dims) {
        alg->one_[off] = 1;
        off += d;
    }
    alg->form_ = factor_dims;
    alg->dec_ = std::move(dec);
    return alg;
}

LocalDecomposition FiniteAlgebra::decompose(
    const std::optional<std::vector<Coords>>& hints) const {
    if (hints) return decompose_from_hints(*hints);
    if (dec_) return *dec_;
    throw IdempotentsRequired();
}

LocalDecomposition FiniteAlgebra::decompose_from_hints(const std::vector<Coords>& hints) const {
    int n = dim();
    size_t t1 = hints.size();
    if (t1 == 0) throw InvalidIdempotents("empty idempotent list");
    for (auto& u : hints) {
        if ((int)u.size() != n) throw InvalidIdempotents("idempotent of wrong dimension");
        if (multiply(u, u) != u) throw InvalidIdempotents("element is not idempotent");
        if (all_zero(u)) throw InvalidIdempotents("zero idempotent");
    }
    Coords sum(n, 0);
    for (size_t i = 0; i < t1; ++i) {
        for (size_t j = i + 1; j < t1; ++j)
            if (!all_zero(multiply(hints[i], hints[j])))
                throw InvalidIdempotents("idempotents are not orthogonal");
        for (int k = 0; k < n; ++k) sum[k] += hints[i][k];
    }
    if (sum != one_) throw InvalidIdempotents("idempotents do not sum to 1");

    LocalDecomposition dec;
    dec.idempotents = hints;
    for (auto& u : dec.idempotents) {
        // pi_i(x) = tr(mult by x*u_i) / dim(u_i B): the nilpotent part of the
        // local factor is trace-free and u_i acts as its identity.
        mpq_class di = mult_trace(c_, u);
        if (di <= 0 || di.get_den() != 1)
            throw InvalidIdempotents("factor has non-integral dimension");
        Coords piv(n);
        for (int j = 0; j < n; ++j) {
            Coords ej(n, 0);
            ej[j] = 1;
            piv[j] = mult_trace(c_, multiply(ej, u)) / di;
        }
        dec.pi.push_back(std::move(piv));
    }
    // each pi_i must be a ring homomorphism (residue field = Q)
    for (auto& piv : dec.pi)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                mpq_class lhs = 0;
                for (int r = 0; r < n; ++r) lhs += c_[j][k][r] * piv[r];
                if (lhs != piv[j] * piv[k])
                    throw InvalidIdempotents(
                        "a factor's residue map is not a ring homomorphism; the factor is "
                        "not local with residue field Q");
            }
    // the factor realizing the distinguished projection comes first
    Coords pi0(n, 0);
    pi0[0] = 1;
    auto it = std::find(dec.pi.begin(), dec.pi.end(), pi0);
    if (it == dec.pi.end())
        throw InvalidIdempotents("no factor realizes the distinguished projection");
    size_t i0 = (size_t)(it - dec.pi.begin());
    std::swap(dec.pi[0], dec.pi[i0]);
    std::swap(dec.idempotents[0], dec.idempotents[i0]);

    // maximal ideal of each factor: span of u_i*eps_j - pi_i(eps_j)*u_i
    for (size_t i = 0; i < t1; ++i) {
        Mat cand;
        for (int j = 0; j < n; ++j) {
            Coords ej(n, 0);
            ej[j] = 1;
            Coords v = multiply(dec.idempotents[i], ej);
            for (int k = 0; k < n; ++k) v[k] -= dec.pi[i][j] * dec.idempotents[i][k];
            if (!all_zero(v)) cand.push_back(std::move(v));
        }
        Mat gens = row_basis(std::move(cand));
        // nilpotency index: smallest power of the ideal that vanishes
        int idx = 1;
        Mat power = gens;
        while (!power.empty()) {
            if (idx > n)
                throw InvalidIdempotents("factor is not local: its ideal is not nilpotent");
            Mat next;
            for (auto& g : gens)
                for (auto& b : power) next.push_back(multiply(g, b));
            power = row_basis(std::move(next));
            ++idx;
        }
        dec.nilpotents.push_back(std::move(gens));
        dec.index.push_back(idx);
    }
    // radical check: the joint kernel of the residue maps is exactly the
    // direct sum of the maximal ideals, and it is nilpotent
    Mat pimat = dec.pi;
    Mat rad = kernel(std::move(pimat));
    Mat allgens;
    for (auto& g : dec.nilpotents)
        for (auto& v : g) allgens.push_back(v);
    Mat span = row_basis(allgens);
    if (span.size() != rad.size())
        throw InvalidIdempotents("radical does not split along the given idempotents");
    int nu = dec.global_index();
    for (auto& v : rad) {
        Coords p = v;
        for (int k = 1; k < nu; ++k) p = multiply(p, v);
        if (!all_zero(p)) throw InvalidIdempotents("radical element is not nilpotent");
    }
    return dec;
}

}  // namespace ddh
