#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ddh/hensel.hpp"

using namespace ddh;

namespace {

const FieldConfig FC{1, 1};   // one derivation d/dt over Q(t)
const FieldConfig FC0{0, 0};  // no derivations, plain rationals

FieldElem t1() { return FieldElem::t(1, 1); }
FieldElem q(long n, long d = 1) { return FieldElem(mpq_class(n, d)); }

PolyQ yq(std::vector<int> e) {
    if (e.empty()) e = {0};
    return PolyQ::indet(AlgIndet{1, DerivOp{std::move(e)}}, FieldElem(1));
}

PolyR xr(std::vector<int> e) {
    if (e.empty()) e = {0};
    return PolyR::indet(AlgIndet{1, DerivOp{std::move(e)}}, LocalElem(FieldElem(1)));
}

LocalElem eps(const FiniteAlgebra::Ptr& alg, int j) {
    std::vector<FieldElem> c(alg->dim());
    c[j] = FieldElem(1);
    return LocalElem(alg, std::move(c));
}

PolyR random_polyr(std::mt19937& rng, const FiniteAlgebra::Ptr& alg) {
    std::uniform_int_distribution<int> nterms(1, 4), nfac(0, 2), ord(0, 2), deg(1, 2),
        coef(-3, 3), kind(0, 3);
    PolyR p;
    for (int t = 0, n = nterms(rng); t < n; ++t) {
        Monomial m;
        for (int f = 0, nf = nfac(rng); f < nf; ++f)
            m = m.times(AlgIndet{1, DerivOp{{ord(rng)}}}, deg(rng));
        FieldElem c(coef(rng));
        if (kind(rng) == 0) c = c * t1();
        LocalElem lc(c);
        if (kind(rng) == 1) lc = lc + eps(alg, 1) * LocalElem(FieldElem(coef(rng)));
        if (!lc.is_zero()) p.add_term(m, lc);
    }
    return p;
}

}  // namespace

TEST_CASE("coefficients over a local algebra: promotion and arithmetic") {
    auto B = FiniteAlgebra::product({2});
    LocalElem s(t1());
    CHECK(s.is_scalar());
    LocalElem e1 = eps(B, 1);
    LocalElem mixed = s + e1;  // t + eps
    REQUIRE(!mixed.is_scalar());
    CHECK(mixed.coords() == std::vector<FieldElem>{t1(), q(1)});
    CHECK(e1 * e1 == LocalElem(q(0)));        // eps^2 = 0
    CHECK(mixed * mixed ==
          LocalElem(B, {t1() * t1(), q(2) * t1()}));  // (t+eps)^2 = t^2 + 2t eps
    CHECK(mixed.derive(1) == LocalElem(B, {q(1), q(0)}));
    CHECK(mixed - e1 == LocalElem(B, {t1(), q(0)}));
    CHECK(LocalElem(q(3)) * e1 == LocalElem(B, {q(0), q(3)}));

    auto C3 = FiniteAlgebra::product({3});
    LocalElem n = eps(C3, 1);
    CHECK(n * n == eps(C3, 2));
    CHECK(n * n * n == LocalElem(q(0)));
}

TEST_CASE("graded filtration of a local differential algebra") {
    LocalDiffAlgebra R(FiniteAlgebra::product({3}), FC);
    CHECK(R.nilpotency_index() == 3);
    REQUIRE(R.graded(0).size() == 1);
    REQUIRE(R.graded(1).size() == 1);
    REQUIRE(R.graded(2).size() == 1);
    CHECK(R.graded(1)[0] == Coords{0, 1, 0});
    CHECK(R.graded(2)[0] == Coords{0, 0, 1});

    LocalElem v(R.algebra(), {t1(), q(2), q(0)});
    CHECK(R.res(v) == t1());
    CHECK(R.res(LocalElem(q(5))) == q(5));
    CHECK(R.apply_functional(R.lambda(1)[0], v) == q(2));
    CHECK(R.in_power(v, 0));
    CHECK(!R.in_power(v, 1));
    CHECK(R.in_power(v - R.embed(t1()), 1));
    CHECK(!R.in_power(v - R.embed(t1()), 2));
    CHECK(R.in_power(R.basis_elem(R.graded(2)[0]), 2));
    CHECK(R.embed(t1()).coords() == std::vector<FieldElem>{t1(), q(0), q(0)});
}

TEST_CASE("linearization: worked examples") {
    LocalDiffAlgebra R(FiniteAlgebra::product({2}), FC);
    // f = x dx - t - eps at b1 = t: l_f(y) = -1 + y + t dy
    PolyR f = xr({}) * xr({1}) - PolyR(LocalElem(t1())) - PolyR(eps(R.algebra(), 1));
    LiftState st{1, R.embed(t1()), R.graded(1), R.lambda(1), true};
    PolyQ l = assemble_linearization(f, R, st, 0);
    CHECK(l == yq({}) + PolyQ(t1()) * yq({1}) - PolyQ(q(1)));
    // same leader as f, separant res(S_f)(a) = t
    CHECK(l.leader() == f.leader());
    CHECK(l.separant() == PolyQ(t1()));

    // linear monic g = dx - c: l_g = lambda(g(b1)) + dy
    PolyR g = xr({1}) - PolyR(LocalElem(q(1)) + eps(R.algebra(), 1) * LocalElem(q(4)));
    PolyQ lg = assemble_linearization(g, R, st, 0);
    CHECK(lg == yq({1}) - PolyQ(q(4)));

    // value outside the filtration
    PolyR h = xr({}) - PolyR(LocalElem(q(1)));  // h(t) = t - 1, not in m
    CHECK_THROWS_AS(assemble_linearization(h, R, st, 0), NotInFiltration);
}

TEST_CASE("linearization commutes with the derivations") {
    LocalDiffAlgebra R(FiniteAlgebra::product({2}), FC);
    LiftState st{1, R.embed(t1()), R.graded(1), R.lambda(1), true};
    std::mt19937 rng(20260823);
    int done = 0;
    for (int it = 0; it < 60 && done < 25; ++it) {
        PolyR f = random_polyr(rng, R.algebra());
        // normalize so that f(b1) lies in the maximal ideal
        f = f - PolyR(LocalElem(R.res(f.evaluate_at_point({st.b}))));
        if (f.in_ring()) continue;
        PolyQ lhs = assemble_linearization(f.apply_derivation(1), R, st, 0);
        PolyQ rhs = assemble_linearization(f, R, st, 0).apply_derivation(1);
        CHECK(lhs == rhs);
        ++done;
    }
    CHECK(done == 25);
}

TEST_CASE("linearization of a product: l_{gf} = res(g)(a) * l_f") {
    LocalDiffAlgebra R(FiniteAlgebra::product({2}), FC);
    LiftState st{1, R.embed(t1()), R.graded(1), R.lambda(1), true};
    PolyR f = xr({}) * xr({1}) - PolyR(LocalElem(t1())) - PolyR(eps(R.algebra(), 1));
    std::mt19937 rng(424242);
    int done = 0;
    for (int it = 0; it < 40 && done < 15; ++it) {
        PolyR g = random_polyr(rng, R.algebra());
        if (g.is_zero()) continue;
        FieldElem ga = R.res(g.evaluate_at_point({st.b}));
        PolyQ lhs = assemble_linearization(g * f, R, st, 0);
        PolyQ rhs = assemble_linearization(f, R, st, 0) * ga;
        CHECK(lhs == rhs);
        ++done;
    }
    CHECK(done == 15);
}

TEST_CASE("linear autoreduction") {
    // {y + dy, dy} -> {y, dy}
    auto g1 = linear_autoreduce({yq({}) + yq({1}), yq({1})});
    CHECK(g1 == std::vector<PolyQ>{yq({}), yq({1})});
    // already autoreduced input is unchanged
    auto g2 = linear_autoreduce({yq({}) - PolyQ(t1())});
    CHECK(g2 == std::vector<PolyQ>{yq({}) - PolyQ(t1())});
    // {2dy - 1, y + dy} -> {y + 1/2, dy - 1/2}
    auto g3 = linear_autoreduce({yq({1}) * q(2) - PolyQ(q(1)), yq({}) + yq({1})});
    CHECK(g3 == std::vector<PolyQ>{yq({}) + PolyQ(q(1, 2)), yq({1}) - PolyQ(q(1, 2))});
    // a contradiction collapses to the constant 1
    auto g4 = linear_autoreduce({yq({}), yq({}) - PolyQ(q(1))});
    CHECK(g4 == std::vector<PolyQ>{PolyQ(q(1))});
    // reduction against an autoreduced set
    CHECK(linear_reduce(yq({2}), {yq({1}) - yq({})}) == yq({}));
    CHECK(linear_reduce(yq({1}) + PolyQ(t1()), {yq({1}) - PolyQ(q(1))}) ==
          PolyQ(t1() + q(1)));
}

TEST_CASE("autoreduced linear systems are coherent") {
    // two commuting derivations: {d1 y - 1, d2 y} closes at d1 d2 y
    PolyQ a = PolyQ::indet(AlgIndet{1, DerivOp{{1, 0}}}, FieldElem(1)) - PolyQ(q(1));
    PolyQ b = PolyQ::indet(AlgIndet{1, DerivOp{{0, 1}}}, FieldElem(1));
    auto gamma = linear_autoreduce({a + b * q(2), b});
    CHECK(gamma == std::vector<PolyQ>{a, b});
    CHECK(check_coherent(AutoreducedSet::validate(gamma)).coherent());
    auto g2 = linear_autoreduce({yq({1}) - yq({}) * q(3)});
    CHECK(check_coherent(AutoreducedSet::validate(g2)).coherent());
}

TEST_CASE("linear solver: exact ansatz and jets") {
    // {y + t dy - 1}, D=0 -> y = 1
    auto s1 = solve_linear({yq({}) + PolyQ(t1()) * yq({1}) - PolyQ(q(1))}, FC,
                           SolverStrategy::exact_ansatz(0));
    CHECK(s1.y == q(1));
    CHECK(s1.exact);
    // {dy - 1}, D=1 -> y = t (constant term zeroed canonically)
    auto s2 = solve_linear({yq({1}) - PolyQ(q(1))}, FC, SolverStrategy::exact_ansatz(1));
    CHECK(s2.y == t1());
    // homogeneous {dy - y}: the canonical particular solution zeroes every free
    // coefficient, so both modes settle on y = 0
    auto s3 = solve_linear({yq({1}) - yq({})}, FC, SolverStrategy::exact_ansatz(4));
    CHECK(s3.y == q(0));
    auto s4 = solve_linear({yq({1}) - yq({})}, FC, SolverStrategy::jet({0}, 3));
    CHECK(s4.y == q(0));
    CHECK(!s4.exact);
    // jet mode reaches polynomial solutions too; the canonical choice zeroes
    // the constant coefficient of the shifted basis, so y = (t-1) here
    auto s5 = solve_linear({yq({1}) - PolyQ(q(1))}, FC, SolverStrategy::jet({1}, 2));
    CHECK(s5.y == t1() - q(1));
    // a nonzero constant equation is a proven contradiction
    CHECK_THROWS_AS(solve_linear({PolyQ(q(1))}, FC, SolverStrategy::exact_ansatz(2)),
                    ProvenInconsistent);
    // unsolvable within the degree bound
    CHECK_THROWS_AS(solve_linear({PolyQ(t1()) * yq({1}) - PolyQ(q(1))}, FC,
                                 SolverStrategy::exact_ansatz(3)),
                    NoSolutionFoundAtBound);
    // pole at the expansion point
    CHECK_THROWS_AS(solve_linear({yq({1}) * (q(1) / t1()) - PolyQ(q(1))}, FC,
                                 SolverStrategy::jet({0}, 2)),
                    SingularPoint);
}

TEST_CASE("lift: worked examples") {
    // L = Q(t), R = L[eps]/(eps^2), Lambda = {x dx - t - eps}, a = t -> b = t + eps
    LocalDiffAlgebra R(FiniteAlgebra::product({2}), FC);
    PolyR f = xr({}) * xr({1}) - PolyR(LocalElem(t1())) - PolyR(eps(R.algebra(), 1));
    auto r = lift({f}, t1(), R, SolverStrategy::exact_ansatz(2));
    CHECK(r.exact);
    CHECK(r.b.coords() == std::vector<FieldElem>{t1(), q(1)});
    CHECK(f.evaluate_at_point({r.b}).is_zero());
    CHECK(R.res(r.b) == t1());
    CHECK(!r.trace.empty());

    // degenerate Delta = {}: R = Q[eps]/(eps^2), Lambda = {x^2 - (1+eps)}, a = 1
    LocalDiffAlgebra R2(FiniteAlgebra::product({2}), FC0);
    PolyR g = xr({}) * xr({}) - PolyR(LocalElem(q(1)) + eps(R2.algebra(), 1));
    auto r2 = lift({g}, q(1), R2, SolverStrategy::exact_ansatz(0));
    CHECK(r2.b.coords() == std::vector<FieldElem>{q(1), q(1, 2)});
    CHECK(g.evaluate_at_point({r2.b}).is_zero());

    // R = Q[eps]/(eps^3): second correction -> b = 1 + eps/2 - eps^2/8
    LocalDiffAlgebra R3(FiniteAlgebra::product({3}), FC0);
    PolyR h = xr({}) * xr({}) - PolyR(LocalElem(q(1)) + eps(R3.algebra(), 1));
    auto r3 = lift({h}, q(1), R3, SolverStrategy::exact_ansatz(0));
    CHECK(r3.b.coords() == std::vector<FieldElem>{q(1), q(1, 2), q(-1, 8)});
    CHECK(h.evaluate_at_point({r3.b}).is_zero());
}

TEST_CASE("lift: precondition diagnostics") {
    LocalDiffAlgebra R(FiniteAlgebra::product({2}), FC);
    PolyR f = xr({}) * xr({1}) - PolyR(LocalElem(t1())) - PolyR(eps(R.algebra(), 1));
    // a is not a root of the residue system
    CHECK_THROWS_WITH_AS(lift({f}, q(1), R, SolverStrategy::exact_ansatz(2)),
                         doctest::Contains("res(f)(a)"), PreconditionFailed);
    // singular root: H vanishes at a
    PolyR g = xr({}) * xr({});
    CHECK_THROWS_WITH_AS(lift({g}, q(0), R, SolverStrategy::exact_ansatz(2)),
                         doctest::Contains("singular"), PreconditionFailed);
    // residue image fails autoreducedness
    PolyR c = PolyR(LocalElem(t1()));
    CHECK_THROWS_WITH_AS(lift({c}, t1(), R, SolverStrategy::exact_ansatz(2)),
                         doctest::Contains("autoreduced"), PreconditionFailed);
}

TEST_CASE("lift: jet mode agrees with the exact solution and across orders") {
    LocalDiffAlgebra R(FiniteAlgebra::product({2}), FC);
    PolyR f = xr({}) * xr({1}) - PolyR(LocalElem(t1())) - PolyR(eps(R.algebra(), 1));
    auto rj = lift({f}, t1(), R, SolverStrategy::jet({2}, 3));
    CHECK(!rj.exact);
    CHECK(rj.b.coords() == std::vector<FieldElem>{t1(), q(1)});
    CHECK(f.evaluate_at_point({rj.b}).is_zero());
    auto rj2 = lift({f}, t1(), R, SolverStrategy::jet({2}, 5));
    CHECK(rj2.b.coords() == rj.b.coords());
}

TEST_CASE("lift: filtration invariant across levels") {
    // track each partial correction explicitly on a 4-step tower
    LocalDiffAlgebra R(FiniteAlgebra::product({4}), FC0);
    PolyR f = xr({}) * xr({}) - PolyR(LocalElem(q(1)) + eps(R.algebra(), 1));
    auto r = lift({f}, q(1), R, SolverStrategy::exact_ansatz(0));
    CHECK(f.evaluate_at_point({r.b}).is_zero());
    // replay: truncating b to its level-i prefix leaves f(b_i) in m^i
    for (int i = 1; i < R.nilpotency_index(); ++i) {
        std::vector<FieldElem> trunc = r.b.coords();
        for (int j = i + 1; j < R.dim(); ++j) trunc[j] = FieldElem();
        LocalElem bi(R.algebra(), trunc);
        CHECK(R.in_power(f.evaluate_at_point({bi}), i + 1));
    }
}

TEST_CASE("factor views of a decomposed algebra") {
    auto B = FiniteAlgebra::product({2, 1});
    FactorView f0 = factor_view(B, 0, FC);
    FactorView f1 = factor_view(B, 1, FC);
    CHECK(f0.local.dim() == 2);
    CHECK(f1.local.dim() == 1);
    LocalElem v(B, {t1(), q(3), q(7)});
    CHECK(f0.project_elem(v, *B).coords() == std::vector<FieldElem>{t1(), q(3)});
    CHECK(f1.project_elem(v, *B).coords() == std::vector<FieldElem>{q(7)});
    // inject is a section of project
    auto back = f0.inject_coords(f0.project_elem(v, *B));
    CHECK(back == std::vector<FieldElem>{t1(), q(3), q(0)});
    CHECK_THROWS_AS(factor_view(B, 2, FC), std::out_of_range);
}

TEST_CASE("non-local lift across the Jacobson radical") {
    auto B = FiniteAlgebra::product({2, 1});
    // x dx - t - eps with eps the nilpotent of factor 0 (zero in factor 1)
    PolyR f = xr({}) * xr({1}) - PolyR(LocalElem(t1())) - PolyR(eps(B, 1));
    auto r = lift_nonlocal({f}, t1(), B, FC, SolverStrategy::exact_ansatz(2));
    CHECK(r.exact);
    CHECK(r.b.coords() == std::vector<FieldElem>{t1(), q(1), t1()});
    CHECK(f.evaluate_at_point({r.b}).is_zero());

    // single factor: identical to the local lift
    auto Bl = FiniteAlgebra::product({2});
    PolyR fl = xr({}) * xr({1}) - PolyR(LocalElem(t1())) - PolyR(eps(Bl, 1));
    auto rl = lift_nonlocal({fl}, t1(), Bl, FC, SolverStrategy::exact_ansatz(2));
    CHECK(rl.b.coords() == std::vector<FieldElem>{t1(), q(1)});

    // leading coefficient dying in one factor is reported with its index
    LocalElem u0(B, {q(1), q(0), q(0)});
    PolyR bad = PolyR(u0) * xr({1}) - PolyR(LocalElem(q(1)));
    CHECK_THROWS_WITH_AS(lift_nonlocal({bad}, t1(), B, FC, SolverStrategy::exact_ansatz(2)),
                         doctest::Contains("factor 1"), PreconditionFailed);
}
