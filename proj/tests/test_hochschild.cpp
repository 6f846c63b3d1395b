#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <ainf/hochschild.hpp>
#include <doctest.h>

#include <array>
#include <functional>

#include "fixtures.hpp"

using namespace ainf;

namespace {

GradedPreCategory one_object_host(const AInfInstance& amb, int maxlen) {
    return GradedPreCategory(amb, fx::chain_family(maxlen));
}

/// Graded functor with f_1 the identity matrix on every ambient hom.
AInfFunctor strict_functor(const AInfInstance& src, const AInfInstance& tgt, std::vector<int> obj_map) {
    AInfFunctor F(src, tgt, obj_map);
    for (int x = 0; x < src.object_count(); ++x)
        for (int y = 0; y < src.object_count(); ++y) {
            if (!src.is_transversal({x, y})) continue;
            MultilinearOp f1 = F.zero_comp({x, y});
            for (int b = 0; b < src.hom(x, y).dim(); ++b) f1.add_entry({b}, b, Scalar::one(src.field()));
            F.set_comp({x, y}, std::move(f1));
        }
    return F;
}

bool cochains_equal(const GradedPreCategory& C, const HochschildCochain& a, const HochschildCochain& b) {
    if (a.arity != b.arity || a.degree != b.degree) return false;
    auto basis = cc_basis(C, a.arity, a.degree);
    auto va = flatten_cochain(C, a, basis);
    auto vb = flatten_cochain(C, b, basis);
    for (std::size_t k = 0; k < basis.size(); ++k)
        if (!(va[k] == vb[k])) return false;
    return true;
}

Vec unit_vec(Field f, int i) { return Vec{{i, Scalar::one(f)}}; }

}  // namespace

TEST_CASE("differential matches the hand-expanded low-arity formula") {
    Field q = Field::rationals();
    GradedPreCategory C = one_object_host(fx::dual_numbers(q), 4);
    const GradedSpace& H = C.ambient.hom(0, 0);
    int e = H.index("e"), eps = H.index("eps");

    // derivation eps d/d eps: phi(e) = 0, phi(eps) = eps is closed
    HochschildCochain der = zero_cochain(C, 1, 0);
    der.components.at({0, 0}).add_entry({eps}, eps, Scalar::one(q));
    CHECK(cochain_is_zero(differential(C, der)));

    // psi(e) = e is not: d(psi)(a2,a1) = psi(a2 a1) - psi(a2)a1 - a2 psi(a1)
    HochschildCochain psi = zero_cochain(C, 1, 0);
    psi.components.at({0, 0}).add_entry({e}, e, Scalar::one(q));
    HochschildCochain dpsi = differential(C, psi);
    const MultilinearOp& comp = dpsi.components.at({0, 0, 0});
    Vec at_ee = comp.evaluate({unit_vec(q, e), unit_vec(q, e)});
    CHECK(vec_sub(at_ee, vec_scale(unit_vec(q, e), -Scalar::one(q))).empty());
    Vec at_e_eps = comp.evaluate({unit_vec(q, e), unit_vec(q, eps)});
    CHECK(vec_sub(at_e_eps, vec_scale(unit_vec(q, eps), -Scalar::one(q))).empty());
    Vec at_eps_eps = comp.evaluate({unit_vec(q, eps), unit_vec(q, eps)});
    CHECK(at_eps_eps.empty());

    // arity-0 cochains on a commutative algebra are closed
    for (int b = 0; b < H.dim(); ++b) {
        HochschildCochain c0 = zero_cochain(C, 0, 0);
        c0.components.at({0}).add_entry({}, b, Scalar::one(q));
        CHECK(cochain_is_zero(differential(C, c0)));
    }

    CHECK(cochain_is_zero(differential(C, zero_cochain(C, 2, 0))));
}

TEST_CASE("the differential squares to zero as an exact matrix identity") {
    Field q = Field::rationals(), f5 = Field::prime(5), f3 = Field::prime(3);
    std::vector<GradedPreCategory> hosts;
    hosts.push_back(one_object_host(fx::dual_numbers(q), 6));
    hosts.push_back(one_object_host(fx::dual_numbers(f5, Grading::Z2), 6));
    hosts.push_back(one_object_host(fx::wedge(q), 5));
    hosts.push_back(GradedPreCategory(fx::copies_category(f3, Grading::Z, 6, fx::dual_numbers_spec(), 2),
                                      fx::weakly_increasing_family(2, 4)));
    for (auto& C : hosts) {
        int cap = 0;
        for (auto& s : C.family) cap = std::max(cap, (int)s.size());
        int imax = std::min(3, cap - 2);
        for (int j : cc_degrees(C, imax + 1))
            for (int i = 0; i <= imax; ++i) {
                auto b0 = cc_basis(C, i, j);
                auto b1 = cc_basis(C, i + 1, j);
                auto b2 = cc_basis(C, i + 2, j);
                ExactMatrix d0 = differential_matrix(C, i, j, b0, b1);
                ExactMatrix d1 = differential_matrix(C, i + 1, j, b1, b2);
                CHECK((d1 * d0).is_zero());
            }
    }
}

TEST_CASE("cohomology of the ground field is one class in bidegree (0,0)") {
    GradedPreCategory C = one_object_host(fx::ground_field(Field::rationals()), 6);
    HHTable t = hh_dimensions(C, 4);
    CHECK(t.at({0, 0}).dim == 1);
    CHECK(t.at({0, 0}).final);
    for (int i = 1; i <= 3; ++i) CHECK(t.at({i, 0}).dim == 0);
}

TEST_CASE("dual numbers have the classical Hochschild dimensions") {
    // k[eps]/eps^2: center in arity 0, then one class per arity over Q and
    // two per arity over F_2 (where 2 eps = 0 frees the extra derivation)
    GradedPreCategory Cq = one_object_host(fx::dual_numbers(Field::rationals()), 6);
    HHTable tq = hh_dimensions(Cq, 4);
    CHECK(tq.at({0, 0}).dim == 2);
    for (int i = 1; i <= 3; ++i) CHECK(tq.at({i, 0}).dim == 1);

    GradedPreCategory C2 = one_object_host(fx::dual_numbers(Field::prime(2)), 5);
    HHTable t2 = hh_dimensions(C2, 4);
    CHECK(t2.at({0, 0}).dim == 2);
    for (int i = 1; i <= 3; ++i) CHECK(t2.at({i, 0}).dim == 2);
}

TEST_CASE("singleton-only transversality leaves just the ambient endomorphisms") {
    Field q = Field::rationals();
    GradedPreCategory C(fx::dual_numbers(q), {{0}});
    HHTable t = hh_dimensions(C, 2);
    CHECK(t.at({0, 0}).dim == 2);
    CHECK(t.at({1, 0}).dim == 0);
    CHECK(cc_dimensions(C, 2).at({1, 0}) == 0);
}

TEST_CASE("restriction along the identity functor is the identity") {
    Field q = Field::rationals();
    GradedPreCategory C = one_object_host(fx::dual_numbers(q), 4);
    AInfFunctor id = AInfFunctor::identity(C.ambient);
    HochschildCochain phi = zero_cochain(C, 2, 0);
    auto basis = cc_basis(C, 2, 0);
    for (std::size_t k = 0; k < basis.size(); ++k)
        phi.components.at(basis[k].seq).add_entry(basis[k].tuple, basis[k].out, Scalar(q, (long)k + 1));
    CHECK(cochains_equal(C, restriction(C, C, id, phi), phi));
}

TEST_CASE("restriction is a chain map") {
    Field q = Field::rationals();
    GradedPreCategory C(fx::copies_category(q, Grading::Z, 6, fx::dual_numbers_spec(), 2),
                        fx::weakly_increasing_family(2, 4));
    GradedPreCategory D = one_object_host(fx::dual_numbers(q), 4);
    AInfFunctor F = strict_functor(C.ambient, D.ambient, {0, 0});
    for (int i = 0; i <= 2; ++i) {
        auto bD0 = cc_basis(D, i, 0), bD1 = cc_basis(D, i + 1, 0);
        auto bC0 = cc_basis(C, i, 0), bC1 = cc_basis(C, i + 1, 0);
        ExactMatrix dD = differential_matrix(D, i, 0, bD0, bD1);
        ExactMatrix dC = differential_matrix(C, i, 0, bC0, bC1);
        ExactMatrix R0(q, bC0.size(), bD0.size()), R1(q, bC1.size(), bD1.size());
        for (std::size_t c = 0; c < bD0.size(); ++c) {
            HochschildCochain phi = zero_cochain(D, i, 0);
            phi.components.at(bD0[c].seq).add_entry(bD0[c].tuple, bD0[c].out, Scalar::one(q));
            auto col = flatten_cochain(C, restriction(C, D, F, phi), bC0);
            for (std::size_t r = 0; r < bC0.size(); ++r) R0.at(r, c) = col[r];
        }
        for (std::size_t c = 0; c < bD1.size(); ++c) {
            HochschildCochain phi = zero_cochain(D, i + 1, 0);
            phi.components.at(bD1[c].seq).add_entry(bD1[c].tuple, bD1[c].out, Scalar::one(q));
            auto col = flatten_cochain(C, restriction(C, D, F, phi), bC1);
            for (std::size_t r = 0; r < bC1.size(); ++r) R1.at(r, c) = col[r];
        }
        ExactMatrix lhs = dC * R0, rhs = R1 * dD;
        for (std::size_t r = 0; r < lhs.rows(); ++r)
            for (std::size_t cc = 0; cc < lhs.cols(); ++cc) CHECK(lhs.at(r, cc) == rhs.at(r, cc));
    }
}

TEST_CASE("equivalences induce isomorphisms on Hochschild cohomology") {
    Field q = Field::rationals();
    GradedPreCategory Ddual = one_object_host(fx::dual_numbers(q), 5);
    CHECK(induced_hh_iso_check(Ddual, Ddual, AInfFunctor::identity(Ddual.ambient), 3).all_iso);

    GradedPreCategory C2(fx::copies_category(q, Grading::Z, 6, fx::dual_numbers_spec(), 2),
                         fx::weakly_increasing_family(2, 5));
    AInfFunctor collapse = strict_functor(C2.ambient, Ddual.ambient, {0, 0});
    CHECK(check_quasi_equivalence(collapse));
    CHECK(induced_hh_iso_check(C2, Ddual, collapse, 3).all_iso);

    GradedPreCategory Cg = one_object_host(fx::ground_field(q), 5);
    GradedPreCategory D3(fx::copies_category(q, Grading::Z, 6, fx::ground_field_spec(), 3),
                         fx::weakly_increasing_family(3, 5));
    AInfFunctor incl = strict_functor(Cg.ambient, D3.ambient, {0});
    CHECK(induced_hh_iso_check(Cg, D3, incl, 3).all_iso);

    // non-fully-faithful comparison functors are rejected outright
    AInfFunctor bad(Cg.ambient, Ddual.ambient, {0});
    MultilinearOp f1 = bad.zero_comp({0, 0});
    f1.add_entry({0}, Ddual.ambient.hom(0, 0).index("e"), Scalar::one(q));
    bad.set_comp({0, 0}, std::move(f1));
    HochschildCochain probe = zero_cochain(Ddual, 0, 0);
    probe.components.at({0}).add_entry({}, 0, Scalar::one(q));
    CHECK_THROWS_AS((void)restriction(Cg, Ddual, bad, probe), std::invalid_argument);
}

TEST_CASE("simplicial action: identity law and single-face formula") {
    Field q = Field::rationals();
    GradedPreCategory C = one_object_host(fx::wedge(q), 5);
    for (int j : cc_degrees(C, 2)) {
        auto basis = cc_basis(C, 2, j);
        for (std::size_t k = 0; k < basis.size() && k < 6; ++k) {
            MultilinearOp phi = cochain_signature(C, basis[k].seq, j);
            phi.add_entry(basis[k].tuple, basis[k].out, Scalar::one(q));
            CHECK((simplicial_action(C, {0, 1, 2}, {0, 0, 0}, phi) - phi).is_zero());
            // f skips the last index of [2]: a left multiplication with the
            // sign (-1)^{deg(phi) deg(a_2) + 2} on each entry
            MultilinearOp phi1 = cochain_signature(C, {0, 0}, j);
            for (int b = 0; b < C.ambient.hom(0, 0).dim(); ++b)
                for (int o = 0; o < C.ambient.hom(0, 0).dim(); ++o)
                    if (C.ambient.hom(0, 0).degrees_equal(C.ambient.hom(0, 0).degree(b) + j,
                                                          C.ambient.hom(0, 0).degree(o)))
                        phi1.add_entry({b}, o, Scalar(q, (long)(b + 2 * o + 1)));
            MultilinearOp acted = simplicial_action(C, {0, 1}, {0, 0, 0}, phi1);
            MultilinearOp manual = compose_insert(C.ambient.op({0, 0, 0}), phi1, 1, 0, j);
            CHECK((acted - manual).is_zero());
        }
    }
}

TEST_CASE("simplicial action is functorial") {
    Field q = Field::rationals();
    GradedPreCategory C = one_object_host(fx::wedge(q), 5);
    // all non-decreasing f:[m1]->[m2], g:[m2]->[n] for small shapes
    auto maps = [](int m, int n) {
        std::vector<std::vector<int>> out;
        std::vector<int> f(m + 1, 0);
        std::function<void(int, int)> rec = [&](int l, int lo) {
            if (l == m + 1) {
                out.push_back(f);
                return;
            }
            for (int p = lo; p <= n; ++p) {
                f[l] = p;
                rec(l + 1, p);
            }
        };
        rec(0, 0);
        return out;
    };
    for (auto [m1, m2, n] : std::vector<std::array<int, 3>>{{0, 1, 1}, {1, 1, 2}, {0, 2, 2}, {1, 2, 2}}) {
        ObjSeq T(n + 1, 0), Tg(m2 + 1, 0);
        for (int j : {-1, 0, 1})
            for (auto& f : maps(m1, m2))
                for (auto& g : maps(m2, n)) {
                    std::vector<int> gf(m1 + 1);
                    for (int l = 0; l <= m1; ++l) gf[l] = g[f[l]];
                    auto basis = cc_basis(C, m1, j);
                    for (std::size_t k = 0; k < basis.size() && k < 4; ++k) {
                        MultilinearOp phi = cochain_signature(C, basis[k].seq, j);
                        phi.add_entry(basis[k].tuple, basis[k].out, Scalar::one(q));
                        MultilinearOp once = simplicial_action(C, gf, T, phi);
                        MultilinearOp twice = simplicial_action(C, g, T, simplicial_action(C, f, Tg, phi));
                        CHECK((once - twice).is_zero());
                    }
                }
    }
}

TEST_CASE("Q-resolution: witnessed chains are acyclic, broken ones are not") {
    Field q = Field::rationals(), f5 = Field::prime(5);

    GradedPreCategory C = one_object_host(fx::dual_numbers(q), 3);
    AInfFunctor F(C.pre, C.pre, {0});
    ExtensionWitnessTable table;
    CHECK(check_extension_property(C.pre, 1, &table).empty());
    QResolutionReport r = verify_Q_resolution(C, F, {0}, table);
    CHECK(r.acyclic);
    CHECK(r.witness_check == QWitnessCheck::verified);
    for (auto& [m, h] : r.homology_dims) CHECK(h == 0);

    GradedPreCategory B = one_object_host(fx::ground_field(f5), 5);
    AInfFunctor FB(B.pre, B.pre, {0});
    ExtensionWitnessTable tableB;
    CHECK(check_extension_property(B.pre, 1, &tableB).empty());
    QResolutionReport rb = verify_Q_resolution(B, FB, {0}, tableB);
    CHECK(rb.acyclic);
    CHECK(rb.witness_check == QWitnessCheck::verified);

    // deleting the length-3 chain leaves the loop cycle unkilled
    GradedPreCategory broken(fx::dual_numbers(q), fx::chain_family(2));
    AInfFunctor Fbr(broken.pre, broken.pre, {0});
    QResolutionReport rbr = verify_Q_resolution(broken, Fbr, {0}, ExtensionWitnessTable{});
    CHECK_FALSE(rbr.acyclic);
    CHECK(rbr.homology_dims.at(1) == 1);
}

TEST_CASE("Q-resolution with a non-trivial matching against the target tuple") {
    Field q = Field::rationals();
    AInfInstance amb = fx::copies_category(q, Grading::Z, 6, fx::dual_numbers_spec(), 2);
    GradedPreCategory D(amb, fx::weakly_increasing_family(2, 4));
    GradedPreCategory C(amb, std::set<ObjSeq>{{0}, {1}, {0, 1}});
    AInfFunctor F(C.pre, D.pre, {0, 1});
    QResolutionReport r = verify_Q_resolution(C, F, {0, 1}, ExtensionWitnessTable{});
    CHECK(r.acyclic);
    CHECK(r.witness_check != QWitnessCheck::failed);
    QResolutionReport r1 = verify_Q_resolution(C, F, {1}, ExtensionWitnessTable{});
    CHECK(r1.acyclic);
}

TEST_CASE("solve_primitive inverts the differential on exact cochains") {
    Field q = Field::rationals();
    GradedPreCategory C = one_object_host(fx::dual_numbers(q), 4);
    const GradedSpace& H = C.ambient.hom(0, 0);
    HochschildCochain psi = zero_cochain(C, 1, 0);
    psi.components.at({0, 0}).add_entry({H.index("e")}, H.index("e"), Scalar::one(q));
    HochschildCochain target = differential(C, psi);
    auto prim = solve_primitive(C, target);
    REQUIRE(prim.has_value());
    CHECK(cochains_equal(C, differential(C, *prim), target));

    // the derivation class is closed but not exact
    HochschildCochain der = zero_cochain(C, 1, 0);
    der.components.at({0, 0}).add_entry({H.index("eps")}, H.index("eps"), Scalar::one(q));
    CHECK_FALSE(solve_primitive(C, der).has_value());
}
