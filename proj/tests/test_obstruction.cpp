#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <ainf/obstruction.hpp>
#include <doctest.h>

#include <random>

#include "fixtures.hpp"

using namespace ainf;

namespace {

HochschildCochain random_cochain(const GradedPreCategory& C, int i, int j, std::mt19937& rng) {
    auto basis = cc_basis(C, i, j);
    std::vector<Scalar> v;
    for (std::size_t k = 0; k < basis.size(); ++k) v.push_back(Scalar(C.field(), (long)(rng() % 5) - 2));
    return unflatten_cochain(C, i, j, basis, v);
}

GCElement random_gc(const GradedPreCategory& C, const std::vector<int>& arities, std::mt19937& rng) {
    GCElement g{C, {}};
    for (int k : arities) {
        HochschildCochain phi = random_cochain(C, k, 1 - k, rng);
        if (!cochain_is_zero(phi)) g.comps.emplace(k, std::move(phi));
    }
    return g;
}

bool gc_equal(const GCElement& a, const GCElement& b) {
    std::set<int> ks;
    for (auto& [k, phi] : a.comps) ks.insert(k);
    for (auto& [k, phi] : b.comps) ks.insert(k);
    for (int k : ks) {
        auto ia = a.comps.find(k), ib = b.comps.find(k);
        if (ia == a.comps.end()) {
            if (!cochain_is_zero(ib->second)) return false;
        } else if (ib == b.comps.end()) {
            if (!cochain_is_zero(ia->second)) return false;
        } else if (!cochain_is_zero(cochain_diff(ia->second, ib->second))) {
            return false;
        }
    }
    return true;
}

bool ops_equal(const AInfInstance& a, const AInfInstance& b) {
    for (auto& [seq, op] : a.ops())
        if (!(b.op(seq) - op).is_zero()) return false;
    for (auto& [seq, op] : b.ops())
        if (!(a.op(seq) - op).is_zero()) return false;
    return true;
}

}  // namespace

TEST_CASE("the strong-homotopy group: identity, inverses, associativity") {
    Field q = Field::rationals();
    GradedPreCategory C(fx::wedge(q, Grading::Z, 4), fx::chain_family(5));
    std::mt19937 rng(11);
    GCElement f = random_gc(C, {2, 3}, rng);
    GCElement g = random_gc(C, {2, 3}, rng);
    GCElement h = random_gc(C, {2, 4}, rng);
    REQUIRE_FALSE(f.comps.empty());

    CHECK(gc_equal(group_compose(f, gc_identity(C)), f));
    CHECK(gc_equal(group_compose(gc_identity(C), f), f));

    GCElement finv = group_invert(f);
    CHECK(group_compose(f, finv).comps.empty());
    CHECK(group_compose(finv, f).comps.empty());

    CHECK(gc_equal(group_compose(group_compose(f, g), h), group_compose(f, group_compose(g, h))));
}

TEST_CASE("the action on structures: neutrality, perturbation formula, action law") {
    Field q = Field::rationals();
    GradedPreCategory C(fx::wedge(q, Grading::Z, 4), fx::chain_family(5));
    std::mt19937 rng(5);
    AInfInstance m = C.pre;

    CHECK(ops_equal(act(gc_identity(C), m), m));

    // single component f_2: m'_3 = m_3 + del(f_2), and the carrier really is
    // a functor (C,m) -> (C,m')
    HochschildCochain f2 = random_cochain(C, 2, -1, rng);
    REQUIRE_FALSE(cochain_is_zero(f2));
    GCElement f = gc_single(C, f2);
    AInfInstance mp = act(f, m);
    CHECK(check_relations(mp).empty());
    CHECK(cochain_is_zero(cochain_diff(structure_cochain(C, mp, 3), differential(C, f2))));
    std::vector<int> idmap = {0};
    AInfFunctor F(m, mp, idmap);
    AInfFunctor car = gc_carrier(f);
    for (auto& [seq, op] : car.comps()) F.set_comp(seq, op);
    CHECK(check_functor(F).empty());

    GCElement g = random_gc(C, {2, 3}, rng);
    CHECK(ops_equal(act(group_compose(f, g), m), act(f, act(g, m))));
}

TEST_CASE("structure obstructions vanish below arity five and match the relation terms") {
    Field q = Field::rationals();
    GradedPreCategory C(fx::wedge(q, Grading::Z, 5), fx::chain_family(6));
    std::mt19937 rng(17);

    PartialStructure empty{C, {}, 3};
    CHECK(cochain_is_zero(obstruction_Phi(empty)));

    // a completable partial structure: truncate a genuine one and compare the
    // obstruction against the differential of the dropped operation
    AInfInstance m = act(random_gc(C, {2, 3}, rng), C.pre);
    REQUIRE(check_relations(m).empty());
    PartialStructure P{C, {}, 5};
    P.ops.emplace(3, structure_cochain(C, m, 3));
    P.ops.emplace(4, structure_cochain(C, m, 4));
    REQUIRE_FALSE(cochain_is_zero(P.ops.at(3)));
    HochschildCochain Phi = obstruction_Phi(P);
    CHECK(cochain_is_zero(cochain_diff(Phi, differential(C, structure_cochain(C, m, 5)))));
    CHECK(solve_primitive(C, Phi).has_value());
}

TEST_CASE("homotopy obstructions vanish for equal endpoints and match the dropped component") {
    Field q = Field::rationals();
    GradedPreCategory C(fx::wedge(q, Grading::Z, 5), fx::chain_family(6));
    std::mt19937 rng(23);

    PartialHomotopy trivial{C, C.pre, C.pre, {}, 2};
    CHECK(cochain_is_zero(obstruction_Psi(trivial)));

    GCElement g = random_gc(C, {2, 3, 4}, rng);
    AInfInstance m = C.pre;
    AInfInstance mp = act(g, m);
    PartialHomotopy P{C, m, mp, {}, 4};
    P.comps.emplace(2, g.comps.at(2));
    P.comps.emplace(3, g.comps.at(3));
    HochschildCochain Psi = obstruction_Psi(P);
    CHECK(cochain_is_zero(cochain_diff(Psi, differential(C, g.comps.at(4)))));
}

TEST_CASE("orbit membership is decided exactly") {
    Field q = Field::rationals();
    GradedPreCategory C(fx::wedge(q, Grading::Z, 4), fx::chain_family(5));
    std::mt19937 rng(29);
    AInfInstance a = C.pre;
    GCElement g = random_gc(C, {2, 3}, rng);
    AInfInstance b = act(g, a);

    auto w = strongly_homotopic(C, a, b);
    REQUIRE(w.has_value());
    CHECK(ops_equal(act(*w, a), b));

    // structures whose m_3 classes differ are not homotopic: at truncation 3
    // a non-exact cocycle is a complete structure
    GradedPreCategory C3(fx::wedge(q, Grading::Z, 3), fx::chain_family(4));
    auto coh = cc_cohomology(C3, 3, -1);
    REQUIRE_FALSE(coh.reps.empty());
    AInfInstance b3 = C3.pre;
    HochschildCochain rep = unflatten_cochain(C3, 3, -1, coh.basis, coh.reps[0]);
    for (auto& [seq, op] : rep.components)
        if (!op.is_zero()) b3.set_op(seq, op);
    REQUIRE(check_relations(b3).empty());
    CHECK_FALSE(strongly_homotopic(C3, C3.pre, b3).has_value());
}

TEST_CASE("structures lift across a collapse of two isomorphic copies") {
    Field q = Field::rationals();
    int N = 4;
    GradedPreCategory D(fx::wedge(q, Grading::Z, N), fx::chain_family(N + 1));
    GradedPreCategory C(fx::copies_category(q, Grading::Z, N, fx::wedge_spec(), 2),
                        fx::weakly_increasing_family(2, N + 1));
    std::mt19937 rng(31);

    AInfFunctor phi(C.pre, D.pre, {0, 0});
    for (auto& pr : C.pre.sequences(2)) {
        MultilinearOp f1 = phi.zero_comp(pr);
        for (int b = 0; b < f1.source(0).dim(); ++b) f1.add_entry({b}, b, Scalar::one(q));
        phi.set_comp(pr, std::move(f1));
    }

    AInfInstance mD = act(random_gc(D, {2, 3}, rng), D.pre);
    AInfInstance m = pullback_structure(C, D, phi, mD);
    REQUIRE(check_relations(m).empty());

    LiftedStructure lifted = lift_structure(C, D, phi, m);
    CHECK(check_relations(lifted.structure).empty());
    CHECK(ops_equal(act(lifted.homotopy, m), pullback_structure(C, D, phi, lifted.structure)));
    // the lift recovers the original structure up to strong homotopy
    auto orbit = strongly_homotopic(D, lifted.structure, mD);
    CHECK(orbit.has_value());
    CHECK(extendable(C, D, phi, m, lifted.structure).has_value());
}

TEST_CASE("homotopies lift across a collapse of two isomorphic copies") {
    Field q = Field::rationals();
    int N = 4;
    GradedPreCategory D(fx::wedge(q, Grading::Z, N), fx::chain_family(N + 1));
    GradedPreCategory C(fx::copies_category(q, Grading::Z, N, fx::wedge_spec(), 2),
                        fx::weakly_increasing_family(2, N + 1));
    std::mt19937 rng(37);

    AInfFunctor phi(C.pre, D.pre, {0, 0});
    for (auto& pr : C.pre.sequences(2)) {
        MultilinearOp f1 = phi.zero_comp(pr);
        for (int b = 0; b < f1.source(0).dim(); ++b) f1.add_entry({b}, b, Scalar::one(q));
        phi.set_comp(pr, std::move(f1));
    }

    AInfInstance m = D.pre;
    GCElement gD = random_gc(D, {2, 3}, rng);
    AInfInstance mp = act(gD, m);
    GCElement f{C, {}};
    for (auto& [k, phi_k] : gD.comps) f.comps.emplace(k, restriction(C, D, phi, phi_k));

    GCElement ft = lift_homotopy(C, D, phi, m, mp, f);
    CHECK(ops_equal(act(GCElement{D, ft.comps}, m), mp));
}

TEST_CASE("a minimal pre-category extends to a category on the full family") {
    Field q = Field::rationals();
    int N = 3;
    GradedPreCategory C(fx::copies_category(q, Grading::Z, N, fx::wedge_spec(), 2),
                        fx::weakly_increasing_family(2, N + 1));
    std::mt19937 rng(41);
    AInfInstance m = act(random_gc(C, {2}, rng), C.pre);
    REQUIRE(check_relations(m).empty());

    CategoryCompletion done = precat_to_cat(C, m);
    CHECK(done.category.is_transversal({1, 0}));
    CHECK(check_relations(done.category).empty());
    CHECK(check_functor(done.extension).empty());
    CHECK(check_quasi_equivalence(done.extension));

    // the completed structure restricts to something strongly homotopic to m
    GCElement g = gc_from_comps(C, done.extension.comps());
    AInfInstance back = C.pre;
    for (auto& [seq, op] : done.category.ops())
        if (seq.size() >= 4 && C.pre.is_transversal(seq)) back.set_op(seq, op);
    CHECK(ops_equal(act(g, m), back));
}

TEST_CASE("a category input is returned unchanged up to homotopy") {
    Field q = Field::rationals();
    int N = 3;
    GradedPreCategory C(fx::wedge(q, Grading::Z, N), fx::chain_family(N + 1));
    std::mt19937 rng(43);
    AInfInstance m = act(random_gc(C, {2}, rng), C.pre);
    CategoryCompletion done = precat_to_cat(C, m);
    CHECK(check_relations(done.category).empty());
    auto w = strongly_homotopic(C, m, done.category);
    CHECK(w.has_value());
}
