#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <ainf/transfer.hpp>
#include <doctest.h>

#include "fixtures.hpp"

using namespace ainf;

namespace {

/// The defining relation in the shifted picture: all constants vanish and
/// only the Koszul rule on shifted degrees remains.
MultilinearOp bar_residual(const AInfInstance& A, const ObjSeq& seq) {
    int k = (int)seq.size() - 1;
    MultilinearOp res = suspend(A.zero_op(seq, 3 - k), 1);
    for (int j = 1; j <= k; ++j) {
        int i = k + 1 - j;
        for (int l = 0; l <= i - 1; ++l) {
            const MultilinearOp* inner = A.op_ptr(insertion_segment(seq, l, j));
            if (!inner) continue;
            const MultilinearOp* outer = A.op_ptr(insertion_collapse(seq, l, j));
            if (!outer) continue;
            res += compose_insert(suspend(*outer, 1), suspend(*inner, 1), l, 0, 1);
        }
    }
    return res;
}

ExactMatrix identity_matrix(Field f, int n) {
    ExactMatrix I(f, n, n);
    for (int i = 0; i < n; ++i) I.at(i, i) = Scalar::one(f);
    return I;
}

void check_splitting_identities(const AInfInstance& A, const SplittingData& S) {
    Field f = A.field();
    for (auto& [xy, P] : S.pairs) {
        const GradedSpace& V = A.hom(xy.first, xy.second);
        const MultilinearOp* m1 = A.op_ptr({xy.first, xy.second});
        ExactMatrix D = m1 ? op_matrix(*m1) : ExactMatrix(f, V.dim(), V.dim());
        ExactMatrix I = op_matrix(P.inc), Pm = op_matrix(P.proj), H = op_matrix(P.hty);
        ExactMatrix lhs = D * H;
        ExactMatrix hd = H * D, ip = I * Pm;
        ExactMatrix idV = identity_matrix(f, V.dim());
        for (std::size_t r = 0; r < lhs.rows(); ++r)
            for (std::size_t c = 0; c < lhs.cols(); ++c)
                CHECK(lhs.at(r, c) + hd.at(r, c) == idV.at(r, c) - ip.at(r, c));
        ExactMatrix pi = Pm * I;
        ExactMatrix idK = identity_matrix(f, P.K.dim());
        for (std::size_t r = 0; r < pi.rows(); ++r)
            for (std::size_t c = 0; c < pi.cols(); ++c) CHECK(pi.at(r, c) == idK.at(r, c));
        CHECK((H * I).is_zero());
        CHECK((Pm * H).is_zero());
        CHECK((H * H).is_zero());
        CHECK((D * (I * idK)).is_zero());  // K is a subcomplex with zero differential
    }
}

}  // namespace

TEST_CASE("suspension is involutive and turns the relations sign-free") {
    Field q = Field::rationals(), f5 = Field::prime(5);
    AInfInstance ms = fx::massey(q);
    const MultilinearOp& m2 = *ms.op_ptr({0, 0, 0});
    CHECK((suspend(suspend(m2, 1), -1) - m2).is_zero());

    for (auto& A : {fx::wedge(q), fx::massey(q), fx::massey(f5), fx::weak_unit(q)})
        for (int len = 2; len <= 5; ++len)
            for (auto& seq : A.sequences(len)) CHECK(bar_residual(A, seq).is_zero());

    // an associativity failure shows up identically in both pictures
    AInfInstance bad = fx::dual_numbers(q);
    MultilinearOp bm2 = *bad.op_ptr({0, 0, 0});
    bm2.add_entry({bad.hom(0, 0).index("eps"), bad.hom(0, 0).index("e")},
                  bad.hom(0, 0).index("e"), Scalar::one(q));
    bad.set_op({0, 0, 0}, bm2);
    CHECK_FALSE(check_relations(bad).empty());
    bool bar_fails = false;
    for (int len = 2; len <= 4; ++len)
        for (auto& seq : bad.sequences(len))
            if (!bar_residual(bad, seq).is_zero()) bar_fails = true;
    CHECK(bar_fails);
}

TEST_CASE("compute_splitting satisfies the contraction identities") {
    Field q = Field::rationals(), f5 = Field::prime(5);
    for (auto& A : {fx::dual_numbers(q), fx::acyclic_complex(q), fx::massey(q), fx::massey(f5),
                    fx::weak_unit(q), fx::random_complex(f5, {{0, 2}, {1, 2}, {2, 2}}, 7),
                    fx::random_complex(q, {{0, 3}, {1, 3}}, 11)}) {
        SplittingData S = compute_splitting(A);
        check_splitting_identities(A, S);
    }

    // m_1 = 0: everything is cohomology and the homotopy vanishes
    SplittingData Sd = compute_splitting(fx::dual_numbers(q));
    CHECK(Sd.pairs.at({0, 0}).K.dim() == 2);
    CHECK(Sd.pairs.at({0, 0}).hty.is_zero());

    // fully acyclic: no cohomology, homotopy inverts the differential
    SplittingData Sa = compute_splitting(fx::acyclic_complex(q));
    CHECK(Sa.pairs.at({0, 0}).K.dim() == 0);
    CHECK_FALSE(Sa.pairs.at({0, 0}).hty.is_zero());

    // Massey fixture cohomology: <a, b> in degree 1 and <t> in degree 2
    SplittingData Sm = compute_splitting(fx::massey(q));
    const GradedSpace& K = Sm.pairs.at({0, 0}).K;
    CHECK(K.dim() == 3);
    CHECK(K.has("a"));
    CHECK(K.has("b"));
    CHECK(K.has("t"));
}

TEST_CASE("transfer of an already-minimal instance is the identity") {
    Field q = Field::rationals();
    AInfInstance A = fx::dual_numbers(q, Grading::Z, 4);
    MinimalModel mm = transfer_minimal(A, compute_splitting(A));
    CHECK(mm.minimal == A);
    CHECK_FALSE(mm.g_fallback);
    AInfFunctor id = AInfFunctor::identity(A);
    for (auto& [seq, c] : mm.F.comps()) CHECK((c - id.comp(seq)).is_zero());
    for (auto& [seq, c] : mm.G.comps()) CHECK((c - id.comp(seq)).is_zero());
}

TEST_CASE("transferred structures and both comparison functors pass the checkers") {
    Field q = Field::rationals(), f5 = Field::prime(5);
    std::vector<AInfInstance> corpus{fx::massey(q, Grading::Z, 5), fx::massey(f5, Grading::Z, 5),
                                     fx::massey_unital(q, Grading::Z, 5),
                                     fx::wedge(q, Grading::Z, 4),  fx::acyclic_complex(q, Grading::Z, 4),
                                     fx::weak_unit(q, Grading::Z, 4),
                                     fx::random_complex(f5, {{0, 2}, {1, 2}, {2, 2}}, 3)};
    for (auto& A : corpus) {
        MinimalModel mm = transfer_minimal(A, compute_splitting(A));
        CHECK(mm.minimal.op_ptr({0, 0}) == nullptr);
        CHECK(check_relations(mm.minimal).empty());
        CHECK(check_functor(mm.F).empty());
        CHECK(check_functor(mm.G).empty());
        CHECK_FALSE(mm.g_fallback);
        CHECK(check_quasi_equivalence(mm.F));
        AInfFunctor GF = compose_functors(mm.G, mm.F);
        CHECK(check_functor(GF).empty());
        CHECK((GF.comp({0, 0}) - AInfFunctor::identity(mm.minimal).comp({0, 0})).is_zero());
        // minimal homs match the cohomology dimensions
        auto coh = hom_cohomologies(A);
        CHECK(coh.at({0, 0}).total_dim() == mm.minimal.hom(0, 0).dim());
    }
}

TEST_CASE("the transferred m_3 on the Massey fixture is the triple product") {
    Field q = Field::rationals();
    AInfInstance A = fx::massey(q, Grading::Z, 4);
    SplittingData S = compute_splitting(A);
    MinimalModel mm = transfer_minimal(A, S);
    const PairSplitting& P = S.pairs.at({0, 0});

    // independent two-tree evaluation in the shifted picture:
    // b'_3 = p ( b_3 + b_2(h b_2 (x) 1) + b_2(1 (x) h b_2) ) i^{(x)3}
    MultilinearOp bi = suspend(P.inc, 1), bp = suspend(P.proj, 1), bh = suspend(P.hty, 1);
    const MultilinearOp& m2 = *A.op_ptr({0, 0, 0});
    MultilinearOp b2 = suspend(m2, 1);
    MultilinearOp b2ii = compose_blocks(b2, {&bi, &bi}, 0, {0, 0});
    MultilinearOp hb2 = compose_insert(bh, b2ii, 0, 0, 0);
    MultilinearOp t1 = compose_blocks(b2, {&hb2, &bi}, 0, {0, 0});
    MultilinearOp t2 = compose_blocks(b2, {&bi, &hb2}, 0, {hb2.degree(), 0});
    MultilinearOp sum = t1;
    sum += t2;
    if (const MultilinearOp* m3 = A.op_ptr({0, 0, 0, 0})) {
        MultilinearOp b3iii = compose_blocks(suspend(*m3, 1), {&bi, &bi, &bi}, 0, {0, 0, 0});
        sum += b3iii;
    }
    MultilinearOp brute = suspend(compose_insert(bp, sum, 0, 0, 0), -1);
    const MultilinearOp* engine = mm.minimal.op_ptr({0, 0, 0, 0});
    REQUIRE(engine != nullptr);
    CHECK((*engine - brute).is_zero());

    // <a,b,b> = a v = t, a nonzero class
    const GradedSpace& K = mm.minimal.hom(0, 0);
    const Vec* v = engine->lookup({K.index("a"), K.index("b"), K.index("b")});
    REQUIRE(v != nullptr);
    REQUIRE(v->size() == 1);
    CHECK(v->begin()->first == K.index("t"));
    CHECK((v->begin()->second == Scalar::one(q) || v->begin()->second == -Scalar::one(q)));
}

TEST_CASE("transfer commutes with reduction mod p on the Massey fixture") {
    Field q = Field::rationals(), f5 = Field::prime(5);
    MinimalModel mq = transfer_minimal(fx::massey(q, Grading::Z, 5), compute_splitting(fx::massey(q, Grading::Z, 5)));
    MinimalModel mp = transfer_minimal(fx::massey(f5, Grading::Z, 5), compute_splitting(fx::massey(f5, Grading::Z, 5)));
    for (int len = 3; len <= 6; ++len) {
        const MultilinearOp* oq = mq.minimal.op_ptr(ObjSeq(len, 0));
        const MultilinearOp* op = mp.minimal.op_ptr(ObjSeq(len, 0));
        CHECK((oq == nullptr) == (op == nullptr));
        if (!oq || !op) continue;
        MultilinearOp reduced(f5, op->sources(), op->target(), op->degree());
        for (auto& [t, v] : oq->entries())
            for (auto& [o, s] : v) reduced.add_entry(t, o, Scalar(f5, s.value()));
        CHECK((reduced - *op).is_zero());
    }
}

TEST_CASE("arity-by-arity completion produces a valid comparison functor") {
    Field q = Field::rationals();
    AInfInstance A = fx::massey(q, Grading::Z, 4);
    SplittingData S = compute_splitting(A);
    MinimalModel mm = transfer_minimal(A, S);
    std::vector<int> idmap{0};
    AInfFunctor G2(A, mm.minimal, idmap);
    G2.set_comp({0, 0}, S.pairs.at({0, 0}).proj);
    for (int n = 2; n <= 4; ++n) complete_functor_arity(G2, n);
    CHECK(check_functor(G2).empty());
    CHECK((G2.comp({0, 0}) - mm.G.comp({0, 0})).is_zero());
}
