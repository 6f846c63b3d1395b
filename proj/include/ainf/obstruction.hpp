#pragma once

#include "homotopy.hpp"
#include "hochschild.hpp"

namespace ainf {

/// Partially defined minimal structure on a graded pre-category: operations
/// m_3..m_{frontier-1} of degree 2-k on the transversal family, required to
/// satisfy every defining relation free of the undetermined m_{>=frontier}
/// (with m_1 = 0 these are the relations with at most `frontier` inputs).
struct PartialStructure {
    GradedPreCategory host;
    std::map<int, HochschildCochain> ops;  // k -> CC^{k,2-k}
    int frontier = 3;
};

/// The known operations installed on the pre-category restriction.
inline AInfInstance partial_instance(const PartialStructure& P) {
    AInfInstance A = P.host.pre;
    for (auto& [k, phi] : P.ops) {
        if (k < 3 || k >= P.frontier || phi.arity != k || phi.degree != 2 - k)
            throw std::invalid_argument("PartialStructure: component out of range");
        for (auto& [seq, op] : phi.components)
            if (!op.is_zero()) A.set_op(seq, op);
    }
    return A;
}

inline void validate_partial(const PartialStructure& P) {
    AInfInstance A = partial_instance(P);
    RelationReport bad;
    int top = std::min(P.frontier + 1, A.truncation() + 1);
    for (int len = 2; len <= top; ++len)
        for (auto& seq : A.sequences(len)) collect_violations(seq, relation_residual(A, seq), bad);
    if (!bad.empty()) throw std::invalid_argument("PartialStructure: relations below the frontier fail");
}

/// The obstruction to choosing m_frontier: the negated sum of the relation
/// terms at frontier+1 inputs built from the known operations.  A solution
/// of del(m_frontier) = Phi extends the structure one more arity.
inline HochschildCochain obstruction_Phi(const PartialStructure& P) {
    validate_partial(P);
    int n = P.frontier;
    AInfInstance A = partial_instance(P);
    HochschildCochain phi = zero_cochain(P.host, n + 1, 2 - n);
    for (auto& [T, acc] : phi.components) acc = acc - relation_residual(A, T);
    if (!cochain_is_zero(differential(P.host, phi)))
        throw std::logic_error("obstruction_Phi: obstruction cochain not closed");
    return phi;
}

/// Element of the group of strong homotopies over a graded pre-category:
/// components f_2..f_N of degree 1-k, with f_1 the identity left implicit.
struct GCElement {
    GradedPreCategory host;
    std::map<int, HochschildCochain> comps;  // k -> CC^{k,1-k}
};

inline GCElement gc_identity(const GradedPreCategory& C) { return {C, {}}; }

/// The underlying coalgebra morphism as a functor carried by the graded
/// restriction; the attached instances only supply signatures here.
inline AInfFunctor gc_carrier(const GCElement& f) {
    AInfFunctor F = AInfFunctor::identity(f.host.pre);
    for (auto& [k, phi] : f.comps) {
        if (k < 2 || phi.arity != k || phi.degree != 1 - k)
            throw std::invalid_argument("GCElement: bad component");
        for (auto& [seq, op] : phi.components)
            if (!op.is_zero()) F.set_comp(seq, op);
    }
    return F;
}

inline GCElement gc_from_comps(const GradedPreCategory& C, const std::map<ObjSeq, MultilinearOp>& comps) {
    GCElement g{C, {}};
    for (auto& [seq, op] : comps) {
        int k = (int)seq.size() - 1;
        if (k < 2 || op.is_zero()) continue;
        auto it = g.comps.try_emplace(k, HochschildCochain()).first;
        if (it->second.components.empty()) it->second = zero_cochain(C, k, 1 - k);
        it->second.components.at(seq) = op;
    }
    return g;
}

/// One-component element with f_k given by a CC^{k,1-k} cochain.
inline GCElement gc_single(const GradedPreCategory& C, const HochschildCochain& fk) {
    GCElement g{C, {}};
    if (!cochain_is_zero(fk)) g.comps.emplace(fk.arity, fk);
    return g;
}

/// Group product: the coalgebra-morphism composition, f after g.
inline GCElement group_compose(const GCElement& f, const GCElement& g) {
    AInfFunctor FG = compose_functors(gc_carrier(f), gc_carrier(g));
    return gc_from_comps(f.host, FG.comps());
}

/// Inverse: solves (f o f^{-1})_k = 0 arity by arity; the unknown g_k enters
/// the composition as f_1(g_k) with coefficient one.
inline GCElement group_invert(const GCElement& f) {
    AInfFunctor F = gc_carrier(f);
    AInfFunctor G = AInfFunctor::identity(f.host.pre);
    int N = f.host.pre.truncation();
    for (int len = 3; len <= N + 1; ++len) {
        AInfFunctor FG = compose_functors(F, G);
        for (auto& seq : f.host.pre.sequences(len))
            if (const MultilinearOp* r = FG.comp_ptr(seq)) G.set_comp(seq, G.comp(seq) - *r);
    }
    return gc_from_comps(f.host, G.comps());
}

/// Action on minimal structures: act(f, m) is the unique structure making the
/// carrier of f an A-infinity functor out of (C, m).  Solved arity by arity:
/// m'_n enters the functor equation as m'_n(f_1,...,f_1) with coefficient one.
inline AInfInstance act(const GCElement& f, const AInfInstance& m) {
    AInfInstance B = f.host.pre;
    std::map<ObjSeq, MultilinearOp> comps = gc_carrier(f).comps();
    std::vector<int> idmap(m.object_count());
    for (int x = 0; x < m.object_count(); ++x) idmap[x] = x;
    int N = m.truncation();
    for (int len = 4; len <= N + 1; ++len) {
        AInfFunctor F(m, B, idmap);
        for (auto& [seq, op] : comps) F.set_comp(seq, op);
        for (auto& seq : m.sequences(len)) {
            MultilinearOp op = functor_rhs(F, seq) - functor_lhs(F, seq);
            if (!op.is_zero()) B.set_op(seq, op);
        }
    }
    return B;
}

/// Partially defined strong homotopy between two minimal structures m and mp
/// on the same pre-category: components f_2..f_{frontier-1} satisfying every
/// functor equation free of the undetermined f_{>=frontier}.
struct PartialHomotopy {
    GradedPreCategory host;
    AInfInstance m, mp;
    std::map<int, HochschildCochain> comps;  // k -> CC^{k,1-k}
    int frontier = 2;
};

inline AInfFunctor partial_carrier(const PartialHomotopy& P) {
    std::vector<int> idmap(P.m.object_count());
    for (int x = 0; x < P.m.object_count(); ++x) idmap[x] = x;
    AInfFunctor F(P.m, P.mp, idmap);
    for (auto& pr : P.m.sequences(2)) {
        MultilinearOp f1 = F.zero_comp(pr);
        for (int b = 0; b < f1.source(0).dim(); ++b) f1.add_entry({b}, b, Scalar::one(P.m.field()));
        F.set_comp(pr, std::move(f1));
    }
    for (auto& [k, phi] : P.comps) {
        if (k < 2 || k >= P.frontier || phi.arity != k || phi.degree != 1 - k)
            throw std::invalid_argument("PartialHomotopy: component out of range");
        for (auto& [seq, op] : phi.components)
            if (!op.is_zero()) F.set_comp(seq, op);
    }
    return F;
}

inline void validate_partial(const PartialHomotopy& P) {
    AInfFunctor F = partial_carrier(P);
    RelationReport bad;
    int top = std::min(P.frontier + 1, P.m.truncation() + 1);
    for (int len = 2; len <= top; ++len)
        for (auto& seq : P.m.sequences(len)) collect_violations(seq, functor_residual(F, seq), bad);
    if (!bad.empty()) throw std::invalid_argument("PartialHomotopy: equations below the frontier fail");
}

/// The obstruction to choosing f_frontier: the functor-equation residual at
/// frontier+1 inputs of the known components (f_frontier contributes nothing
/// there when m_1 = 0).  A solution of del(f_frontier) = Psi extends the
/// homotopy one more arity.
inline HochschildCochain obstruction_Psi(const PartialHomotopy& P) {
    validate_partial(P);
    int n = P.frontier;
    AInfFunctor F = partial_carrier(P);
    HochschildCochain psi = zero_cochain(P.host, n + 1, 1 - n);
    for (auto& [T, acc] : psi.components) acc += functor_residual(F, T);
    if (!cochain_is_zero(differential(P.host, psi)))
        throw std::logic_error("obstruction_Psi: obstruction cochain not closed");
    return psi;
}

/// Arity-k operations of a structure gathered as a CC^{k,2-k} cochain.
inline HochschildCochain structure_cochain(const GradedPreCategory& C, const AInfInstance& m, int k) {
    HochschildCochain phi = zero_cochain(C, k, 2 - k);
    for (auto& [seq, acc] : phi.components)
        if (const MultilinearOp* op = m.op_ptr(seq)) acc += *op;
    return phi;
}

inline HochschildCochain cochain_diff(const HochschildCochain& a, const HochschildCochain& b) {
    HochschildCochain out = a;
    for (auto& [seq, comp] : out.components) {
        auto it = b.components.find(seq);
        if (it != b.components.end()) comp = comp - it->second;
    }
    return out;
}

/// Pullback of a structure on D along a graded equivalence phi: C.pre -> D.pre.
inline AInfInstance pullback_structure(const GradedPreCategory& C, const GradedPreCategory& D,
                                       const AInfFunctor& phi, const AInfInstance& m) {
    AInfInstance out = C.pre;
    int N = std::min(C.pre.truncation(), m.truncation());
    for (int k = 3; k <= N; ++k) {
        HochschildCochain chi = restriction(C, D, phi, structure_cochain(D, m, k));
        for (auto& [seq, op] : chi.components)
            if (!op.is_zero()) out.set_op(seq, op);
    }
    return out;
}

namespace detail {

/// A cocycle z on D whose pullback class equals the class of the C-cocycle
/// `coords` (coordinates over cohC.reps); fails when the induced map misses it.
inline std::optional<HochschildCochain> match_class(const GradedPreCategory& C, const GradedPreCategory& D,
                                                    const AInfFunctor& phi, int i, int j,
                                                    const CCCohomology& cohC, const CCCohomology& cohD,
                                                    const std::vector<Scalar>& coords) {
    Field f = C.field();
    ExactMatrix M(f, cohC.reps.size(), cohD.reps.size());
    for (std::size_t c = 0; c < cohD.reps.size(); ++c) {
        HochschildCochain rep = unflatten_cochain(D, i, j, cohD.basis, cohD.reps[c]);
        auto col = cc_class_coords(f, cohC, flatten_cochain(C, restriction(C, D, phi, rep), cohC.basis));
        if (!col) return std::nullopt;
        for (std::size_t r = 0; r < cohC.reps.size(); ++r) M.at(r, c) = (*col)[r];
    }
    auto x = M.solve(coords);
    if (!x) return std::nullopt;
    std::vector<Scalar> v(cohD.basis.size(), Scalar::zero(f));
    for (std::size_t c = 0; c < cohD.reps.size(); ++c)
        for (std::size_t r = 0; r < cohD.basis.size(); ++r) v[r] = v[r] + (*x)[c] * cohD.reps[c][r];
    return unflatten_cochain(D, i, j, cohD.basis, v);
}

}  // namespace detail

struct LiftedStructure {
    AInfInstance structure;  // on D's transversal family
    GCElement homotopy;      // on C: act(homotopy, m) = pullback of structure
};

/// Lifts a minimal structure m on C across a graded equivalence phi: C -> D:
/// arity by arity, solve del(mt_n) = Phi on the D side, correct by a cocycle
/// so that the pullback defect is exact, and absorb the defect into a strong
/// homotopy on C.  Failure of any solve signals a genuine obstruction.
inline LiftedStructure lift_structure(const GradedPreCategory& C, const GradedPreCategory& D,
                                      const AInfFunctor& phi, const AInfInstance& m) {
    int N = std::min(C.pre.truncation(), D.pre.truncation());
    AInfInstance cur = m;
    GCElement g = gc_identity(C);
    PartialStructure Pt{D, {}, 3};
    for (int n = 3; n <= N; ++n) {
        Pt.frontier = n;
        HochschildCochain Phi = obstruction_Phi(Pt);
        auto mt = solve_primitive(D, Phi);
        if (!mt) throw std::runtime_error("lift_structure: obstruction class nonzero at arity " + std::to_string(n));
        HochschildCochain delta = cochain_diff(restriction(C, D, phi, *mt), structure_cochain(C, cur, n));
        CCCohomology cohC = cc_cohomology(C, n, 2 - n);
        auto coords = cc_class_coords(C.field(), cohC, flatten_cochain(C, delta, cohC.basis));
        if (!coords) throw std::logic_error("lift_structure: pullback defect not a cocycle");
        auto z = detail::match_class(C, D, phi, n, 2 - n, cohC, cc_cohomology(D, n, 2 - n), *coords);
        if (!z) throw std::runtime_error("lift_structure: defect class not in the image at arity " + std::to_string(n));
        HochschildCochain mtn = cochain_diff(*mt, *z);
        HochschildCochain defect = cochain_diff(restriction(C, D, phi, mtn), structure_cochain(C, cur, n));
        auto h = solve_primitive(C, defect);
        if (!h) throw std::logic_error("lift_structure: exactness correction failed at arity " + std::to_string(n));
        GCElement step = gc_single(C, *h);
        cur = act(step, cur);
        g = group_compose(step, g);
        if (!cochain_is_zero(mtn)) Pt.ops.emplace(n, std::move(mtn));
    }
    Pt.frontier = N + 1;
    return {partial_instance(Pt), std::move(g)};
}

/// Lifts a strong homotopy f between the pullbacks of m and mp to a strong
/// homotopy between m and mp on the D side (injectivity direction).
inline GCElement lift_homotopy(const GradedPreCategory& C, const GradedPreCategory& D, const AInfFunctor& phi,
                               const AInfInstance& m, const AInfInstance& mp, const GCElement& f) {
    int N = std::min(C.pre.truncation(), D.pre.truncation());
    AInfInstance mC = pullback_structure(C, D, phi, m);
    AInfInstance mpC = pullback_structure(C, D, phi, mp);
    std::vector<int> idmap(mC.object_count());
    for (int x = 0; x < mC.object_count(); ++x) idmap[x] = x;
    AInfFunctor cur(mC, mpC, idmap);
    AInfFunctor fcar = gc_carrier(f);
    for (auto& [seq, op] : fcar.comps()) cur.set_comp(seq, op);
    if (!check_functor(cur).empty()) throw std::invalid_argument("lift_homotopy: f is not a homotopy between the pullbacks");
    PartialHomotopy Pt{D, m, mp, {}, 2};
    for (int n = 2; n <= N; ++n) {
        Pt.frontier = n;
        HochschildCochain Psi = obstruction_Psi(Pt);
        auto ft = solve_primitive(D, Psi);
        if (!ft) throw std::runtime_error("lift_homotopy: obstruction class nonzero at arity " + std::to_string(n));
        HochschildCochain curn = zero_cochain(C, n, 1 - n);
        for (auto& [seq, acc] : curn.components)
            if (const MultilinearOp* c = cur.comp_ptr(seq)) acc += *c;
        HochschildCochain delta = cochain_diff(restriction(C, D, phi, *ft), curn);
        CCCohomology cohC = cc_cohomology(C, n, 1 - n);
        auto coords = cc_class_coords(C.field(), cohC, flatten_cochain(C, delta, cohC.basis));
        if (!coords) throw std::logic_error("lift_homotopy: pullback defect not a cocycle");
        auto z = detail::match_class(C, D, phi, n, 1 - n, cohC, cc_cohomology(D, n, 1 - n), *coords);
        if (!z) throw std::runtime_error("lift_homotopy: defect class not in the image at arity " + std::to_string(n));
        HochschildCochain ftn = cochain_diff(*ft, *z);
        HochschildCochain defect = cochain_diff(restriction(C, D, phi, ftn), curn);
        auto h = solve_primitive(C, defect);
        if (!h) throw std::logic_error("lift_homotopy: exactness correction failed at arity " + std::to_string(n));
        std::map<ObjSeq, MultilinearOp> hmap;
        for (auto& [seq, op] : h->components)
            if (!op.is_zero()) hmap.emplace(seq, op);
        cur = homotopy_extend(cur, hmap);
        if (!cochain_is_zero(ftn)) Pt.comps.emplace(n, std::move(ftn));
    }
    GCElement out{D, std::move(Pt.comps)};
    return out;
}

/// Searches for a strong homotopy carrying a to b on the same pre-category;
/// absent exactly when some defect class is nonzero.
inline std::optional<GCElement> strongly_homotopic(const GradedPreCategory& C, const AInfInstance& a,
                                                   const AInfInstance& b) {
    int N = C.pre.truncation();
    AInfInstance cur = a;
    GCElement g = gc_identity(C);
    for (int n = 3; n <= N; ++n) {
        HochschildCochain delta = cochain_diff(structure_cochain(C, b, n), structure_cochain(C, cur, n));
        auto h = solve_primitive(C, delta);
        if (!h) return std::nullopt;
        GCElement step = gc_single(C, *h);
        cur = act(step, cur);
        g = group_compose(step, g);
    }
    for (auto& [seq, op] : b.ops())
        if (!(cur.op(seq) - op).is_zero()) return std::nullopt;
    return g;
}

/// A functor extending phi over (C,m) -> (D,mp) exists iff m and the pullback
/// of mp are strongly homotopic; returns the witness element on C.
inline std::optional<GCElement> extendable(const GradedPreCategory& C, const GradedPreCategory& D,
                                           const AInfFunctor& phi, const AInfInstance& m, const AInfInstance& mp) {
    return strongly_homotopic(C, m, pullback_structure(C, D, phi, mp));
}

struct CategoryCompletion {
    AInfInstance category;  // full transversality family on the ambient objects
    AInfFunctor extension;  // quasi-equivalence from (C, m)
};

/// Extends a minimal pre-category (C, m) to a minimal category on the full
/// transversality family of its ambient, with the inclusion extended to a
/// quasi-equivalence.
inline CategoryCompletion precat_to_cat(const GradedPreCategory& C, const AInfInstance& m) {
    int N = C.pre.truncation();
    std::set<ObjSeq> full;
    for (int len = 1; len <= N + 1; ++len)
        for (auto& seq : C.ambient.sequences(len)) full.insert(seq);
    GradedPreCategory D(C.ambient, full);
    std::vector<int> idmap(C.pre.object_count());
    for (int x = 0; x < C.pre.object_count(); ++x) idmap[x] = x;
    AInfFunctor incl(C.pre, D.pre, idmap);
    for (auto& pr : C.pre.sequences(2)) {
        MultilinearOp f1 = incl.zero_comp(pr);
        for (int b = 0; b < f1.source(0).dim(); ++b) f1.add_entry({b}, b, Scalar::one(C.field()));
        incl.set_comp(pr, std::move(f1));
    }
    LiftedStructure lifted = lift_structure(C, D, incl, m);
    AInfFunctor F(m, lifted.structure, idmap);
    for (auto& pr : C.pre.sequences(2)) F.set_comp(pr, incl.comp(pr));
    AInfFunctor hcar = gc_carrier(lifted.homotopy);
    for (auto& [seq, op] : hcar.comps())
        if (seq.size() > 2) F.set_comp(seq, op);
    if (!check_functor(F).empty()) throw std::logic_error("precat_to_cat: extension fails the functor equations");
    return {std::move(lifted.structure), std::move(F)};
}

}  // namespace ainf
