#pragma once

#include "cohomology.hpp"
#include "functor.hpp"

namespace ainf {

/// Restriction of a category (or larger pre-category) to a subsequence-closed
/// transversality family.  Homs and operations are copied on transversal data.
inline AInfInstance restrict_from_ambient(const AInfInstance& D, const std::set<ObjSeq>& family) {
    AInfInstance C(D.field(), D.mode(), D.truncation());
    for (int x = 0; x < D.object_count(); ++x) C.add_object(D.object_name(x));
    for (auto& s : family) {
        if (!D.is_transversal(s)) throw std::invalid_argument("restrict_from_ambient: sequence not transversal in ambient");
        C.add_transversal(s);
    }
    for (auto& s : family) {
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j) C.set_hom(s[i], s[j], D.hom(s[i], s[j]));
        if (s.size() >= 2) {
            const MultilinearOp* op = D.op_ptr(s);
            if (op) C.set_op(s, *op);
        }
    }
    C.validate();
    return C;
}

/// A graded pre-category presented inside an ambient graded category that
/// models the quasi-isomorphism-inverting closure: the pre-category data is
/// the restriction of the ambient to the transversality family.
struct GradedPreCategory {
    AInfInstance ambient;       // full family, m_{!=2} = 0
    std::set<ObjSeq> family;    // transversal sequences of the pre-category
    AInfInstance pre;           // cached restriction

    GradedPreCategory() = default;
    GradedPreCategory(AInfInstance amb, std::set<ObjSeq> fam) : ambient(std::move(amb)), family(std::move(fam)) {
        if (!ambient.full_family()) throw std::invalid_argument("GradedPreCategory: ambient must have the full family");
        for (auto& [seq, op] : ambient.ops()) {
            (void)op;
            if (seq.size() != 3) throw std::invalid_argument("GradedPreCategory: ambient must be graded (only m_2)");
        }
        if (!check_relations(ambient).empty())
            throw std::invalid_argument("GradedPreCategory: ambient fails the relations");
        for (int x = 0; x < ambient.object_count(); ++x)
            if (!find_strict_identity(ambient, x))
                throw std::invalid_argument("GradedPreCategory: ambient lacks a strict identity at " +
                                            ambient.object_name(x));
        pre = restrict_from_ambient(ambient, family);
    }

    Field field() const { return ambient.field(); }
    Grading mode() const { return ambient.mode(); }

    std::vector<ObjSeq> sequences(int len) const {
        std::vector<ObjSeq> out;
        for (auto& s : family)
            if ((int)s.size() == len) out.push_back(s);
        return out;
    }

    /// Ambient two-sided inverse of a morphism under m_2, when one exists.
    std::optional<Vec> ambient_inverse(int x, int y, const Vec& f) const {
        const GradedSpace& hyx = ambient.hom(y, x);
        auto ex = find_strict_identity(ambient, x);
        auto ey = find_strict_identity(ambient, y);
        if (!ex || !ey) return std::nullopt;
        // f: x->y, g: y->x; m_2(g,f) over (x,y,x) must be id_x and m_2(f,g)
        // over (y,x,y) must be id_y
        MultilinearOp left = partial_evaluate(ambient.op(ObjSeq{x, y, x}), 1, f, 0);   // g -> m_2(g,f)
        MultilinearOp right = partial_evaluate(ambient.op(ObjSeq{y, x, y}), 0, f, 0);  // g -> m_2(f,g)
        std::size_t rows_l = ambient.hom(x, x).dim(), rows_r = ambient.hom(y, y).dim();
        ExactMatrix m(field(), rows_l + rows_r, hyx.dim());
        for (int c = 0; c < hyx.dim(); ++c) {
            Vec lv = left.evaluate({Vec{{c, Scalar::one(field())}}});
            for (auto& [o, s] : lv) m.at(o, c) += s;
            Vec rv = right.evaluate({Vec{{c, Scalar::one(field())}}});
            for (auto& [o, s] : rv) m.at(rows_l + o, c) += s;
        }
        std::vector<Scalar> b(rows_l + rows_r, Scalar::zero(field()));
        for (auto& [o, s] : *ex) b[o] = s;
        for (auto& [o, s] : *ey) b[rows_l + o] = s;
        auto sol = m.solve(b);
        if (!sol) return std::nullopt;
        Vec g;
        for (int c = 0; c < hyx.dim(); ++c) vec_add(g, c, (*sol)[c]);
        return g;
    }
};

struct ExtensionWitness {
    int x_minus = -1, x_plus = -1;
    Vec f_minus, f_plus;
};

/// Witnesses for the extension property: keyed by (collection, object).
struct ExtensionWitnessTable {
    std::map<std::pair<std::vector<ObjSeq>, int>, ExtensionWitness> entries;
};

/// Candidate quasi-isomorphisms searched by the bounded checkers: the closed
/// degree-0 basis elements plus their total sum.  A documented finite cap --
/// the property quantifies over infinitely many morphisms in general.
inline std::vector<Vec> qis_candidates(const AInfInstance& A, int x, int y) {
    std::vector<Vec> out;
    if (!A.is_transversal({x, y})) return out;
    const GradedSpace& h = A.hom(x, y);
    const MultilinearOp* m1 = A.op_ptr({x, y});
    Vec total;
    for (int b = 0; b < h.dim(); ++b) {
        if (canon_deg(A.mode(), h.degree(b)) != 0) continue;
        Vec v{{b, Scalar::one(A.field())}};
        if (m1 && !m1->evaluate({v}).empty()) continue;
        out.push_back(v);
        vec_add(total, b, Scalar::one(A.field()));
    }
    if (total.size() > 1) out.push_back(total);
    return out;
}

struct MissingWitness {
    std::vector<ObjSeq> collection;
    int object;
};

/// Bounded-exhaustive extension-property check: every collection of at most
/// `bound` transversal sequences and every object must admit (X_-, X_+, f_-,
/// f_+) with all extended sequences transversal.  Found witnesses are
/// recorded in `table` when given.
/// Sequences longer than max_seq_len are not enumerated: a family stored up
/// to length L can only witness extensions of sequences of length <= L-2
/// (the default).  Pass max_seq_len explicitly to override.
inline std::vector<MissingWitness> check_extension_property(const AInfInstance& A, int bound,
                                                            ExtensionWitnessTable* table = nullptr,
                                                            int max_seq_len = -1) {
    int cap = 0;
    if (A.full_family())
        cap = A.truncation() + 1;
    else
        for (auto& s : A.family()) cap = std::max(cap, (int)s.size());
    if (max_seq_len < 0) max_seq_len = std::max(1, cap - 2);
    std::vector<ObjSeq> all;
    for (auto& s : A.family())
        if ((int)s.size() <= max_seq_len) all.push_back(s);
    if (A.full_family())
        for (int len = 1; len <= max_seq_len; ++len)
            for (auto& s : A.sequences(len)) all.push_back(s);
    std::vector<MissingWitness> missing;
    auto coh = hom_cohomologies(A);

    // test one (collection, object)
    auto admits = [&](const std::vector<ObjSeq>& coll, int X) -> std::optional<ExtensionWitness> {
        for (int xm = 0; xm < A.object_count(); ++xm)
            for (int xp = 0; xp < A.object_count(); ++xp) {
                bool ok = true;
                for (auto& S : coll) {
                    ObjSeq ext;
                    ext.push_back(xm);
                    ext.insert(ext.end(), S.begin(), S.end());
                    ext.push_back(xp);
                    if (!A.is_transversal(ext)) { ok = false; break; }
                }
                if (!ok) continue;
                for (auto& fm : qis_candidates(A, xm, X)) {
                    if (!is_quasi_isomorphism(A, xm, X, fm, &coh)) continue;
                    for (auto& fp : qis_candidates(A, X, xp)) {
                        if (!is_quasi_isomorphism(A, X, xp, fp, &coh)) continue;
                        return ExtensionWitness{xm, xp, fm, fp};
                    }
                }
            }
        return std::nullopt;
    };

    // enumerate collections of size 1..bound (a witness for a superset covers
    // every subset, but failures must be reported per collection)
    std::vector<std::vector<ObjSeq>> collections;
    std::vector<int> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (!pick.empty() && (int)pick.size() <= bound) {
            std::vector<ObjSeq> coll;
            for (int i : pick) coll.push_back(all[i]);
            collections.push_back(coll);
        }
        if ((int)pick.size() == bound) return;
        for (std::size_t i = start; i < all.size(); ++i) {
            pick.push_back((int)i);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    for (auto& coll : collections)
        for (int X = 0; X < A.object_count(); ++X) {
            auto w = admits(coll, X);
            if (!w)
                missing.push_back({coll, X});
            else if (table)
                table->entries[{coll, X}] = *w;
        }
    return missing;
}

/// Quasi-equivalence of pre-categories: f_1 a quasi-isomorphism of complexes
/// on every transversal source pair, and every target object
/// quasi-isomorphic to an image object.
inline bool check_quasi_equivalence(const AInfFunctor& F) {
    const AInfInstance& C = F.source();
    const AInfInstance& D = F.target();
    auto coh_c = hom_cohomologies(C);
    auto coh_d = hom_cohomologies(D);
    for (auto& pr : C.sequences(2)) {
        const MultilinearOp* f1 = F.comp_ptr(pr);
        MultilinearOp m = f1 ? *f1 : F.zero_comp(pr);
        if (!induces_cohomology_iso(m, coh_c.at({pr[0], pr[1]}),
                                    coh_d.at({F.map_object(pr[0]), F.map_object(pr[1])})))
            return false;
    }
    for (int y = 0; y < D.object_count(); ++y) {
        bool hit = false;
        for (int x = 0; x < C.object_count() && !hit; ++x) {
            int fx = F.map_object(x);
            if (fx == y) { hit = true; break; }
            for (auto& f : qis_candidates(D, fx, y))
                if (is_quasi_isomorphism(D, fx, y, f, &coh_d)) { hit = true; break; }
            for (auto& f : qis_candidates(D, y, fx))
                if (is_quasi_isomorphism(D, y, fx, f, &coh_d)) { hit = true; break; }
        }
        if (!hit) return false;
    }
    return true;
}

}  // namespace ainf
