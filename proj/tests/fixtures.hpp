#pragma once

#include <ainf/precat.hpp>
#include <random>

namespace fx {

using namespace ainf;

/// One-object DG instance from a differential table and a product table.
/// d maps basis name -> linear combination; prod maps (x, y) -> combination,
/// with m_2(x, y) read as "x after y" like every displayed product.
struct DGSpec {
    std::vector<std::pair<std::string, int>> basis;
    std::map<std::string, std::vector<std::pair<std::string, long>>> d;
    std::map<std::pair<std::string, std::string>, std::vector<std::pair<std::string, long>>> prod;
};

inline AInfInstance one_object_dg(Field f, Grading mode, int N, const DGSpec& spec,
                                  const std::string& obj = "X") {
    AInfInstance A(f, mode, N);
    int X = A.add_object(obj);
    GradedSpace H(mode, spec.basis);
    A.set_full_family();
    A.set_hom(X, X, H);
    MultilinearOp m1 = A.zero_op({X, X});
    for (auto& [x, img] : spec.d)
        for (auto& [y, c] : img) m1.add_entry({H.index(x)}, H.index(y), Scalar(f, c));
    if (!m1.is_zero()) A.set_op({X, X}, m1);
    MultilinearOp m2 = A.zero_op({X, X, X});
    for (auto& [xy, img] : spec.prod)
        for (auto& [z, c] : img)
            m2.add_entry({H.index(xy.first), H.index(xy.second)}, H.index(z), Scalar(f, c));
    if (!m2.is_zero()) A.set_op({X, X, X}, m2);
    return A;
}

/// Ground field as a one-object category: Hom = k e in degree 0, e^2 = e.
inline DGSpec ground_field_spec() {
    DGSpec s;
    s.basis = {{"e", 0}};
    s.prod[{"e", "e"}] = {{"e", 1}};
    return s;
}
inline AInfInstance ground_field(Field f, Grading mode = Grading::Z, int N = 6) {
    return one_object_dg(f, mode, N, ground_field_spec());
}

/// Dual numbers k[eps]/eps^2 with deg eps = 0, as a unital graded algebra.
inline DGSpec dual_numbers_spec() {
    DGSpec s;
    s.basis = {{"e", 0}, {"eps", 0}};
    s.prod[{"e", "e"}] = {{"e", 1}};
    s.prod[{"e", "eps"}] = {{"eps", 1}};
    s.prod[{"eps", "e"}] = {{"eps", 1}};
    return s;
}
inline AInfInstance dual_numbers(Field f, Grading mode = Grading::Z, int N = 6) {
    return one_object_dg(f, mode, N, dual_numbers_spec());
}

/// The Massey fixture: a 7-dimensional non-unital DG algebra with
/// d(u) = ab, d(v) = bb, products ab = p, bb = q, av = t, all else zero.
/// H^1 = <a, b>, H^2 = <t>, and the triple product <a,b,b> is t up to sign.
inline AInfInstance massey(Field f, Grading mode = Grading::Z, int N = 6) {
    DGSpec s;
    s.basis = {{"a", 1}, {"b", 1}, {"u", 1}, {"v", 1}, {"p", 2}, {"q", 2}, {"t", 2}};
    s.d["u"] = {{"p", 1}};
    s.d["v"] = {{"q", 1}};
    s.prod[{"a", "b"}] = {{"p", 1}};
    s.prod[{"b", "b"}] = {{"q", 1}};
    s.prod[{"a", "v"}] = {{"t", 1}};
    return one_object_dg(f, mode, N, s);
}

/// Massey fixture with a strict unit adjoined.  Its minimal model has both a
/// nonzero binary product and a nonzero ternary operation, so the structure
/// relations pin the relative signs of the transfer trees.
inline AInfInstance massey_unital(Field f, Grading mode = Grading::Z, int N = 6) {
    DGSpec s;
    s.basis = {{"e", 0}, {"a", 1}, {"b", 1}, {"u", 1}, {"v", 1}, {"p", 2}, {"q", 2}, {"t", 2}};
    s.d["u"] = {{"p", 1}};
    s.d["v"] = {{"q", 1}};
    for (auto& [name, deg] : s.basis) {
        s.prod[{"e", name}] = {{name, 1}};
        if (name != "e") s.prod[{name, "e"}] = {{name, 1}};
    }
    s.prod[{"a", "b"}] = {{"p", 1}};
    s.prod[{"b", "b"}] = {{"q", 1}};
    s.prod[{"a", "v"}] = {{"t", 1}};
    return one_object_dg(f, mode, N, s);
}

/// An exterior-algebra-like DG fixture with nonzero differential:
/// generators x (deg 0), y (deg 1), d(x) = 0, d(y) = 0, xy = yx... kept
/// associative and strictly graded-commutative-free: products below.
inline DGSpec wedge_spec() {
    DGSpec s;
    s.basis = {{"e", 0}, {"x", 0}, {"y", 1}, {"z", 1}};
    s.prod[{"e", "e"}] = {{"e", 1}};
    s.prod[{"e", "x"}] = {{"x", 1}};
    s.prod[{"x", "e"}] = {{"x", 1}};
    s.prod[{"e", "y"}] = {{"y", 1}};
    s.prod[{"y", "e"}] = {{"y", 1}};
    s.prod[{"e", "z"}] = {{"z", 1}};
    s.prod[{"z", "e"}] = {{"z", 1}};
    s.prod[{"x", "x"}] = {{"x", 1}};
    s.prod[{"x", "y"}] = {{"y", 1}};
    s.prod[{"y", "x"}] = {{"y", 1}};
    s.d["x"] = {};
    return s;
}
inline AInfInstance wedge(Field f, Grading mode = Grading::Z, int N = 6) {
    return one_object_dg(f, mode, N, wedge_spec());
}

/// Transversal chain family on one object: (X), (X,X), ..., up to maxlen.
inline std::set<ObjSeq> chain_family(int maxlen, int obj = 0) {
    std::set<ObjSeq> fam;
    for (int l = 1; l <= maxlen; ++l) fam.insert(ObjSeq(l, obj));
    return fam;
}

/// Acyclic two-term complex k -> k with the differential an isomorphism.
inline AInfInstance acyclic_complex(Field f, Grading mode = Grading::Z, int N = 6) {
    DGSpec s;
    s.basis = {{"s", 0}, {"ds", 1}};
    s.d["s"] = {{"ds", 1}};
    return one_object_dg(f, mode, N, s);
}

/// Unit-up-to-boundary fixture: e is a weak identity but not a strict one,
/// since e.e = e + ds with ds exact.
inline AInfInstance weak_unit(Field f, Grading mode = Grading::Z, int N = 6) {
    DGSpec s;
    s.basis = {{"e", 0}, {"s", -1}, {"ds", 0}};
    s.d["s"] = {{"ds", 1}};
    s.prod[{"e", "e"}] = {{"e", 1}, {"ds", 1}};
    s.prod[{"e", "ds"}] = {{"ds", 1}};
    s.prod[{"ds", "e"}] = {{"ds", 1}};
    s.prod[{"e", "s"}] = {{"s", 1}};
    s.prod[{"s", "e"}] = {{"s", 1}};
    return one_object_dg(f, mode, N, s);
}

/// Category with m isomorphic copies of a unital graded algebra: every hom
/// space is the algebra itself, composition is the product.  Full family.
inline AInfInstance copies_category(Field f, Grading mode, int N, const DGSpec& spec, int m) {
    AInfInstance A(f, mode, N);
    for (int i = 0; i < m; ++i) A.add_object("O" + std::to_string(i + 1));
    A.set_full_family();
    GradedSpace H(mode, spec.basis);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) A.set_hom(i, j, H);
    for (int len = 3; len <= 3; ++len)
        for (auto& triple : A.sequences(3)) {
            MultilinearOp m2 = A.zero_op(triple);
            for (auto& [xy, img] : spec.prod)
                for (auto& [z, c] : img)
                    m2.add_entry({H.index(xy.first), H.index(xy.second)}, H.index(z), Scalar(f, c));
            if (!m2.is_zero()) A.set_op(triple, m2);
        }
    return A;
}

/// Weakly increasing index sequences over m objects, up to the given length:
/// a subsequence-closed family realizing the extension property with
/// X_- = O_1, X_+ = O_m.
inline std::set<ObjSeq> weakly_increasing_family(int m, int maxlen) {
    std::set<ObjSeq> fam;
    std::function<void(ObjSeq&)> rec = [&](ObjSeq& cur) {
        if (!cur.empty()) fam.insert(cur);
        if ((int)cur.size() == maxlen) return;
        int lo = cur.empty() ? 0 : cur.back();
        for (int x = lo; x < m; ++x) {
            cur.push_back(x);
            rec(cur);
            cur.pop_back();
        }
    };
    ObjSeq cur;
    rec(cur);
    return fam;
}

/// Random complex: hom space with `dims[d]` basis elements in each degree d
/// and a random differential with d^2 = 0 (built as a sum of elementary
/// rank-1 pieces mapping chosen lower-degree elements into a chosen basis).
inline AInfInstance random_complex(Field f, std::map<int, int> dims, unsigned seed, int N = 4) {
    std::mt19937 rng(seed);
    AInfInstance A(f, Grading::Z, N);
    int X = A.add_object("X");
    A.set_full_family();
    std::vector<std::pair<std::string, int>> basis;
    std::map<int, std::vector<int>> by_deg;
    for (auto& [d, n] : dims)
        for (int k = 0; k < n; ++k) {
            by_deg[d].push_back((int)basis.size());
            basis.push_back({"b" + std::to_string(d) + "_" + std::to_string(k), d});
        }
    GradedSpace H(Grading::Z, basis);
    A.set_hom(X, X, H);
    // pair off random partial matchings x -> y with deg y = deg x + 1; a
    // matching (each source used once, each target used once) squares to zero
    MultilinearOp m1 = A.zero_op({X, X});
    std::set<int> used_src, used_tgt;
    for (auto& [d, srcs] : by_deg) {
        if (!by_deg.count(d + 1)) continue;
        for (int s : srcs) {
            if (used_tgt.count(s)) continue;
            auto& tgts = by_deg[d + 1];
            std::uniform_int_distribution<int> pick(0, (int)tgts.size());
            int k = pick(rng);
            if (k == (int)tgts.size()) continue;  // leave s closed
            int t = tgts[k];
            if (used_tgt.count(t) || used_src.count(t)) continue;
            std::uniform_int_distribution<int> coeff(1, 4);
            m1.add_entry({s}, t, Scalar(f, coeff(rng)));
            used_src.insert(s);
            used_tgt.insert(t);
        }
    }
    if (!m1.is_zero()) A.set_op({X, X}, m1);
    return A;
}

}  // namespace fx
