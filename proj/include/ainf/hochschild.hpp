#pragma once

#include "precat.hpp"

namespace ainf {

/// Bidegree-(i,j) cochain on a graded pre-category: one multilinear component
/// per transversal (i+1)-sequence, valued in the ambient hom of the endpoint
/// pair.  Arity-0 components are keyed by singletons and have no inputs.
struct HochschildCochain {
    int arity = 0;
    int degree = 0;
    std::map<ObjSeq, MultilinearOp> components;
};

/// Signature of an arity-i, degree-j component over a transversal sequence:
/// inputs are the pre-category homs in composition order, the target is the
/// ambient hom of the endpoints.
inline MultilinearOp cochain_signature(const GradedPreCategory& C, const ObjSeq& seq, int j) {
    int i = (int)seq.size() - 1;
    std::vector<GradedSpace> srcs;
    for (int s = 0; s < i; ++s) srcs.push_back(C.pre.hom(seq[i - 1 - s], seq[i - s]));
    return MultilinearOp(C.field(), std::move(srcs), C.ambient.hom(seq[0], seq[i]), j);
}

inline HochschildCochain zero_cochain(const GradedPreCategory& C, int i, int j) {
    HochschildCochain phi{i, j, {}};
    for (auto& seq : C.sequences(i + 1)) phi.components.emplace(seq, cochain_signature(C, seq, j));
    return phi;
}

/// Hochschild differential: for an arity-n, degree-p cochain, the component
/// at (X_0,...,X_{n+1}) evaluated at (a_{n+1},...,a_1), slot 0 = a_{n+1}, is
///   sum_{i=1..n} (-1)^{n-i} phi(a_{n+1},...,a_{i+1}a_i,...,a_1)
///   + (-1)^n phi(a_{n+1},...,a_2) a_1
///   + (-1)^{p deg(a_{n+1}) + 1} a_{n+1} phi(a_n,...,a_1),
/// inner products in the pre-category, outer products in the ambient.
inline HochschildCochain differential(const GradedPreCategory& C, const HochschildCochain& phi) {
    int n = phi.arity, j = phi.degree;
    HochschildCochain out = zero_cochain(C, n + 1, j);
    for (auto& [T, acc] : out.components) {
        for (int i = 1; i <= n; ++i) {
            ObjSeq Tc;
            for (int k = 0; k <= n + 1; ++k)
                if (k != i) Tc.push_back(T[k]);
            auto it = phi.components.find(Tc);
            if (it == phi.components.end() || it->second.is_zero()) continue;
            MultilinearOp m2 = C.pre.op({T[i - 1], T[i], T[i + 1]});
            acc += compose_insert(it->second, m2, n - i, n - i, 0);
        }
        {
            ObjSeq Tc(T.begin() + 1, T.end());
            auto it = phi.components.find(Tc);
            if (it != phi.components.end() && !it->second.is_zero()) {
                MultilinearOp m2 = C.ambient.op({T[0], T[1], T[n + 1]});
                acc += compose_insert(m2, it->second, 0, n, 0);
            }
        }
        {
            ObjSeq Tc(T.begin(), T.end() - 1);
            auto it = phi.components.find(Tc);
            if (it != phi.components.end() && !it->second.is_zero()) {
                MultilinearOp m2 = C.ambient.op({T[0], T[n], T[n + 1]});
                acc += compose_insert(m2, it->second, 1, 1, j);
            }
        }
    }
    return out;
}

inline bool cochain_is_zero(const HochschildCochain& phi) {
    for (auto& [seq, c] : phi.components)
        if (!c.is_zero()) return false;
    return true;
}

/// One coordinate of the flattened cochain space CC^{i,j}.
struct CCBasisElem {
    ObjSeq seq;
    std::vector<int> tuple;
    int out = 0;
};

inline std::vector<CCBasisElem> cc_basis(const GradedPreCategory& C, int i, int j) {
    std::vector<CCBasisElem> out;
    for (auto& seq : C.sequences(i + 1)) {
        MultilinearOp sig = cochain_signature(C, seq, j);
        bool empty_slot = false;
        for (int s = 0; s < i; ++s)
            if (sig.source(s).dim() == 0) empty_slot = true;
        if (empty_slot) continue;
        std::vector<int> t(i, 0);
        while (true) {
            long din = sig.input_degree(t) + j;
            for (int o = 0; o < sig.target().dim(); ++o)
                if (sig.target().degrees_equal(din, sig.target().degree(o))) out.push_back({seq, t, o});
            int s = i - 1;
            while (s >= 0 && ++t[s] == sig.source(s).dim()) t[s--] = 0;
            if (s < 0) break;
        }
    }
    return out;
}

inline std::vector<Scalar> flatten_cochain(const GradedPreCategory& C, const HochschildCochain& phi,
                                           const std::vector<CCBasisElem>& basis) {
    std::vector<Scalar> v(basis.size(), Scalar::zero(C.field()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        auto it = phi.components.find(basis[k].seq);
        if (it == phi.components.end()) continue;
        if (const Vec* val = it->second.lookup(basis[k].tuple)) {
            auto h = val->find(basis[k].out);
            if (h != val->end()) v[k] = h->second;
        }
    }
    return v;
}

inline HochschildCochain unflatten_cochain(const GradedPreCategory& C, int i, int j,
                                           const std::vector<CCBasisElem>& basis, const std::vector<Scalar>& v) {
    HochschildCochain phi = zero_cochain(C, i, j);
    for (std::size_t k = 0; k < basis.size(); ++k)
        if (!v[k].is_zero()) phi.components.at(basis[k].seq).add_entry(basis[k].tuple, basis[k].out, v[k]);
    return phi;
}

/// Matrix of the differential CC^{i,j} -> CC^{i+1,j} over the given bases.
inline ExactMatrix differential_matrix(const GradedPreCategory& C, int i, int j,
                                       const std::vector<CCBasisElem>& dom, const std::vector<CCBasisElem>& cod) {
    ExactMatrix m(C.field(), cod.size(), dom.size());
    for (std::size_t c = 0; c < dom.size(); ++c) {
        HochschildCochain phi = zero_cochain(C, i, j);
        phi.components.at(dom[c].seq).add_entry(dom[c].tuple, dom[c].out, Scalar::one(C.field()));
        std::vector<Scalar> col = flatten_cochain(C, differential(C, phi), cod);
        for (std::size_t r = 0; r < cod.size(); ++r) m.at(r, c) = col[r];
    }
    return m;
}

inline ExactMatrix differential_matrix(const GradedPreCategory& C, int i, int j) {
    return differential_matrix(C, i, j, cc_basis(C, i, j), cc_basis(C, i + 1, j));
}

/// Internal degrees that occur in CC^{i,.} for some i <= I (canonical form).
inline std::set<int> cc_degrees(const GradedPreCategory& C, int I) {
    std::set<int> js;
    for (int i = 0; i <= I; ++i)
        for (auto& seq : C.sequences(i + 1)) {
            MultilinearOp sig = cochain_signature(C, seq, 0);
            bool empty_slot = false;
            for (int s = 0; s < i; ++s)
                if (sig.source(s).dim() == 0) empty_slot = true;
            if (empty_slot) continue;
            std::vector<int> t(i, 0);
            while (true) {
                long din = sig.input_degree(t);
                for (int o = 0; o < sig.target().dim(); ++o)
                    js.insert(canon_deg(C.mode(), sig.target().degree(o) - din));
                int s = i - 1;
                while (s >= 0 && ++t[s] == sig.source(s).dim()) t[s--] = 0;
                if (s < 0) break;
            }
        }
    return js;
}

struct HHEntry {
    int dim = 0;
    bool final = false;  // true when the next cochain level was materialized
};
using HHTable = std::map<std::pair<int, int>, HHEntry>;

inline std::map<std::pair<int, int>, int> cc_dimensions(const GradedPreCategory& C, int I) {
    std::map<std::pair<int, int>, int> out;
    for (int i = 0; i <= I; ++i)
        for (int j : cc_degrees(C, I)) out[{i, j}] = (int)cc_basis(C, i, j).size();
    return out;
}

/// dim HH^{i,j} for i <= I-1 by exact rank-nullity; every reported entry is
/// final because cochains are materialized through level I.
inline HHTable hh_dimensions(const GradedPreCategory& C, int I) {
    HHTable out;
    for (int j : cc_degrees(C, I)) {
        std::vector<std::vector<CCBasisElem>> bases(I + 1);
        for (int i = 0; i <= I; ++i) bases[i] = cc_basis(C, i, j);
        std::vector<std::size_t> ranks(I);
        for (int i = 0; i < I; ++i) ranks[i] = differential_matrix(C, i, j, bases[i], bases[i + 1]).rank();
        for (int i = 0; i <= I - 1; ++i) {
            int ker = (int)bases[i].size() - (int)ranks[i];
            int im = i == 0 ? 0 : (int)ranks[i - 1];
            out[{i, j}] = {ker - im, true};
        }
    }
    return out;
}

/// Column-major matrix of an arity-1 component.
inline ExactMatrix op_matrix(const MultilinearOp& f1) {
    ExactMatrix m(f1.field(), f1.target().dim(), f1.source(0).dim());
    for (int c = 0; c < f1.source(0).dim(); ++c)
        if (const Vec* v = f1.lookup({c}))
            for (auto& [o, s] : *v) m.at(o, c) += s;
    return m;
}

inline Vec matrix_apply(const ExactMatrix& m, const Vec& v) {
    Vec out;
    for (auto& [c, s] : v)
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (!m.at(r, c).is_zero()) vec_add(out, (int)r, m.at(r, c) * s);
    return out;
}

/// Pullback of a cochain on D along a graded functor F (f_1 only, between
/// the ambient categories, respecting the families): components of phi at
/// the image sequences, inputs precomposed with f_1 and the value pulled
/// back through the inverse of the ambient f_1 on the endpoint pair.
inline HochschildCochain restriction(const GradedPreCategory& C, const GradedPreCategory& D, const AInfFunctor& F,
                                     const HochschildCochain& phi) {
    for (auto& [seq, comp] : F.comps())
        if (seq.size() != 2) throw std::invalid_argument("restriction: functor must be graded (f_1 only)");
    HochschildCochain out = zero_cochain(C, phi.arity, phi.degree);
    std::map<std::pair<int, int>, ExactMatrix> inv_cache;
    auto inverse_at = [&](int x, int y) -> const ExactMatrix& {
        auto key = std::make_pair(x, y);
        auto it = inv_cache.find(key);
        if (it != inv_cache.end()) return it->second;
        auto inv = op_matrix(F.comp({x, y})).inverse();
        if (!inv) throw std::invalid_argument("restriction: functor not fully faithful on ambient pair");
        return inv_cache.emplace(key, std::move(*inv)).first->second;
    };
    for (auto& [S, comp] : out.components) {
        int i = phi.arity;
        ObjSeq FS = F.map_seq(S);
        if (!D.pre.is_transversal(FS)) throw std::invalid_argument("restriction: image sequence not transversal");
        auto it = phi.components.find(FS);
        if (it == phi.components.end() || it->second.is_zero()) continue;
        const MultilinearOp& psi = it->second;
        const ExactMatrix& inv = inverse_at(S[0], S[i]);
        if (i == 0) {
            comp.add_entry({}, matrix_apply(inv, psi.evaluate({})), Scalar::one(C.field()));
            continue;
        }
        bool empty_slot = false;
        for (int s = 0; s < i; ++s)
            if (comp.source(s).dim() == 0) empty_slot = true;
        if (empty_slot) continue;
        std::vector<int> t(i, 0);
        while (true) {
            std::vector<Vec> args(i);
            for (int s = 0; s < i; ++s)
                args[s] = F.comp({S[i - 1 - s], S[i - s]}).evaluate({Vec{{t[s], Scalar::one(C.field())}}});
            Vec val = psi.evaluate(args);
            if (!val.empty()) comp.add_entry(t, matrix_apply(inv, val), Scalar::one(C.field()));
            int s = i - 1;
            while (s >= 0 && ++t[s] == comp.source(s).dim()) t[s--] = 0;
            if (s < 0) break;
        }
    }
    return out;
}

/// Chosen cocycle representatives of HH^{i,j}: image columns of the incoming
/// differential followed by kernel vectors extending them, all as coordinate
/// vectors over cc_basis(C, i, j).
struct CCCohomology {
    std::vector<CCBasisElem> basis;
    std::vector<std::vector<Scalar>> im;
    std::vector<std::vector<Scalar>> reps;
    // elimination of the kept columns (im first, then reps): pivot row,
    // reduced vector, and its expansion over the kept columns
    struct Elim {
        std::size_t pivot;
        std::vector<Scalar> vec;
        std::vector<Scalar> expand;
    };
    std::vector<Elim> elim;
};

inline CCCohomology cc_cohomology(const GradedPreCategory& C, int i, int j) {
    CCCohomology out;
    out.basis = cc_basis(C, i, j);
    Field f = C.field();
    std::size_t n = out.basis.size();
    // incremental elimination over the columns seen so far: reduces v against
    // the kept pivots, keeps it when a pivot survives
    auto absorb = [&](std::vector<Scalar> v) {
        std::vector<Scalar> expand(out.elim.size() + 1, Scalar::zero(f));
        expand.back() = Scalar::one(f);
        for (std::size_t e = 0; e < out.elim.size(); ++e) {
            auto& [p, w, we] = out.elim[e];
            if (v[p].is_zero()) continue;
            Scalar c = v[p] / w[p];
            for (std::size_t r = 0; r < n; ++r) v[r] = v[r] - c * w[r];
            for (std::size_t k = 0; k < we.size(); ++k) expand[k] = expand[k] - c * we[k];
        }
        for (std::size_t r = 0; r < n; ++r)
            if (!v[r].is_zero()) {
                out.elim.push_back({r, std::move(v), std::move(expand)});
                return true;
            }
        return false;
    };
    if (i > 0) {
        auto prev = cc_basis(C, i - 1, j);
        ExactMatrix into = differential_matrix(C, i - 1, j, prev, out.basis);
        for (std::size_t c = 0; c < into.cols(); ++c) {
            std::vector<Scalar> col;
            for (std::size_t r = 0; r < n; ++r) col.push_back(into.at(r, c));
            if (absorb(col)) out.im.push_back(std::move(col));
        }
    }
    ExactMatrix from = differential_matrix(C, i, j, out.basis, cc_basis(C, i + 1, j));
    for (auto& kv : from.kernel_basis())
        if (absorb(kv)) out.reps.push_back(kv);
    return out;
}

/// Class coordinates of a cocycle coordinate vector, or nullopt if it is not
/// in the span of image and representatives (not a cocycle).
inline std::optional<std::vector<Scalar>> cc_class_coords(Field f, const CCCohomology& coh,
                                                          const std::vector<Scalar>& v) {
    std::size_t n = coh.basis.size();
    std::vector<Scalar> w = v;
    std::vector<Scalar> x(coh.elim.size(), Scalar::zero(f));
    for (std::size_t e = 0; e < coh.elim.size(); ++e) {
        auto& el = coh.elim[e];
        if (w[el.pivot].is_zero()) continue;
        Scalar c = w[el.pivot] / el.vec[el.pivot];
        for (std::size_t r = 0; r < n; ++r) w[r] = w[r] - c * el.vec[r];
        for (std::size_t k = 0; k < el.expand.size(); ++k) x[k] = x[k] + c * el.expand[k];
    }
    for (std::size_t r = 0; r < n; ++r)
        if (!w[r].is_zero()) return std::nullopt;
    return std::vector<Scalar>(x.begin() + coh.im.size(), x.end());
}

struct HHIsoReport {
    bool all_iso = true;
    std::map<std::pair<int, int>, bool> entries;  // (i,j) -> induced map bijective
};

/// Checks that the pullback along an equivalence of graded pre-categories
/// induces bijections HH^{i,j}(D) -> HH^{i,j}(C) for i <= I-1.
inline HHIsoReport induced_hh_iso_check(const GradedPreCategory& C, const GradedPreCategory& D, const AInfFunctor& F,
                                        int I) {
    HHIsoReport report;
    std::set<int> js = cc_degrees(C, I);
    for (int j : cc_degrees(D, I)) js.insert(j);
    for (int j : js)
        for (int i = 0; i <= I - 1; ++i) {
            CCCohomology cohD = cc_cohomology(D, i, j);
            CCCohomology cohC = cc_cohomology(C, i, j);
            bool ok = cohD.reps.size() == cohC.reps.size();
            if (ok && !cohD.reps.empty()) {
                std::size_t n = cohC.reps.size();
                ExactMatrix m(C.field(), n, n);
                for (std::size_t c = 0; c < n && ok; ++c) {
                    HochschildCochain rep = unflatten_cochain(D, i, j, cohD.basis, cohD.reps[c]);
                    std::vector<Scalar> v = flatten_cochain(C, restriction(C, D, F, rep), cohC.basis);
                    auto coords = cc_class_coords(C.field(), cohC, v);
                    if (!coords) {
                        ok = false;
                        break;
                    }
                    for (std::size_t r = 0; r < n; ++r) m.at(r, c) = (*coords)[r];
                }
                if (ok) ok = m.rank() == n;
            }
            report.entries[{i, j}] = ok;
            if (!ok) report.all_iso = false;
        }
    return report;
}

/// Action of a non-decreasing map f:[m]->[n] on an arity-m component over
/// f^*(Y_0,...,Y_n), producing an arity-n operation along (Y_0,...,Y_n):
///   f(phi)(a_n,...,a_1) = (-1)^{eps} a_n...a_{f(m)+1}
///       phi(a_{f(m)}...a_{f(m-1)+1}, ..., a_{f(1)}...a_{f(0)+1}) a_{f(0)}...a_1
/// with eps = deg(phi) * sum_{i>f(m)} deg(a_i) + (n-m)(n+m+1)/2; empty
/// products are ambient identities.
inline MultilinearOp simplicial_action(const GradedPreCategory& C, const std::vector<int>& f, const ObjSeq& Y,
                                       const MultilinearOp& phi) {
    int m = (int)f.size() - 1;
    int n = (int)Y.size() - 1;
    if (m < 0 || n < 0) throw std::invalid_argument("simplicial_action: empty map or tuple");
    for (int l = 0; l + 1 <= m; ++l)
        if (f[l] > f[l + 1]) throw std::invalid_argument("simplicial_action: map not non-decreasing");
    if (f[0] < 0 || f[m] > n) throw std::invalid_argument("simplicial_action: map out of range");
    if (phi.arity() != m) throw std::invalid_argument("simplicial_action: component arity mismatch");
    Field fd = C.field();
    const AInfInstance& amb = C.ambient;
    std::vector<Vec> ids(amb.object_count());
    for (int x = 0; x < amb.object_count(); ++x) ids[x] = *find_strict_identity(amb, x);

    std::vector<GradedSpace> srcs;
    for (int s = 0; s < n; ++s) srcs.push_back(amb.hom(Y[n - 1 - s], Y[n - s]));
    MultilinearOp out(fd, srcs, amb.hom(Y[0], Y[n]), phi.degree());
    if (phi.is_zero()) return out;

    // product a_hi ... a_{lo+1} along the path, an element of Hom(Y_lo, Y_hi)
    auto segment = [&](const std::vector<Vec>& a, int lo, int hi) -> Vec {
        if (lo == hi) return ids[Y[lo]];
        Vec cur = a[lo + 1];
        for (int i = lo + 2; i <= hi; ++i) cur = amb.op({Y[lo], Y[i - 1], Y[i]}).evaluate({a[i], cur});
        return cur;
    };

    std::vector<int> t(n, 0);
    bool empty_slot = false;
    for (int s = 0; s < n; ++s)
        if (srcs[s].dim() == 0) empty_slot = true;
    if (empty_slot && n > 0) return out;
    while (true) {
        std::vector<Vec> a(n + 1);  // a[i] in Hom(Y_{i-1}, Y_i)
        for (int s = 0; s < n; ++s) a[n - s] = Vec{{t[s], Scalar::one(fd)}};
        std::vector<Vec> args(m);
        for (int p = 1; p <= m; ++p) args[m - p] = segment(a, f[p - 1], f[p]);
        Vec val = phi.evaluate(args);
        if (!val.empty() && f[0] > 0) val = amb.op({Y[0], Y[f[0]], Y[f[m]]}).evaluate({val, segment(a, 0, f[0])});
        if (!val.empty() && f[m] < n) val = amb.op({Y[0], Y[f[m]], Y[n]}).evaluate({segment(a, f[m], n), val});
        if (!val.empty()) {
            long eps = (long)(n - m) * (n + m + 1) / 2;
            for (int i = f[m] + 1; i <= n; ++i) eps += (long)phi.degree() * amb.hom(Y[i - 1], Y[i]).degree(t[n - i]);
            out.add_entry(t, val, sign_of(fd, eps));
        }
        int s = n - 1;
        while (s >= 0 && ++t[s] == srcs[s].dim()) t[s--] = 0;
        if (s < 0) break;
    }
    return out;
}

/// One basis element of Q_m(T): a non-decreasing f:[m]->[n] together with a
/// transversal sequence S with F(S) = f^*(T).
struct QPair {
    std::vector<int> f;
    ObjSeq S;
    bool operator<(const QPair& o) const { return std::tie(f, S) < std::tie(o.f, o.S); }
    bool operator==(const QPair& o) const { return f == o.f && S == o.S; }
};

enum class QWitnessCheck { verified, failed, inconclusive };

struct QResolutionReport {
    bool acyclic = false;               // rank verdict on the augmented complex
    std::map<int, int> homology_dims;   // m -> dim H_m, m >= -1
    QWitnessCheck witness_check = QWitnessCheck::inconclusive;
};

inline std::vector<QPair> q_basis(const GradedPreCategory& C, const AInfFunctor& F, const ObjSeq& T, int m) {
    int n = (int)T.size() - 1;
    std::vector<QPair> out;
    for (auto& S : C.sequences(m + 1)) {
        std::vector<int> f(m + 1, 0);
        std::function<void(int, int)> rec = [&](int l, int lo) {
            if (l == m + 1) {
                out.push_back({f, S});
                return;
            }
            for (int p = lo; p <= n; ++p)
                if (T[p] == F.map_object(S[l])) {
                    f[l] = p;
                    rec(l + 1, p);
                }
        };
        rec(0, 0);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Face differential Q_m -> Q_{m-1}: alternating sum of simultaneous
/// deletions from f and S.
inline ExactMatrix q_differential(const GradedPreCategory& C, const std::vector<QPair>& dom,
                                  const std::vector<QPair>& cod) {
    ExactMatrix mtx(C.field(), cod.size(), dom.size());
    for (std::size_t c = 0; c < dom.size(); ++c) {
        int m = (int)dom[c].S.size() - 1;
        for (int i = 0; i <= m; ++i) {
            QPair face;
            for (int k = 0; k <= m; ++k)
                if (k != i) {
                    face.f.push_back(dom[c].f[k]);
                    face.S.push_back(dom[c].S[k]);
                }
            auto it = std::lower_bound(cod.begin(), cod.end(), face);
            if (it == cod.end() || !(*it == face))
                throw std::logic_error("q_differential: face missing from basis");
            mtx.at(it - cod.begin(), c) += sign_of(C.field(), i);
        }
    }
    return mtx;
}

/// Rank-based acyclicity of the augmented complex Q_.(T), cross-checked by
/// building contracting preimages from extension witnesses: for a cycle
/// a = sum lambda_k (f_k, S_k), an object W with F(W) = T_0 and every (W,S_k)
/// transversal yields b = sum lambda_k (g_k, (W,S_k)), g_k = (0, f_k), with
/// del(b) = a.  Cycles with no usable witness leave the check inconclusive.
inline QResolutionReport verify_Q_resolution(const GradedPreCategory& C, const AInfFunctor& F, const ObjSeq& T,
                                             const ExtensionWitnessTable& witnesses) {
    QResolutionReport report;
    Field fd = C.field();
    int mmax = 0;
    for (auto& S : C.family) mmax = std::max(mmax, (int)S.size() - 1);
    std::vector<std::vector<QPair>> bases(mmax + 1);
    for (int m = 0; m <= mmax; ++m) bases[m] = q_basis(C, F, T, m);
    std::vector<ExactMatrix> d;  // d[m]: Q_m -> Q_{m-1}, d[0] the augmentation
    d.push_back(ExactMatrix(fd, 1, bases[0].size()));
    for (std::size_t c = 0; c < bases[0].size(); ++c) d[0].at(0, c) = Scalar::one(fd);
    for (int m = 1; m <= mmax; ++m) d.push_back(q_differential(C, bases[m], bases[m - 1]));

    std::vector<std::size_t> ranks(mmax + 1);
    for (int m = 0; m <= mmax; ++m) ranks[m] = d[m].rank();
    report.homology_dims[-1] = 1 - (int)ranks[0];
    for (int m = 0; m <= mmax; ++m) {
        std::size_t ker = bases[m].size() - ranks[m];
        std::size_t im = m == mmax ? 0 : ranks[m + 1];
        report.homology_dims[m] = (int)(ker - im);
    }
    report.acyclic = true;
    for (auto& [m, h] : report.homology_dims)
        if (h != 0) report.acyclic = false;

    // witness cross-check on every kernel basis vector of every level
    std::set<int> candidates;
    for (auto& [key, w] : witnesses.entries) {
        candidates.insert(w.x_minus);
        candidates.insert(w.x_plus);
    }
    bool any_gap = false;
    for (int m = 0; m < mmax; ++m) {
        for (auto& kv : d[m].kernel_basis()) {
            std::vector<int> support;
            for (std::size_t c = 0; c < kv.size(); ++c)
                if (!kv[c].is_zero()) support.push_back((int)c);
            int found = -1;
            for (int W : candidates) {
                if (F.map_object(W) != T[0]) continue;
                bool ok = true;
                for (int c : support) {
                    ObjSeq ext{W};
                    ext.insert(ext.end(), bases[m][c].S.begin(), bases[m][c].S.end());
                    if (!C.pre.is_transversal(ext)) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    found = W;
                    break;
                }
            }
            if (found < 0) {
                any_gap = true;
                continue;
            }
            std::vector<Scalar> b(bases[m + 1].size(), Scalar::zero(fd));
            for (int c : support) {
                QPair lift;
                lift.f.push_back(0);
                lift.f.insert(lift.f.end(), bases[m][c].f.begin(), bases[m][c].f.end());
                lift.S.push_back(found);
                lift.S.insert(lift.S.end(), bases[m][c].S.begin(), bases[m][c].S.end());
                auto it = std::lower_bound(bases[m + 1].begin(), bases[m + 1].end(), lift);
                if (it == bases[m + 1].end() || !(*it == lift)) {
                    report.witness_check = QWitnessCheck::failed;
                    return report;
                }
                b[it - bases[m + 1].begin()] = kv[c];
            }
            std::vector<Scalar> db = d[m + 1].apply(b);
            for (std::size_t r = 0; r < db.size(); ++r)
                if (!(db[r] == kv[r])) {
                    report.witness_check = QWitnessCheck::failed;
                    return report;
                }
        }
    }
    report.witness_check = any_gap ? QWitnessCheck::inconclusive : QWitnessCheck::verified;
    return report;
}

/// Solves del(phi) = psi for an arity-(i-1) primitive of an arity-i cochain.
inline std::optional<HochschildCochain> solve_primitive(const GradedPreCategory& C, const HochschildCochain& psi) {
    int i = psi.arity, j = psi.degree;
    if (i < 1) return std::nullopt;
    if (!cochain_is_zero(differential(C, psi))) throw std::invalid_argument("solve_primitive: cochain not closed");
    auto dom = cc_basis(C, i - 1, j);
    auto cod = cc_basis(C, i, j);
    ExactMatrix m = differential_matrix(C, i - 1, j, dom, cod);
    auto x = m.solve(flatten_cochain(C, psi, cod));
    if (!x) return std::nullopt;
    return unflatten_cochain(C, i - 1, j, dom, *x);
}

}  // namespace ainf
