#pragma once

#include <functional>

#include "precat.hpp"

namespace ainf {

/// ---------------------------------------------------------------- shifts --

inline std::string shifted_name(const std::string& base, int n) {
    return base + "[" + std::to_string(n) + "]";
}

/// Category of formal shifts X[n] over a finite shift window.  Hom spaces are
/// the shifted homs; each operation is the base operation rescaled by
/// (-1)^{arity * (shift of the target object)}, the unique rescaling (up to
/// basis changes) under which the defining relations transport: in a relation
/// term the inner/outer arity-times-end-shift exponents combine with the
/// Koszul contribution of the shifted degrees to a factor independent of the
/// insertion slot.
inline AInfInstance build_shift_category(const AInfInstance& C, std::vector<int> window) {
    if (C.mode() == Grading::Z2)
        for (int& w : window) w = parity(w);
    std::sort(window.begin(), window.end());
    window.erase(std::unique(window.begin(), window.end()), window.end());
    if (window.empty()) throw std::invalid_argument("build_shift_category: empty shift window");
    int W = (int)window.size();
    AInfInstance S(C.field(), C.mode(), C.truncation());
    for (int b = 0; b < C.object_count(); ++b)
        for (int w = 0; w < W; ++w) S.add_object(shifted_name(C.object_name(b), window[w]));
    auto sid = [&](int b, int w) { return b * W + w; };
    for (int b1 = 0; b1 < C.object_count(); ++b1)
        for (int b2 = 0; b2 < C.object_count(); ++b2) {
            if (!C.has_hom(b1, b2)) continue;
            for (int w1 = 0; w1 < W; ++w1)
                for (int w2 = 0; w2 < W; ++w2)
                    S.set_hom(sid(b1, w1), sid(b2, w2), shift(C.hom(b1, b2), window[w2] - window[w1]));
        }
    if (C.full_family()) {
        S.set_full_family();
    } else {
        for (auto& seq : C.family()) {
            std::vector<int> w(seq.size(), 0);
            while (true) {
                ObjSeq dec(seq.size());
                for (std::size_t p = 0; p < seq.size(); ++p) dec[p] = sid(seq[p], w[p]);
                S.add_transversal(dec);
                int p = (int)seq.size() - 1;
                while (p >= 0 && ++w[p] == W) w[p--] = 0;
                if (p < 0) break;
            }
        }
    }
    for (auto& [seq, op] : C.ops()) {
        int a = (int)seq.size() - 1;
        std::vector<int> w(seq.size(), 0);
        while (true) {
            ObjSeq dec(seq.size());
            for (std::size_t p = 0; p < seq.size(); ++p) dec[p] = sid(seq[p], w[p]);
            MultilinearOp out = S.zero_op(dec);
            Scalar sg = sign_of(C.field(), (long)a * window[w.back()]);
            for (auto& [tuple, v] : op.entries()) out.add_entry(tuple, v, sg);
            if (!out.is_zero()) S.set_op(dec, std::move(out));
            int p = (int)seq.size() - 1;
            while (p >= 0 && ++w[p] == W) w[p--] = 0;
            if (p < 0) break;
        }
    }
    return S;
}

/// ---------------------------------------------- nilpotent algebras, MC ----

/// Non-unital A-infinity algebra with a finite decreasing filtration
/// F_1 = everything, ..., F_flength = 0, split by basis elements: level[b]
/// is the largest r with b in F_r.  Every product must raise levels
/// additively (filtration_violations checks this entrywise).
struct NilpotentAInf {
    Field field{};
    Grading mode = Grading::Z;
    GradedSpace space;
    std::vector<int> level;
    int flength = 1;
    std::map<int, MultilinearOp> ops;  // arity -> product, absent = zero
};

inline std::string pos_name(int i, int j, const std::string& base) {
    return std::to_string(i) + ">" + std::to_string(j) + ":" + base;
}

inline int filtration_violations(const NilpotentAInf& A) {
    int bad = 0;
    for (auto& [k, op] : A.ops) {
        (void)k;
        for (auto& [tuple, v] : op.entries()) {
            long in = 0;
            for (int s = 0; s < op.arity(); ++s) in += A.level[tuple[s]];
            for (auto& [o, c] : v) {
                (void)c;
                if (A.level[o] < in) ++bad;
            }
        }
    }
    return bad;
}

/// End_+(S) = direct sum of Hom(X_i, X_j) over i < j, with the products of A
/// along ascending position chains and filtration level j - i.
inline NilpotentAInf end_plus(const AInfInstance& A, const ObjSeq& S) {
    if (!A.is_transversal(S)) throw std::invalid_argument("end_plus: sequence not transversal");
    int n = (int)S.size();
    NilpotentAInf E;
    E.field = A.field();
    E.mode = A.mode();
    E.flength = std::max(n, 1);
    std::vector<std::pair<std::string, int>> basis;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const GradedSpace& h = A.hom(S[i], S[j]);
            for (int b = 0; b < h.dim(); ++b) {
                basis.push_back({pos_name(i, j, h.name(b)), h.degree(b)});
                E.level.push_back(j - i);
            }
        }
    E.space = GradedSpace(A.mode(), basis);
    int maxk = std::min(A.truncation(), n - 1);
    for (int k = 1; k <= maxk; ++k) {
        MultilinearOp mk(A.field(), std::vector<GradedSpace>((std::size_t)k, E.space), E.space, 2 - k);
        // ascending position chains i_0 < ... < i_k
        std::vector<int> c(k + 1);
        for (int s = 0; s <= k; ++s) c[s] = s;
        while (true) {
            ObjSeq path(k + 1);
            for (int s = 0; s <= k; ++s) path[s] = S[c[s]];
            if (const MultilinearOp* op = A.op_ptr(path)) {
                for (auto& [tuple, v] : op->entries()) {
                    std::vector<int> big(k);
                    for (int s = 0; s < k; ++s) {
                        // slot s of op is the arrow position c[k-1-s] -> c[k-s]
                        const GradedSpace& h = A.hom(S[c[k - 1 - s]], S[c[k - s]]);
                        big[s] = E.space.index(pos_name(c[k - 1 - s], c[k - s], h.name(tuple[s])));
                    }
                    const GradedSpace& ht = A.hom(S[c[0]], S[c[k]]);
                    for (auto& [o, s] : v)
                        mk.add_entry(big, E.space.index(pos_name(c[0], c[k], ht.name(o))), s);
                }
            }
            // next chain
            int p = k;
            while (p >= 0 && ++c[p] == n - (k - p)) --p;
            if (p < 0) break;
            for (int s = p + 1; s <= k; ++s) c[s] = c[s - 1] + 1;
        }
        if (!mk.is_zero()) E.ops.emplace(k, std::move(mk));
    }
    return E;
}

inline void require_degree(const NilpotentAInf& A, const Vec& v, int deg, const char* who) {
    for (auto& [i, c] : v) {
        (void)c;
        if (canon_deg(A.mode, A.space.degree(i)) != canon_deg(A.mode, deg))
            throw std::invalid_argument(std::string(who) + ": element not of degree " + std::to_string(deg));
    }
}

/// Maurer-Cartan residual sum_{k>=1} m_k(alpha, ..., alpha); the sum is
/// finite because products raise filtration levels.
inline Vec mc_residual(const NilpotentAInf& A, const Vec& alpha) {
    require_degree(A, alpha, 1, "mc_residual");
    Vec r;
    for (auto& [k, mk] : A.ops) vec_add(r, mk.evaluate(std::vector<Vec>((std::size_t)k, alpha)), Scalar::one(A.field));
    return r;
}

inline bool check_mc(const NilpotentAInf& A, const Vec& alpha) { return mc_residual(A, alpha).empty(); }

namespace detail {

/// Differential on morphisms between the twisted structures alpha (source)
/// and beta (target): sum over k0, k1 of the alpha-insertion products with
/// the twisted-product sign at one input.
inline Vec twisted_d(const NilpotentAInf& A, const Vec& alpha, const Vec& beta, const Vec& x, long xdeg) {
    Vec r;
    for (auto& [a, mk] : A.ops) {
        int arity = a;
        for (int k1 = 0; k1 + 1 <= arity; ++k1) {
            int k0 = arity - 1 - k1;
            long eps = (xdeg + k1) * (long)k0 + (long)k1 * (k1 + 1) / 2 + (long)k0 * (k0 + 1) / 2 + k1;
            std::vector<Vec> args;
            for (int s = 0; s < k1; ++s) args.push_back(beta);
            args.push_back(x);
            for (int s = 0; s < k0; ++s) args.push_back(alpha);
            vec_add(r, mk.evaluate(args), sign_of(A.field, eps));
        }
    }
    return r;
}

}  // namespace detail

/// Residual of the gauge-morphism equation for h: alpha -> beta; zero means
/// h is a morphism in the Maurer-Cartan groupoid.  The adopted equation is
/// beta - alpha = d_{alpha,beta}(h) with the twisted differential above.
inline Vec gauge_residual(const NilpotentAInf& A, const Vec& alpha, const Vec& beta, const Vec& h) {
    require_degree(A, h, 0, "gauge_residual");
    return vec_sub(vec_sub(beta, alpha), detail::twisted_d(A, alpha, beta, h, 0));
}

inline bool check_gauge(const NilpotentAInf& A, const Vec& alpha, const Vec& beta, const Vec& h) {
    if (!check_mc(A, alpha) || !check_mc(A, beta))
        throw std::invalid_argument("check_gauge: endpoints are not Maurer-Cartan solutions");
    return gauge_residual(A, alpha, beta, h).empty();
}

/// The integrated action: the unique beta with beta = alpha + d_{alpha,beta}(h),
/// solved by filtration-level iteration (each pass fixes one more level).
inline Vec gauge_act(const NilpotentAInf& A, const Vec& alpha, const Vec& h) {
    require_degree(A, h, 0, "gauge_act");
    Vec beta = alpha;
    for (int it = 0; it < A.flength; ++it) {
        Vec next = alpha;
        vec_add(next, detail::twisted_d(A, alpha, beta, h, 0), Scalar::one(A.field));
        beta = std::move(next);
    }
    return beta;
}

/// Pushforward of alpha along an algebra morphism given by components
/// f_k : A1^k -> A2 of degree 1-k.
inline Vec push_mc(const std::map<int, MultilinearOp>& f, const Vec& alpha, Field fld) {
    Vec r;
    for (auto& [k, fk] : f) vec_add(r, fk.evaluate(std::vector<Vec>((std::size_t)k, alpha)), Scalar::one(fld));
    return r;
}

struct MCLift {
    Vec alpha;  // Maurer-Cartan solution in the source
    Vec h;      // gauge morphism f(alpha) -> beta in the target
};

/// Lifts a Maurer-Cartan solution beta through a filtered quasi-isomorphism
/// f : A1 -> A2: constructs alpha in A1 and a gauge witness h with
/// f(alpha) gauge-equivalent to beta, by exact linear solves over the
/// filtration levels (the level-r parts of the residuals are linear in the
/// level-r unknowns).  Throws when an obstruction does not vanish.
inline MCLift mc_lift(const NilpotentAInf& A1, const NilpotentAInf& A2, const std::map<int, MultilinearOp>& f,
                      const Vec& beta) {
    Field fld = A1.field;
    require_degree(A2, beta, 1, "mc_lift");
    if (!check_mc(A2, beta)) throw std::invalid_argument("mc_lift: beta is not a Maurer-Cartan solution");
    for (auto& [k, fk] : f)
        for (auto& [tuple, v] : fk.entries()) {
            long in = 0;
            for (int s = 0; s < (int)tuple.size(); ++s) in += A1.level[tuple[s]];
            for (auto& [o, c] : v) {
                (void)c;
                (void)k;
                if (A2.level[o] < in) throw std::invalid_argument("mc_lift: morphism is not filtered");
            }
        }
    Vec alpha, h;
    auto residuals = [&](const Vec& a, const Vec& hh) {
        return std::make_pair(mc_residual(A1, a), gauge_residual(A2, push_mc(f, a, fld), beta, hh));
    };
    int levels = std::max(A1.flength, A2.flength) - 1;
    for (int r = 1; r <= levels; ++r) {
        auto [R1, R2] = residuals(alpha, h);
        std::vector<int> rows1, rows2, colsA, colsH;
        for (int b = 0; b < A1.space.dim(); ++b)
            if (A1.level[b] == r) {
                rows1.push_back(b);
                if (canon_deg(A1.mode, A1.space.degree(b)) == canon_deg(A1.mode, 1)) colsA.push_back(b);
            }
        for (int b = 0; b < A2.space.dim(); ++b)
            if (A2.level[b] == r) {
                rows2.push_back(b);
                if (canon_deg(A2.mode, A2.space.degree(b)) == canon_deg(A2.mode, 0)) colsH.push_back(b);
            }
        std::size_t nr = rows1.size() + rows2.size(), nc = colsA.size() + colsH.size();
        auto stack = [&](const Vec& v1, const Vec& v2) {
            std::vector<Scalar> out(nr, Scalar::zero(fld));
            for (std::size_t i = 0; i < rows1.size(); ++i) {
                auto it = v1.find(rows1[i]);
                if (it != v1.end()) out[i] = it->second;
            }
            for (std::size_t i = 0; i < rows2.size(); ++i) {
                auto it = v2.find(rows2[i]);
                if (it != v2.end()) out[rows1.size() + i] = it->second;
            }
            return out;
        };
        std::vector<Scalar> rhs = stack(R1, R2);
        bool allzero = true;
        for (auto& s : rhs)
            if (!s.is_zero()) allzero = false;
        if (allzero) continue;
        ExactMatrix M(fld, nr, nc);
        for (std::size_t c = 0; c < colsA.size(); ++c) {
            Vec a2 = alpha;
            vec_add(a2, colsA[c], Scalar::one(fld));
            auto [r1, r2] = residuals(a2, h);
            auto col = stack(vec_sub(r1, R1), vec_sub(r2, R2));
            for (std::size_t i = 0; i < nr; ++i) M.at(i, c) = col[i];
        }
        for (std::size_t c = 0; c < colsH.size(); ++c) {
            Vec h2 = h;
            vec_add(h2, colsH[c], Scalar::one(fld));
            auto [r1, r2] = residuals(alpha, h2);
            auto col = stack(vec_sub(r1, R1), vec_sub(r2, R2));
            for (std::size_t i = 0; i < nr; ++i) M.at(i, colsA.size() + c) = col[i];
        }
        std::vector<Scalar> neg(nr, Scalar::zero(fld));
        for (std::size_t i = 0; i < nr; ++i) neg[i] = -rhs[i];
        auto sol = M.solve(neg);
        if (!sol) throw std::runtime_error("mc_lift: obstruction nonzero at filtration level " + std::to_string(r));
        for (std::size_t c = 0; c < colsA.size(); ++c) vec_add(alpha, colsA[c], (*sol)[c]);
        for (std::size_t c = 0; c < colsH.size(); ++c) vec_add(h, colsH[c], (*sol)[colsA.size() + c]);
    }
    auto [R1, R2] = residuals(alpha, h);
    if (!R1.empty() || !R2.empty()) throw std::logic_error("mc_lift: residuals nonzero after the level sweep");
    return {std::move(alpha), std::move(h)};
}

/// ----------------------------------------------------- twisted complexes --

/// A transversal sequence with a Maurer-Cartan element of its End_+ algebra,
/// indexed by the end_plus basis (pos_name(i, j, base name)).
struct TwistedComplex {
    ObjSeq seq;
    Vec alpha;
};

namespace detail {

/// Hom space between two twisted complexes: all position pairs.
inline GradedSpace tw_hom(const AInfInstance& A, const ObjSeq& S1, const ObjSeq& S2) {
    std::vector<std::pair<std::string, int>> basis;
    for (std::size_t i = 0; i < S1.size(); ++i)
        for (std::size_t j = 0; j < S2.size(); ++j) {
            const GradedSpace& h = A.hom(S1[i], S2[j]);
            for (int b = 0; b < h.dim(); ++b) basis.push_back({pos_name((int)i, (int)j, h.name(b)), h.degree(b)});
        }
    return GradedSpace(A.mode(), basis);
}

struct TwDecoded {
    int i, j, hidx;
    long deg;
};

inline std::vector<TwDecoded> tw_decode(const AInfInstance& A, const ObjSeq& S1, const ObjSeq& S2) {
    std::vector<TwDecoded> out;
    for (std::size_t i = 0; i < S1.size(); ++i)
        for (std::size_t j = 0; j < S2.size(); ++j) {
            const GradedSpace& h = A.hom(S1[i], S2[j]);
            for (int b = 0; b < h.dim(); ++b) out.push_back({(int)i, (int)j, b, h.degree(b)});
        }
    return out;
}

/// Per-pair slices of a Maurer-Cartan element: (i, j) -> Vec over
/// Hom(S[i], S[j]).
inline std::map<std::pair<int, int>, Vec> alpha_parts(const AInfInstance& A, const TwistedComplex& T) {
    std::map<std::pair<int, int>, Vec> out;
    for (auto& [idx, c] : T.alpha) {
        // decode the end_plus index by rebuilding the enumeration
        int n = (int)T.seq.size(), cur = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                int d = A.hom(T.seq[i], T.seq[j]).dim();
                if (idx < cur + d) {
                    vec_add(out[{i, j}], idx - cur, c);
                    i = n;
                    break;
                }
                cur += d;
            }
    }
    return out;
}

/// The twisted-product sign exponent: for inserted powers k_0..k_n and
/// morphism degrees xdeg[1..n],
/// sum_{i>j} (deg x_i + k_i) k_j + sum k_i(k_i+1)/2 + sum i k_i.
inline long tw_epsilon(const std::vector<int>& ks, const std::vector<long>& xdeg) {
    long e = 0;
    int n = (int)ks.size() - 1;
    for (int i = 1; i <= n; ++i)
        for (int j = 0; j < i; ++j) e += (xdeg[i] + ks[i]) * ks[j];
    for (int i = 0; i <= n; ++i) e += (long)ks[i] * (ks[i] + 1) / 2 + (long)i * ks[i];
    return e;
}

/// Core alpha-insertion expansion shared by the twisted products, the induced
/// functor components and the bridge morphism: builds the n-ary operation on
/// the all-pairs hom spaces between the complexes Ts[0]..Ts[n] by summing over
/// insertion powers and ascending position chains.  Because the hom spaces
/// contain every position pair, the chains in each complex are independent
/// increasing runs; the slot positions of the hom arguments are read off from
/// neighbouring chain endpoints, so the sum runs over the sparse entries of
/// the host operation instead of over all basis tuples.  `block` supplies the
/// host operation for a path; `out_index(start, end, b)` maps a component of
/// its value into the output space.
inline MultilinearOp tw_op(const AInfInstance& A, const std::vector<const TwistedComplex*>& Ts,
                           const std::vector<std::map<std::pair<int, int>, Vec>>& parts,
                           const std::vector<GradedSpace>& srcs, const GradedSpace& tgt, int degree,
                           const std::function<const MultilinearOp*(const ObjSeq&)>& block,
                           const std::function<int(int, int, int)>& out_index) {
    int n = (int)Ts.size() - 1;
    Field f = A.field();
    MultilinearOp out(f, srcs, tgt, degree);
    std::vector<int> lens(n + 1);
    for (int i = 0; i <= n; ++i) lens[i] = (int)Ts[i]->seq.size();
    // flat-index offsets within the source hom spaces: slot n - m holds x_m,
    // an element of the all-pairs space between Ts[m-1] and Ts[m]
    std::vector<std::vector<std::vector<int>>> off(n + 1);
    for (int m = 1; m <= n; ++m) {
        off[m].assign(lens[m - 1], std::vector<int>(lens[m], 0));
        int cur = 0;
        for (int i = 0; i < lens[m - 1]; ++i)
            for (int j = 0; j < lens[m]; ++j) {
                off[m][i][j] = cur;
                cur += A.hom(Ts[m - 1]->seq[i], Ts[m]->seq[j]).dim();
            }
    }
    std::vector<int> ks(n + 1, 0);
    while (true) {
        long total = n;
        for (int i = 0; i <= n; ++i) total += ks[i];
        if (total >= 1 && total <= A.truncation()) {
            // ks-only part of the sign exponent
            long eps0 = 0;
            for (int i = 1; i <= n; ++i)
                for (int j = 0; j < i; ++j) eps0 += (long)ks[i] * ks[j];
            for (int i = 0; i <= n; ++i) eps0 += (long)ks[i] * (ks[i] + 1) / 2 + (long)i * ks[i];
            std::vector<long> kbefore(n + 1, 0);
            for (int i = 1; i <= n; ++i) kbefore[i] = kbefore[i - 1] + ks[i - 1];
            // independent increasing runs of ks[i] + 1 positions per complex
            std::vector<std::vector<std::vector<int>>> runs(n + 1);
            bool dead = false;
            for (int i = 0; i <= n && !dead; ++i) {
                std::vector<int> pos(ks[i] + 1);
                std::function<void(int, int)> rec = [&](int step, int minpos) {
                    if (step == ks[i] + 1) {
                        runs[i].push_back(pos);
                        return;
                    }
                    for (int p = minpos; p <= lens[i] - (ks[i] + 1 - step); ++p) {
                        pos[step] = p;
                        rec(step + 1, p + 1);
                    }
                };
                rec(0, 0);
                dead = runs[i].empty();
            }
            std::vector<std::size_t> pick(n + 1, 0);
            while (!dead) {
                // path: the runs in order; x_m connects run m-1's end to run m's start
                ObjSeq path;
                for (int i = 0; i <= n; ++i)
                    for (int p : runs[i][pick[i]]) path.push_back(Ts[i]->seq[p]);
                if (const MultilinearOp* op = block(path); op && !op->is_zero()) {
                    // slot s of op, counted from the last arrow of the path:
                    // chain n steps, x_n, chain n-1 steps, ..., x_1, chain 0 steps
                    struct SlotInfo {
                        bool is_x;
                        int i;        // complex (alpha slot) or m (x slot)
                        int p, q;     // positions of the arrow
                    };
                    std::vector<SlotInfo> slots;
                    for (int i = n; i >= 0; --i) {
                        const std::vector<int>& run = runs[i][pick[i]];
                        for (int s = ks[i]; s >= 1; --s) slots.push_back({false, i, run[s - 1], run[s]});
                        if (i >= 1) slots.push_back({true, i, runs[i - 1][pick[i - 1]].back(), run.front()});
                    }
                    int start = runs[0][pick[0]].front(), end = runs[n][pick[n]].back();
                    for (auto& [t, v] : op->entries()) {
                        Scalar coeff = Scalar::one(f);
                        std::vector<int> tw(n, 0);
                        long epsdeg = 0;
                        bool zero = false;
                        for (std::size_t s = 0; s < slots.size() && !zero; ++s) {
                            const SlotInfo& si = slots[s];
                            if (si.is_x) {
                                tw[n - si.i] = off[si.i][si.p][si.q] + t[s];
                                epsdeg +=
                                    A.hom(Ts[si.i - 1]->seq[si.p], Ts[si.i]->seq[si.q]).degree(t[s]) * kbefore[si.i];
                            } else {
                                auto it = parts[si.i].find({si.p, si.q});
                                if (it == parts[si.i].end()) { zero = true; break; }
                                auto ct = it->second.find(t[s]);
                                if (ct == it->second.end()) { zero = true; break; }
                                coeff = coeff * ct->second;
                            }
                        }
                        if (zero) continue;
                        Scalar sg = coeff * sign_of(f, eps0 + epsdeg);
                        for (auto& [o, c] : v) out.add_entry(tw, out_index(start, end, o), c * sg);
                    }
                }
                int i = n;
                while (i >= 0 && ++pick[i] == runs[i].size()) pick[i--] = 0;
                if (i < 0) break;
            }
        }
        int i = n;
        while (i >= 0 && ++ks[i] == lens[i]) ks[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

}  // namespace detail

/// The pre-triangulated envelope data: the base (shift) instance, the chosen
/// twisted complexes, and the assembled instance over them.
struct PreTr {
    AInfInstance base;
    std::vector<TwistedComplex> complexes;
    AInfInstance cat;
};

/// The twisted-complex instance over A spanned by the given complexes.
/// A sequence of complexes is transversal iff the concatenation of their
/// underlying sequences is transversal in A; homs are all-pairs direct sums;
/// products are the alpha-insertion expansions with the twisted sign.
inline PreTr build_pretr(const AInfInstance& A, const std::vector<TwistedComplex>& cs) {
    for (auto& c : cs) {
        NilpotentAInf E = end_plus(A, c.seq);
        require_degree(E, c.alpha, 1, "build_pretr");
        if (!mc_residual(E, c.alpha).empty())
            throw std::invalid_argument("build_pretr: a complex fails the Maurer-Cartan equation");
    }
    PreTr T;
    T.base = A;
    T.complexes = cs;
    AInfInstance& out = T.cat;
    out = AInfInstance(A.field(), A.mode(), A.truncation());
    for (std::size_t i = 0; i < cs.size(); ++i) out.add_object("T" + std::to_string(i));
    auto concat_ok = [&](const ObjSeq& tseq) {
        ObjSeq cc;
        for (int t : tseq) cc.insert(cc.end(), cs[t].seq.begin(), cs[t].seq.end());
        return A.is_transversal(cc);
    };
    std::vector<ObjSeq> fam;
    for (int len = 1; len <= A.truncation() + 1; ++len) {
        ObjSeq cur(len, 0);
        if (cs.empty()) break;
        while (true) {
            if (concat_ok(cur)) {
                out.add_transversal(cur);
                fam.push_back(cur);
            }
            int p = len - 1;
            while (p >= 0 && ++cur[p] == (int)cs.size()) cur[p--] = 0;
            if (p < 0) break;
        }
    }
    for (auto& pr : fam) {
        if (pr.size() != 2) continue;
        out.set_hom(pr[0], pr[1], detail::tw_hom(A, cs[pr[0]].seq, cs[pr[1]].seq));
    }
    std::vector<std::map<std::pair<int, int>, Vec>> parts;
    for (auto& c : cs) parts.push_back(detail::alpha_parts(A, c));
    auto block = [&](const ObjSeq& path) { return A.op_ptr(path); };
    for (auto& tseq : fam) {
        int n = (int)tseq.size() - 1;
        if (n < 1 || n > A.truncation()) continue;
        std::vector<const TwistedComplex*> Ts;
        std::vector<std::map<std::pair<int, int>, Vec>> pslice;
        for (int t : tseq) {
            Ts.push_back(&cs[t]);
            pslice.push_back(parts[t]);
        }
        std::vector<GradedSpace> srcs;
        for (int s = 0; s < n; ++s) srcs.push_back(out.hom(tseq[n - 1 - s], tseq[n - s]));
        const ObjSeq& S0 = cs[tseq[0]].seq;
        const ObjSeq& Sn = cs[tseq[n]].seq;
        std::vector<std::vector<int>> toff(S0.size(), std::vector<int>(Sn.size(), 0));
        int cur = 0;
        for (std::size_t i = 0; i < S0.size(); ++i)
            for (std::size_t j = 0; j < Sn.size(); ++j) {
                toff[i][j] = cur;
                cur += A.hom(S0[i], Sn[j]).dim();
            }
        MultilinearOp op = detail::tw_op(A, Ts, pslice, srcs, out.hom(tseq[0], tseq[n]), 2 - n, block,
                                         [&](int s, int e, int b) { return toff[s][e] + b; });
        if (!op.is_zero()) out.set_op(tseq, std::move(op));
    }
    return T;
}

/// The cone of a closed morphism: in the shift category, f lives in
/// Hom(X[1], Y) in degree 1 (degree 0 before the shift) and the complex is
/// ((X[1], Y), alpha = f).
inline TwistedComplex cone(const AInfInstance& A, int x_shifted, int y, const Vec& f) {
    if (!A.is_transversal({x_shifted, y})) throw std::invalid_argument("cone: pair not transversal");
    const MultilinearOp* m1 = A.op_ptr({x_shifted, y});
    if (m1 && !m1->evaluate({f}).empty()) throw std::invalid_argument("cone: morphism not closed");
    TwistedComplex T;
    T.seq = {x_shifted, y};
    const GradedSpace& h = A.hom(x_shifted, y);
    NilpotentAInf E = end_plus(A, T.seq);
    for (auto& [i, c] : f) vec_add(T.alpha, E.space.index(pos_name(0, 1, h.name(i))), c);
    require_degree(E, T.alpha, 1, "cone");
    return T;
}

/// Good quasi-isomorphism test: equal lengths, strictly-lower components
/// vanish, diagonal components quasi-isomorphisms in the base.
inline bool is_good_qis(const PreTr& T, int c1, int c2, const Vec& f) {
    const TwistedComplex& S1 = T.complexes[c1];
    const TwistedComplex& S2 = T.complexes[c2];
    const MultilinearOp* m1 = T.cat.op_ptr({c1, c2});
    if (m1 && !m1->evaluate({f}).empty()) throw std::invalid_argument("is_good_qis: morphism not closed");
    if (S1.seq.size() != S2.seq.size()) return false;
    auto dec = detail::tw_decode(T.base, S1.seq, S2.seq);
    std::map<int, Vec> diag;
    for (auto& [idx, c] : f) {
        const detail::TwDecoded& d = dec[idx];
        if (d.i > d.j) return false;
        if (d.i == d.j) vec_add(diag[d.i], d.hidx, c);
    }
    for (std::size_t i = 0; i < S1.seq.size(); ++i)
        if (!is_quasi_isomorphism(T.base, S1.seq[i], S2.seq[(int)i], diag[(int)i])) return false;
    return true;
}

/// ------------------------------------------------------ transport, bridge --

namespace detail {

/// Extra sign exponents in the bridge algebra, fixed by the relation checker
/// on fixtures: moving the degree-one identification of the mixed summand
/// through the y-side arguments contributes their total degree (sigma1), and
/// the insertion of the connecting morphisms contributes the y-side argument
/// count (sigma2).
inline long bridge_sigma1(long ydeg_total, int l, int k) {
    (void)l;
    (void)k;
    return ydeg_total;
}
inline long bridge_sigma2(long ydeg_total, int l, int k) {
    (void)k;
    return ydeg_total + l;
}

}  // namespace detail

/// The bridge algebra over quasi-isomorphisms F_i : X_i -> Y_i: the two
/// End_+ algebras plus the shifted connecting homs, with products the direct
/// sums of the base products, the one-mixed-input products, and the
/// F-insertion products that mix the two sides.
struct BridgeAlgebra {
    NilpotentAInf B;
    NilpotentAInf A1, A2;
    std::map<int, MultilinearOp> pi1, pi2;  // strict projections
    std::vector<int> x_of, y_of, h_of;      // B index of each A1/A2/mixed basis element (mixed: see h_index)
};

inline BridgeAlgebra build_bridge(const AInfInstance& A, const ObjSeq& xs, const ObjSeq& ys,
                                  const std::vector<Vec>& Fs) {
    int n = (int)xs.size();
    if ((int)ys.size() != n || (int)Fs.size() != n) throw std::invalid_argument("build_bridge: length mismatch");
    ObjSeq cc = xs;
    cc.insert(cc.end(), ys.begin(), ys.end());
    if (!A.is_transversal(cc)) throw std::invalid_argument("build_bridge: combined sequence not transversal");
    BridgeAlgebra out;
    out.A1 = end_plus(A, xs);
    out.A2 = end_plus(A, ys);
    NilpotentAInf& B = out.B;
    B.field = A.field();
    B.mode = A.mode();
    B.flength = std::max(n, 1);
    std::vector<std::pair<std::string, int>> basis;
    for (int b = 0; b < out.A1.space.dim(); ++b) {
        basis.push_back({"x:" + out.A1.space.name(b), out.A1.space.degree(b)});
        B.level.push_back(out.A1.level[b]);
        out.x_of.push_back((int)basis.size() - 1);
    }
    for (int b = 0; b < out.A2.space.dim(); ++b) {
        basis.push_back({"y:" + out.A2.space.name(b), out.A2.space.degree(b)});
        B.level.push_back(out.A2.level[b]);
        out.y_of.push_back((int)basis.size() - 1);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const GradedSpace& h = A.hom(xs[i], ys[j]);
            for (int b = 0; b < h.dim(); ++b) {
                basis.push_back({"h:" + pos_name(i, j, h.name(b)), h.degree(b) + 1});
                B.level.push_back(j - i);
                out.h_of.push_back((int)basis.size() - 1);
            }
        }
    B.space = GradedSpace(A.mode(), basis);
    auto hindex = [&](int i, int j, int hb) {
        int cur = 0;
        for (int a = 0; a < n; ++a)
            for (int bb = a + 1; bb < n; ++bb) {
                if (a == i && bb == j) return out.h_of[cur + hb];
                cur += A.hom(xs[a], ys[bb]).dim();
            }
        throw std::logic_error("build_bridge: bad mixed index");
    };

    int maxk = std::min(A.truncation(), std::max(n - 1, 1));
    std::map<int, MultilinearOp> ops;
    auto opref = [&](int k) -> MultilinearOp& {
        auto it = ops.find(k);
        if (it == ops.end())
            it = ops.emplace(k, MultilinearOp(A.field(), std::vector<GradedSpace>((std::size_t)k, B.space), B.space,
                                              2 - k)).first;
        return it->second;
    };
    // pure parts
    for (auto& [k, mk] : out.A1.ops) {
        MultilinearOp& o = opref(k);
        for (auto& [t, v] : mk.entries()) {
            std::vector<int> bt(t.size());
            for (std::size_t s = 0; s < t.size(); ++s) bt[s] = out.x_of[t[s]];
            for (auto& [oi, c] : v) o.add_entry(bt, out.x_of[oi], c);
        }
    }
    for (auto& [k, mk] : out.A2.ops) {
        MultilinearOp& o = opref(k);
        for (auto& [t, v] : mk.entries()) {
            std::vector<int> bt(t.size());
            for (std::size_t s = 0; s < t.size(); ++s) bt[s] = out.y_of[t[s]];
            for (auto& [oi, c] : v) o.add_entry(bt, out.y_of[oi], c);
        }
    }
    // mixed products: one mixed input, and the F-insertion terms.  Enumerate
    // ascending chains q_0 < ... < q_k on the x side and j_0 < ... < j_l on
    // the y side; path = (X_{q_0}, ..., X_{q_k}, Y_{j_0}, ..., Y_{j_l}).
    // one mixed input: h component X_i -> Y_j; x chain ends at i, y chain starts at j
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const GradedSpace& hij = A.hom(xs[i], ys[j]);
            if (hij.dim() == 0) continue;
            std::vector<int> xc{i};
            std::function<void(std::vector<int>&)> growx = [&](std::vector<int>& pre) {
                std::vector<int> yc{j};
                std::function<void(std::vector<int>&)> growy = [&](std::vector<int>& yfix) {
                    int k = (int)pre.size() - 1, l = (int)yfix.size() - 1;
                    if (k + l + 1 > maxk) return;
                    ObjSeq path;
                    for (int p : pre) path.push_back(xs[p]);
                    for (int p : yfix) path.push_back(ys[p]);
                    const MultilinearOp* op = A.op_ptr(path);
                    if (!op || op->is_zero()) return;
                    MultilinearOp& o = opref(k + l + 1);
                    for (auto& [t, v] : op->entries()) {
                        // slot order of op: y-side arrows (last first), then
                        // the crossing arrow (the mixed input), then x-side
                        std::vector<int> bt(k + l + 1);
                        long ydeg = 0;
                        for (int s = 0; s < l; ++s) {
                            const GradedSpace& h = A.hom(ys[yfix[l - 1 - s]], ys[yfix[l - s]]);
                            bt[s] = out.y_of[out.A2.space.index(pos_name(yfix[l - 1 - s], yfix[l - s], h.name(t[s])))];
                            ydeg += h.degree(t[s]);
                        }
                        bt[l] = hindex(i, j, t[l]);
                        for (int s = 0; s < k; ++s) {
                            const GradedSpace& h = A.hom(xs[pre[k - 1 - s]], xs[pre[k - s]]);
                            bt[l + 1 + s] =
                                out.x_of[out.A1.space.index(pos_name(pre[k - 1 - s], pre[k - s], h.name(t[l + 1 + s])))];
                        }
                        Scalar sg = sign_of(A.field(), detail::bridge_sigma1(ydeg, l, k));
                        for (auto& [oi, c] : v) o.add_entry(bt, hindex(pre[0], yfix[l], oi), c * sg);
                    }
                };
                // grow the y chain upward from j
                std::function<void()> recy = [&]() { growy(yc); };
                std::vector<int>& chain = yc;
                std::function<void(int)> extend = [&](int frompos) {
                    recy();
                    for (int p = frompos; p < n; ++p) {
                        chain.push_back(p);
                        extend(p + 1);
                        chain.pop_back();
                    }
                };
                extend(j + 1);
            };
            // grow the x chain downward from i (prefix positions < i)
            std::function<void(std::vector<int>&)> extendx = [&](std::vector<int>& chain) {
                growx(chain);
                int first = chain.front();
                for (int p = first - 1; p >= 0; --p) {
                    chain.insert(chain.begin(), p);
                    extendx(chain);
                    chain.erase(chain.begin());
                }
            };
            extendx(xc);
        }
    // F-insertion: x chain ends at p, y chain starts at p
    for (int p = 0; p < n; ++p) {
        if (Fs[p].empty()) continue;
        std::vector<int> xc{p};
        std::function<void(std::vector<int>&)> extendx = [&](std::vector<int>& xfix) {
            std::vector<int> yc{p};
            std::function<void(std::vector<int>&)> extendy = [&](std::vector<int>& yfix) {
                int k = (int)xfix.size() - 1, l = (int)yfix.size() - 1;
                if (k + l >= 1 && k + l <= maxk && k + l + 1 <= A.truncation()) {
                    ObjSeq path;
                    for (int q : xfix) path.push_back(xs[q]);
                    for (int q : yfix) path.push_back(ys[q]);
                    const MultilinearOp* op = A.op_ptr(path);
                    if (op && !op->is_zero()) {
                        MultilinearOp& o = opref(k + l);
                        for (auto& [t, v] : op->entries()) {
                            // slot order of op: y arrows, the crossing slot
                            // (F_p goes there), then x arrows
                            auto fit = Fs[p].find(t[l]);
                            if (fit == Fs[p].end()) continue;
                            std::vector<int> bt(k + l);
                            long ydeg = 0;
                            for (int s = 0; s < l; ++s) {
                                const GradedSpace& h = A.hom(ys[yfix[l - 1 - s]], ys[yfix[l - s]]);
                                bt[s] = out.y_of[out.A2.space.index(
                                    pos_name(yfix[l - 1 - s], yfix[l - s], h.name(t[s])))];
                                ydeg += h.degree(t[s]);
                            }
                            for (int s = 0; s < k; ++s) {
                                const GradedSpace& h = A.hom(xs[xfix[k - 1 - s]], xs[xfix[k - s]]);
                                bt[l + s] = out.x_of[out.A1.space.index(
                                    pos_name(xfix[k - 1 - s], xfix[k - s], h.name(t[l + 1 + s])))];
                            }
                            Scalar sg = sign_of(A.field(), detail::bridge_sigma2(ydeg, l, k)) * fit->second;
                            for (auto& [oi, c] : v) o.add_entry(bt, hindex(xfix[0], yfix[l], oi), c * sg);
                        }
                    }
                }
                for (int q = (yfix.back()) + 1; q < n; ++q) {
                    yfix.push_back(q);
                    extendy(yfix);
                    yfix.pop_back();
                }
            };
            extendy(yc);
            int first = xfix.front();
            for (int q = first - 1; q >= 0; --q) {
                xfix.insert(xfix.begin(), q);
                extendx(xfix);
                xfix.erase(xfix.begin());
            }
        };
        extendx(xc);
    }
    for (auto& [k, o] : ops)
        if (!o.is_zero()) B.ops.emplace(k, std::move(o));
    // strict projections
    MultilinearOp p1(A.field(), {B.space}, out.A1.space, 0);
    for (int b = 0; b < out.A1.space.dim(); ++b) p1.add_entry({out.x_of[b]}, b, Scalar::one(A.field()));
    MultilinearOp p2(A.field(), {B.space}, out.A2.space, 0);
    for (int b = 0; b < out.A2.space.dim(); ++b) p2.add_entry({out.y_of[b]}, b, Scalar::one(A.field()));
    out.pi1.emplace(1, std::move(p1));
    out.pi2.emplace(1, std::move(p2));
    return out;
}

/// One-object wrapper of a nilpotent algebra, so the relation checker can
/// serve as an oracle for its products.
inline AInfInstance nilpotent_as_instance(const NilpotentAInf& A) {
    int trunc = 1;
    for (auto& [k, op] : A.ops) {
        (void)op;
        trunc = std::max(trunc, k);
    }
    AInfInstance out(A.field, A.mode, trunc);
    int X = out.add_object("*");
    out.set_full_family();
    out.set_hom(X, X, A.space);
    for (auto& [k, op] : A.ops) out.set_op(ObjSeq((std::size_t)k + 1, X), op);
    return out;
}

struct TransportResult {
    Vec alpha;       // Maurer-Cartan solution on the x side
    Vec beta_tilde;  // the bridge lift
    Vec h;           // gauge morphism pi_2(beta_tilde) -> beta
    PreTr pretr;     // complexes: 0 = (xs, alpha), 1 = (ys, beta)
    Vec G;           // the quasi-isomorphism complex 0 -> complex 1
};

/// Transports a Maurer-Cartan solution across componentwise
/// quasi-isomorphisms F_i : X_i -> Y_i: lifts beta through the bridge
/// projection, reads off alpha on the x side, and assembles the connecting
/// morphism G from F, the mixed components of the lift, and the gauge
/// witness.
inline TransportResult transport_mc(const AInfInstance& A, const ObjSeq& xs, const ObjSeq& ys,
                                    const std::vector<Vec>& Fs, const Vec& beta) {
    int n = (int)xs.size();
    BridgeAlgebra br = build_bridge(A, xs, ys, Fs);
    MCLift L = mc_lift(br.B, br.A2, br.pi2, beta);
    TransportResult out;
    out.beta_tilde = L.alpha;
    out.h = L.h;
    Vec alpha, betap;
    std::map<std::pair<int, int>, Vec> hparts;  // mixed components of the lift
    for (auto& [idx, c] : L.alpha) {
        const std::string& nm = br.B.space.name(idx);
        if (nm.rfind("x:", 0) == 0)
            vec_add(alpha, br.A1.space.index(nm.substr(2)), c);
        else if (nm.rfind("y:", 0) == 0)
            vec_add(betap, br.A2.space.index(nm.substr(2)), c);
        else {
            // "h:i>j:name"
            std::string rest = nm.substr(2);
            std::size_t gt = rest.find('>'), co = rest.find(':');
            int i = std::stoi(rest.substr(0, gt));
            int j = std::stoi(rest.substr(gt + 1, co - gt - 1));
            vec_add(hparts[{i, j}], A.hom(xs[i], ys[j]).index(rest.substr(co + 1)), c);
        }
    }
    out.alpha = alpha;

    TwistedComplex E1{xs, alpha};
    TwistedComplex Emid{ys, betap};
    TwistedComplex E2{ys, beta};
    out.pretr = build_pretr(A, {E1, E2});

    // the pre-tr morphism F : E1 -> Emid (diagonal F_i plus the mixed lift
    // components), expressed in the all-pairs coordinates
    GradedSpace homF = detail::tw_hom(A, xs, ys);
    Vec Fm;
    for (int i = 0; i < n; ++i) {
        const GradedSpace& h = A.hom(xs[i], ys[i]);
        for (auto& [b, c] : Fs[i]) vec_add(Fm, homF.index(pos_name(i, i, h.name(b))), c);
    }
    for (auto& [ij, v] : hparts) {
        const GradedSpace& h = A.hom(xs[ij.first], ys[ij.second]);
        for (auto& [b, c] : v) vec_add(Fm, homF.index(pos_name(ij.first, ij.second, h.name(b))), c);
    }
    // h as a pre-tr morphism Emid -> E2
    GradedSpace homH = detail::tw_hom(A, ys, ys);
    Vec Hm;
    for (auto& [idx, c] : L.h) {
        // decode the End_+ index
        int cur = 0;
        for (int i = 0; i < n && cur >= 0; ++i)
            for (int j = i + 1; j < n; ++j) {
                int d = A.hom(ys[i], ys[j]).dim();
                if (idx < cur + d) {
                    vec_add(Hm, homH.index(pos_name(i, j, A.hom(ys[i], ys[j]).name(idx - cur))), c);
                    cur = -2;
                    break;
                }
                cur += d;
            }
    }
    // G = F + m_2-expansion(h, F) over the chain (E1, Emid, E2)
    Vec G = Fm;  // same coordinate space as hom(E1, E2)
    std::vector<const TwistedComplex*> Ts{&E1, &Emid, &E2};
    std::vector<std::map<std::pair<int, int>, Vec>> parts{detail::alpha_parts(A, E1), detail::alpha_parts(A, Emid),
                                                          detail::alpha_parts(A, E2)};
    auto block = [&](const ObjSeq& path) { return A.op_ptr(path); };
    std::vector<std::vector<int>> toff(xs.size(), std::vector<int>(ys.size(), 0));
    int cur = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ys.size(); ++j) {
            toff[i][j] = cur;
            cur += A.hom(xs[i], ys[j]).dim();
        }
    MultilinearOp m2 = detail::tw_op(A, Ts, parts, {homH, homF}, homF, 0, block,
                                     [&](int s, int e, int b) { return toff[s][e] + b; });
    vec_add(G, m2.evaluate({Hm, Fm}), Scalar::one(A.field()));
    out.G = G;
    return out;
}

/// ------------------------------------------------------- induced functor --

namespace detail {

/// Sign exponent for pushing a Maurer-Cartan element through functor
/// components: the twisted-product exponent at n = 0 normalized so that the
/// linear term is sign-free.
inline long push_epsilon(int k) { return (long)k * (k - 1) / 2; }

}  // namespace detail

/// Image of a twisted complex: objects mapped by F, the Maurer-Cartan
/// element pushed through the functor components along ascending chains.
inline TwistedComplex map_complex(const AInfFunctor& F, const TwistedComplex& T) {
    const AInfInstance& D1 = F.source();
    const AInfInstance& D2 = F.target();
    TwistedComplex out;
    for (int x : T.seq) out.seq.push_back(F.map_object(x));
    NilpotentAInf E2 = end_plus(D2, out.seq);
    auto parts = detail::alpha_parts(D1, T);
    int n = (int)T.seq.size();
    // chains i_0 < ... < i_k
    for (int k = 1; k <= std::min(D1.truncation(), n - 1); ++k) {
        std::vector<int> c(k + 1);
        for (int s = 0; s <= k; ++s) c[s] = s;
        while (true) {
            ObjSeq path(k + 1);
            for (int s = 0; s <= k; ++s) path[s] = T.seq[c[s]];
            const MultilinearOp* fk = F.comp_ptr(path);
            if (fk && !fk->is_zero()) {
                std::vector<Vec> args;
                for (int s = k; s >= 1; --s) {
                    auto it = parts.find({c[s - 1], c[s]});
                    args.push_back(it == parts.end() ? Vec{} : it->second);
                }
                Vec val = fk->evaluate(args);
                Scalar sg = sign_of(D1.field(), detail::push_epsilon(k));
                const GradedSpace& ht = D2.hom(out.seq[c[0]], out.seq[c[k]]);
                for (auto& [o, s] : val)
                    vec_add(out.alpha, E2.space.index(pos_name(c[0], c[k], ht.name(o))), s * sg);
            }
            int p = k;
            while (p >= 0 && ++c[p] == n - (k - p)) --p;
            if (p < 0) break;
            for (int s = p + 1; s <= k; ++s) c[s] = c[s - 1] + 1;
        }
    }
    return out;
}

struct InducedPreTr {
    PreTr target;
    AInfFunctor functor;
};

/// The functor between twisted-complex instances induced by F: complexes are
/// mapped by map_complex, components are the alpha-insertion expansions of
/// the components of F with the twisted sign.
inline InducedPreTr induced_pretr_functor(const AInfFunctor& F, const PreTr& T1) {
    const AInfInstance& D2 = F.target();
    std::vector<TwistedComplex> mapped;
    for (auto& c : T1.complexes) mapped.push_back(map_complex(F, c));
    InducedPreTr out{build_pretr(D2, mapped), AInfFunctor()};
    std::vector<int> idmap(T1.complexes.size());
    for (std::size_t i = 0; i < idmap.size(); ++i) idmap[i] = (int)i;
    AInfFunctor G(T1.cat, out.target.cat, idmap);
    std::vector<std::map<std::pair<int, int>, Vec>> parts;
    for (auto& c : T1.complexes) parts.push_back(detail::alpha_parts(T1.base, c));
    auto block = [&](const ObjSeq& path) { return F.comp_ptr(path); };
    for (int len = 2; len <= T1.base.truncation() + 1; ++len)
        for (auto& tseq : T1.cat.sequences(len)) {
            int n = len - 1;
            std::vector<const TwistedComplex*> Ts;
            std::vector<std::map<std::pair<int, int>, Vec>> pslice;
            for (int t : tseq) {
                Ts.push_back(&T1.complexes[t]);
                pslice.push_back(parts[t]);
            }
            MultilinearOp comp = G.zero_comp(tseq);
            std::vector<std::vector<detail::TwDecoded>> dec(n);
            for (int s = 0; s < n; ++s)
                dec[s] = detail::tw_decode(T1.base, T1.complexes[tseq[n - 1 - s]].seq,
                                           T1.complexes[tseq[n - s]].seq);
            std::vector<int> tuple(n, 0);
            while (true) {
                std::vector<int> a(n + 1), b(n + 1);
                std::vector<Vec> xargs(n + 1);
                std::vector<long> xdeg(n + 1, 0);
                for (int m = 1; m <= n; ++m) {
                    const detail::TwDecoded& d = dec[n - m][tuple[n - m]];
                    a[m] = d.i;
                    b[m] = d.j;
                    xargs[m] = Vec{{d.hidx, Scalar::one(T1.base.field())}};
                    xdeg[m] = d.deg;
                }
                detail::tw_expand_fixed(
                    T1.base, Ts, pslice, a, b, xargs, xdeg, block,
                    [&](int start, int end, const Vec& val, const Scalar& sg) {
                        const GradedSpace& ht =
                            D2.hom(mapped[tseq[0]].seq[start], mapped[tseq[n]].seq[end]);
                        for (auto& [o, c] : val)
                            comp.add_entry(tuple, comp.target().index(pos_name(start, end, ht.name(o))), c * sg);
                    });
                int s = n - 1;
                while (s >= 0 && ++tuple[s] == (int)dec[s].size()) tuple[s--] = 0;
                if (s < 0) break;
            }
            if (!comp.is_zero()) G.set_comp(tseq, std::move(comp));
        }
    out.functor = std::move(G);
    return out;
}

}  // namespace ainf
