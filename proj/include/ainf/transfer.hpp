#pragma once

#include <optional>

#include "hochschild.hpp"

namespace ainf {

/// Conjugation by the degree shift (dir=+1 into the shifted picture, -1
/// back).  Entries pick up (-1)^{sum_s (arity-1-s) * (shifted degree of the
/// slot-s input)}; in the shifted picture m_n has degree 1 and functor
/// components have degree 0 for every arity, and all composition signs
/// reduce to the Koszul rule on shifted degrees.
inline MultilinearOp suspend(const MultilinearOp& m, int dir) {
    int n = m.arity();
    std::vector<GradedSpace> srcs;
    for (auto& S : m.sources()) srcs.push_back(shift(S, dir));
    MultilinearOp r(m.field(), std::move(srcs), shift(m.target(), dir), m.degree() + dir * (n - 1));
    for (auto& [t, v] : m.entries()) {
        long e = 0;
        for (int s = 0; s < n; ++s) e += (long)(n - 1 - s) * (m.source(s).degree(t[s]) - (dir > 0 ? 1 : 0));
        r.add_entry(t, v, sign_of(m.field(), e));
    }
    return r;
}

/// Hom = K (+) Ac with K a subcomplex carrying zero differential, Ac
/// m_1-acyclic.  hty is the contracting homotopy extended by zero on K:
/// m_1 hty + hty m_1 = id - inc proj, hty inc = 0, proj hty = 0, hty^2 = 0.
struct PairSplitting {
    GradedSpace K;
    MultilinearOp inc;           // K -> Hom, degree 0
    MultilinearOp proj;          // Hom -> K, degree 0
    MultilinearOp hty;           // Hom -> Hom, degree -1
    std::vector<Vec> ac_chains;  // complement half with m_1 injective
    std::vector<Vec> ac_cycles;  // its image, the exact cycles
};

struct SplittingData {
    std::map<std::pair<int, int>, PairSplitting> pairs;
};

inline SplittingData compute_splitting(const AInfInstance& A) {
    Field f = A.field();
    SplittingData S;
    for (int x = 0; x < A.object_count(); ++x)
        for (int y = 0; y < A.object_count(); ++y) {
            if (!A.has_hom(x, y)) continue;
            const GradedSpace& V = A.hom(x, y);
            const MultilinearOp* m1 = A.is_transversal({x, y}) ? A.op_ptr({x, y}) : nullptr;
            if (m1) {
                ExactMatrix D = op_matrix(*m1);
                if (!(D * D).is_zero()) throw std::domain_error("compute_splitting: m_1^2 != 0");
            }

            std::map<int, std::vector<int>> slice;
            for (int b = 0; b < V.dim(); ++b) slice[canon_deg(A.mode(), V.degree(b))].push_back(b);

            auto slice_pos = [&](int d, int global) {
                auto& idx = slice.at(d);
                return (int)(std::find(idx.begin(), idx.end(), global) - idx.begin());
            };
            // per canonical degree: kernel vectors, pivot-column preimages
            // (chains) and their images (cycles), all as global sparse vectors
            std::map<int, std::vector<Vec>> kers, chains;
            std::map<int, std::vector<std::pair<Vec, Vec>>> cycles;  // (cycle, preimage chain)
            for (auto& [d, idx] : slice) {
                int dn = canon_deg(A.mode(), (long)d + 1);
                std::vector<int> out;
                if (m1 && slice.count(dn) && dn != d) out = slice.at(dn);
                ExactMatrix Dd(f, out.size(), idx.size());
                for (std::size_t c = 0; c < idx.size(); ++c)
                    if (m1)
                        if (const Vec* col = m1->lookup({idx[c]}))
                            for (auto& [o, s] : *col) Dd.at(slice_pos(dn, o), c) = s;
                for (auto& kv : Dd.kernel_basis()) {
                    Vec v;
                    for (std::size_t c = 0; c < idx.size(); ++c) vec_add(v, idx[c], kv[c]);
                    kers[d].push_back(std::move(v));
                }
                for (auto piv : Dd.rref().second) {
                    Vec chain{{idx[piv], Scalar::one(f)}};
                    Vec cycle;
                    for (std::size_t r = 0; r < out.size(); ++r)
                        if (!Dd.at(r, piv).is_zero()) vec_add(cycle, out[r], Dd.at(r, piv));
                    chains[d].push_back(chain);
                    cycles[dn].push_back({std::move(cycle), std::move(chain)});
                }
            }

            auto rank_cols = [&](const std::vector<std::vector<Scalar>>& cols, int rows) {
                ExactMatrix M(f, rows, cols.size());
                for (std::size_t c = 0; c < cols.size(); ++c)
                    for (int r = 0; r < rows; ++r) M.at(r, c) = cols[c][r];
                return M.rank();
            };
            auto to_slice = [&](int d, const Vec& v) {
                std::vector<Scalar> col(slice.at(d).size(), Scalar::zero(f));
                for (auto& [i, s] : v) col[slice_pos(d, i)] = s;
                return col;
            };

            // cohomology representatives: kernel vectors extending the cycles
            std::map<int, std::vector<Vec>> kreps;
            std::vector<std::pair<std::string, int>> kbasis;
            std::vector<Vec> krep_list;
            int synth = 0;
            for (auto& [d, kv] : kers) {
                int rows = (int)slice.at(d).size();
                std::vector<std::vector<Scalar>> span;
                for (auto& [cy, ch] : cycles[d]) span.push_back(to_slice(d, cy));
                for (auto& v : kv) {
                    span.push_back(to_slice(d, v));
                    if (rank_cols(span, rows) == span.size()) {
                        kreps[d].push_back(v);
                        std::string nm = v.size() == 1 && v.begin()->second == Scalar::one(f)
                                             ? V.name(v.begin()->first)
                                             : "k" + std::to_string(synth++);
                        kbasis.push_back({nm, V.degree(v.begin()->first)});
                        krep_list.push_back(v);
                    } else {
                        span.pop_back();
                    }
                }
            }

            PairSplitting P;
            P.K = GradedSpace(A.mode(), kbasis);
            for (auto& [d, cyl] : cycles)
                for (auto& [cy, ch] : cyl) {
                    P.ac_cycles.push_back(cy);
                    P.ac_chains.push_back(ch);
                }
            P.inc = MultilinearOp(f, {P.K}, V, 0);
            for (int l = 0; l < (int)krep_list.size(); ++l) P.inc.add_entry({l}, krep_list[l], Scalar::one(f));
            P.proj = MultilinearOp(f, {V}, P.K, 0);
            P.hty = MultilinearOp(f, {V}, V, -1);

            int koff = 0;
            for (auto& [d, idx] : slice) {
                auto& kr = kreps[d];
                auto& cy = cycles[d];
                int nd = (int)idx.size();
                ExactMatrix M(f, nd, nd);
                std::size_t col = 0;
                for (auto& v : kr) {
                    auto c = to_slice(d, v);
                    for (int r = 0; r < nd; ++r) M.at(r, col) = c[r];
                    ++col;
                }
                for (auto& [c1, c2] : cy) {
                    auto c = to_slice(d, c1);
                    for (int r = 0; r < nd; ++r) M.at(r, col) = c[r];
                    ++col;
                }
                std::size_t chain_start = col;
                for (auto& v : chains[d]) {
                    auto c = to_slice(d, v);
                    for (int r = 0; r < nd; ++r) M.at(r, col) = c[r];
                    ++col;
                }
                if (col != (std::size_t)nd) throw std::logic_error("compute_splitting: decomposition miscount");
                auto Minv = M.inverse();
                if (!Minv) throw std::logic_error("compute_splitting: decomposition not a basis");
                for (int r = 0; r < nd; ++r) {
                    int b = idx[r];
                    for (std::size_t j = 0; j < kr.size(); ++j)
                        P.proj.add_entry({b}, koff + (int)j, Minv->at(j, r));
                    for (std::size_t j = 0; j < cy.size(); ++j)
                        P.hty.add_entry({b}, cy[j].second, Minv->at(kr.size() + j, r));
                    (void)chain_start;
                }
                koff += (int)kr.size();
            }
            S.pairs[{x, y}] = std::move(P);
        }
    return S;
}

namespace detail {

/// A tensor word in the shifted picture: letter c consumes the inputs along
/// one consecutive path segment (path positions pos[c+1]..pos[c], strictly
/// decreasing) and outputs one shifted hom element.  `sign` is the parity of
/// the Koszul sign accumulated by operator applications.
struct BarWord {
    std::vector<MultilinearOp> letters;
    std::vector<int> pos;
    int sign = 0;
    int hs = 0;
};

}  // namespace detail

struct MinimalModel {
    AInfInstance minimal;
    AInfFunctor F;  // minimal -> A, f_1 = inc
    AInfFunctor G;  // A -> minimal, g_1 = proj
    bool g_fallback = false;
};

/// Solves the functor equation at arity n for G's components, given that all
/// lower-arity components are already valid (the equation is linear in g_n
/// and decouples per source sequence).
inline void complete_functor_arity(AInfFunctor& G, int n) {
    const AInfInstance& A = G.source();
    Field f = A.field();
    for (auto& seq : A.sequences(n + 1)) {
        MultilinearOp sig = G.zero_comp(seq);
        bool empty = false;
        for (int s = 0; s < sig.arity(); ++s)
            if (sig.source(s).dim() == 0) empty = true;
        if (empty || sig.target().dim() == 0) {
            G.set_comp(seq, sig);
            continue;
        }
        std::vector<std::pair<std::vector<int>, int>> unk;
        std::vector<int> t(n, 0);
        while (true) {
            long din = 0;
            for (int s = 0; s < n; ++s) din += sig.source(s).degree(t[s]);
            for (int o = 0; o < sig.target().dim(); ++o)
                if (sig.target().degrees_equal(din + (1 - n), sig.target().degree(o))) unk.push_back({t, o});
            int s = n - 1;
            while (s >= 0 && ++t[s] == sig.source(s).dim()) t[s--] = 0;
            if (s < 0) break;
        }
        G.set_comp(seq, sig);
        std::vector<MultilinearOp> residuals;
        residuals.push_back(functor_residual(G, seq));
        for (auto& [tt, o] : unk) {
            MultilinearOp e = sig;
            e.add_entry(tt, o, Scalar::one(f));
            G.set_comp(seq, std::move(e));
            residuals.push_back(functor_residual(G, seq));
        }
        std::map<std::pair<std::vector<int>, int>, std::size_t> rows;
        for (auto& r : residuals)
            for (auto& [tt, v] : r.entries())
                for (auto& [o, s] : v) rows.try_emplace({tt, o}, rows.size());
        ExactMatrix L(f, rows.size(), unk.size());
        std::vector<Scalar> rhs(rows.size(), Scalar::zero(f));
        auto fill = [&](const MultilinearOp& r, std::size_t c, const Scalar& sg, bool into_rhs) {
            for (auto& [tt, v] : r.entries())
                for (auto& [o, s] : v) {
                    std::size_t row = rows.at({tt, o});
                    if (into_rhs)
                        rhs[row] += s * sg;
                    else
                        L.at(row, c) += s * sg;
                }
        };
        fill(residuals[0], 0, -Scalar::one(f), true);
        for (std::size_t c = 0; c < unk.size(); ++c) {
            fill(residuals[c + 1], c, Scalar::one(f), false);
            fill(residuals[0], c, -Scalar::one(f), false);
        }
        auto x = L.solve(rhs);
        if (!x) throw std::runtime_error("complete_functor_arity: equation unsolvable");
        MultilinearOp comp = sig;
        for (std::size_t c = 0; c < unk.size(); ++c) comp.add_entry(unk[c].first, unk[c].second, (*x)[c]);
        G.set_comp(seq, std::move(comp));
    }
}

inline MinimalModel transfer_minimal(const AInfInstance& A, const SplittingData& S) {
    Field f = A.field();
    int N = A.truncation();
    AInfInstance M(f, A.mode(), N);
    for (int x = 0; x < A.object_count(); ++x) M.add_object(A.object_name(x));
    if (A.full_family())
        M.set_full_family();
    else
        for (auto& s : A.family()) M.add_transversal(s);
    for (auto& [xy, P] : S.pairs) M.set_hom(xy.first, xy.second, P.K);

    // shifted building blocks per pair
    std::map<std::pair<int, int>, MultilinearOp> bi, bp, bh, bip, bid;
    for (auto& [xy, P] : S.pairs) {
        bi[xy] = suspend(P.inc, 1);
        bp[xy] = suspend(P.proj, 1);
        bh[xy] = suspend(P.hty, 1);
        bip[xy] = compose_insert(bi[xy], bp[xy], 0, 0, 0);
        GradedSpace sV = shift(A.hom(xy.first, xy.second), 1);
        MultilinearOp idop(f, {sV}, sV, 0);
        for (int b = 0; b < sV.dim(); ++b) idop.add_entry({b}, b, Scalar::one(f));
        bid[xy] = std::move(idop);
    }
    std::map<ObjSeq, std::optional<MultilinearOp>> bcache;
    auto bop = [&](const ObjSeq& s) -> const MultilinearOp* {
        auto it = bcache.find(s);
        if (it == bcache.end()) {
            const MultilinearOp* m = A.op_ptr(s);
            it = bcache.emplace(s, m ? std::optional<MultilinearOp>(suspend(*m, 1)) : std::nullopt).first;
        }
        return it->second ? &*it->second : nullptr;
    };

    std::vector<int> idmap(A.object_count());
    for (int x = 0; x < A.object_count(); ++x) idmap[x] = x;
    std::map<ObjSeq, MultilinearOp> fcomps, gcomps;
    for (auto& [xy, P] : S.pairs) {
        if (!A.is_transversal({xy.first, xy.second})) continue;
        fcomps[{xy.first, xy.second}] = P.inc;
        gcomps[{xy.first, xy.second}] = P.proj;
    }

    for (int len = 3; len <= N + 1; ++len)
        for (auto& seq : A.sequences(len)) {
            int n = len - 1;
            auto pair_at = [&](const detail::BarWord& w, int c) {
                return std::pair<int, int>(seq[w.pos[c + 1]], seq[w.pos[c]]);
            };
            auto presum = [&](const detail::BarWord& w, int r) {
                long s = 0;
                for (int c = 0; c < r; ++c) s += w.letters[c].degree();
                return s;
            };
            auto apply_hT = [&](const detail::BarWord& w, std::vector<detail::BarWord>& out) {
                int wl = (int)w.letters.size();
                for (int r = 0; r < wl; ++r) {
                    detail::BarWord nw = w;
                    nw.sign = parity(w.sign + presum(w, r));
                    nw.hs = w.hs + 1;
                    nw.letters[r] = compose_insert(bh.at(pair_at(w, r)), w.letters[r], 0, 0, 0);
                    bool dead = nw.letters[r].is_zero();
                    for (int c = r + 1; c < wl && !dead; ++c) {
                        nw.letters[c] = compose_insert(bip.at(pair_at(w, c)), w.letters[c], 0, 0, 0);
                        dead = nw.letters[c].is_zero();
                    }
                    if (!dead) out.push_back(std::move(nw));
                }
            };
            auto apply_delta = [&](const detail::BarWord& w, std::vector<detail::BarWord>& out) {
                int wl = (int)w.letters.size();
                for (int k = 2; k <= std::min(wl, N); ++k)
                    for (int r = 0; r + k <= wl; ++r) {
                        ObjSeq iseq;
                        for (int q = r + k; q >= r; --q) iseq.push_back(seq[w.pos[q]]);
                        const MultilinearOp* b = bop(iseq);
                        if (!b) continue;
                        std::vector<const MultilinearOp*> blocks;
                        std::vector<long> mults(k, 0);
                        for (int p = 0; p < k; ++p) {
                            blocks.push_back(&w.letters[r + p]);
                            for (int q = p + 1; q < k; ++q) mults[p] += w.letters[r + q].degree();
                        }
                        MultilinearOp nl = compose_blocks(*b, blocks, 0, mults);
                        if (nl.is_zero()) continue;
                        detail::BarWord nw;
                        nw.sign = parity(w.sign + presum(w, r));
                        nw.hs = w.hs;
                        for (int c = 0; c < r; ++c) nw.letters.push_back(w.letters[c]);
                        nw.letters.push_back(std::move(nl));
                        for (int c = r + k; c < wl; ++c) nw.letters.push_back(w.letters[c]);
                        for (int c = 0; c <= wl; ++c)
                            if (c <= r || c >= r + k) nw.pos.push_back(w.pos[c]);
                        out.push_back(std::move(nw));
                    }
            };
            std::pair<int, int> outer{seq[0], seq[n]};

            // minimal structure and F: p_T sum_j delta (h_T delta)^j i_T and
            // h_T-terminated words respectively, both started from i^{(x)n}
            detail::BarWord w0;
            bool dead0 = false;
            for (int c = 0; c <= n; ++c) w0.pos.push_back(n - c);
            for (int c = 0; c < n && !dead0; ++c) {
                const MultilinearOp& l = bi.at({seq[n - 1 - c], seq[n - c]});
                dead0 = l.is_zero();
                w0.letters.push_back(l);
            }
            GradedSpace sK_out = shift(M.hom(seq[0], seq[n]), 1);
            std::vector<GradedSpace> sK_in, sA_in;
            for (int c = 0; c < n; ++c) {
                sK_in.push_back(shift(M.hom(seq[n - 1 - c], seq[n - c]), 1));
                sA_in.push_back(shift(A.hom(seq[n - 1 - c], seq[n - c]), 1));
            }
            MultilinearOp bprime(f, sK_in, sK_out, 1);
            MultilinearOp fn(f, sK_in, shift(A.hom(seq[0], seq[n]), 1), 0);
            std::vector<detail::BarWord> act;
            if (!dead0) act.push_back(w0);
            while (!act.empty()) {
                std::vector<detail::BarWord> after;
                for (auto& w : act) apply_delta(w, after);
                act.clear();
                for (auto& w : after) {
                    if (w.letters.size() == 1) {
                        // the comparison functor's series runs on -hty
                        // (its sign convention pairs with the functor
                        // equation), while the structure series runs on +hty
                        bprime += compose_insert(bp.at(outer), w.letters[0], 0, 0, 0)
                                      .scaled(sign_of(f, w.sign));
                        fn += compose_insert(bh.at(outer), w.letters[0], 0, 0, 0)
                                  .scaled(sign_of(f, w.sign + w.hs + 1));
                    } else {
                        apply_hT(w, act);
                    }
                }
            }
            MultilinearOp mn = suspend(bprime, -1);
            if (!mn.is_zero()) M.set_op(seq, mn);
            if (!fn.is_zero()) fcomps[seq] = suspend(fn, -1);

            // G: p_T sum_j (delta h_T)^j started from identity letters
            detail::BarWord g0;
            bool deadg = false;
            for (int c = 0; c <= n; ++c) g0.pos.push_back(n - c);
            for (int c = 0; c < n && !deadg; ++c) {
                const MultilinearOp& l = bid.at({seq[n - 1 - c], seq[n - c]});
                deadg = l.is_zero();
                g0.letters.push_back(l);
            }
            MultilinearOp gn(f, sA_in, sK_out, 0);
            act.clear();
            if (!deadg) act.push_back(g0);
            while (!act.empty()) {
                std::vector<detail::BarWord> mid;
                for (auto& w : act) apply_hT(w, mid);
                act.clear();
                for (auto& w : mid) apply_delta(w, act);
                std::vector<detail::BarWord> keep;
                for (auto& w : act) {
                    if (w.letters.size() == 1)
                        gn += compose_insert(bp.at(outer), w.letters[0], 0, 0, 0)
                                  .scaled(sign_of(f, w.sign + w.hs));
                    else
                        keep.push_back(std::move(w));
                }
                act = std::move(keep);
            }
            if (!gn.is_zero()) gcomps[seq] = suspend(gn, -1);
        }

    AInfFunctor F(M, A, idmap), G(A, M, idmap);
    for (auto& [seq, c] : fcomps) F.set_comp(seq, c);
    for (auto& [seq, c] : gcomps) G.set_comp(seq, c);
    MinimalModel out{std::move(M), std::move(F), std::move(G), false};
    if (!check_functor(out.G).empty()) {
        AInfFunctor G2(A, out.minimal, idmap);
        for (auto& [xy, P] : S.pairs)
            if (A.is_transversal({xy.first, xy.second})) G2.set_comp({xy.first, xy.second}, P.proj);
        for (int n = 2; n <= N; ++n) complete_functor_arity(G2, n);
        out.G = std::move(G2);
        out.g_fallback = true;
    }
    return out;
}

}  // namespace ainf
