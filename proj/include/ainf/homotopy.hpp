#pragma once

#include "transfer.hpp"


namespace ainf {

/// Homotopy between two functors F, F' sharing source, target and object map:
/// components h_n of degree -n keyed by source transversal (n+1)-sequences.
class FunctorHomotopy {
public:
    FunctorHomotopy() = default;
    FunctorHomotopy(AInfFunctor F, AInfFunctor Fp) : F_(std::move(F)), Fp_(std::move(Fp)) {
        if (F_.object_map() != Fp_.object_map())
            throw std::invalid_argument("FunctorHomotopy: functors must share the object map");
    }

    const AInfFunctor& first() const { return F_; }
    const AInfFunctor& second() const { return Fp_; }

    void set_comp(const ObjSeq& seq, MultilinearOp op) {
        int n = (int)seq.size() - 1;
        if (op.degree() != -n) throw std::invalid_argument("FunctorHomotopy: h_n must have degree -n");
        if (op.is_zero())
            comps_.erase(seq);
        else
            comps_[seq] = std::move(op);
    }
    const std::map<ObjSeq, MultilinearOp>& comps() const { return comps_; }

    MultilinearOp zero_comp(const ObjSeq& seq) const {
        int n = (int)seq.size() - 1;
        const AInfInstance& A = F_.source();
        std::vector<GradedSpace> srcs;
        for (int s = 0; s < n; ++s) srcs.push_back(A.hom(seq[n - 1 - s], seq[n - s]));
        return MultilinearOp(A.field(), std::move(srcs),
                             F_.target().hom(F_.map_object(seq[0]), F_.map_object(seq[n])), -n);
    }
    const MultilinearOp* comp_ptr(const ObjSeq& seq) const {
        auto it = comps_.find(seq);
        return it == comps_.end() ? nullptr : &it->second;
    }

private:
    AInfFunctor F_, Fp_;
    std::map<ObjSeq, MultilinearOp> comps_;
};

namespace detail {

/// The sign checkers' unshifted conventions match the plain Koszul calculus
/// on bar components rescaled by (-1)^{n(n-1)/2}; all bar computations here
/// use these rescaled components.
inline long bar_twist(int n) { return (long)n * (n - 1) / 2; }

inline MultilinearOp hat(const MultilinearOp& op, long extra = 0) {
    int n = (int)op.sources().size();
    MultilinearOp out = suspend(op, 1);
    return out.scaled(sign_of(op.field(), bar_twist(n) + extra));
}

/// [H b_A]_n in the shifted picture: insertions of source b_r into h-bars.
inline MultilinearOp homotopy_precompose(const FunctorHomotopy& H, const ObjSeq& seq,
                                         const MultilinearOp& sig) {
    const AInfInstance& A = H.first().source();
    int n = (int)seq.size() - 1;
    MultilinearOp acc(sig.field(), sig.sources(), sig.target(), 0);
    for (int r = 1; r <= n; ++r) {
        int s = n + 1 - r;
        for (int j = 1; j <= s; ++j) {
            int l = j - 1;
            const MultilinearOp* inner = A.op_ptr(insertion_segment(seq, l, r));
            if (!inner) continue;
            const MultilinearOp* hs = H.comp_ptr(insertion_collapse(seq, l, r));
            if (!hs) continue;
            acc += compose_insert(hat(*hs, 1), hat(*inner), l, 0, 1);
        }
    }
    return acc;
}

/// [b_B H]_n in the shifted picture: target b_k applied to one h-bar block
/// between f-bars (slot-0 side) and f'-bars.  The h-bars carry one extra
/// sign so that perturbing by h moves f' in the +Hochschild direction.  `Fp` may be a partially built
/// functor; only components of arity < n are consulted when k >= 2.
inline MultilinearOp homotopy_postcompose(const FunctorHomotopy& H, const AInfFunctor& F,
                                          const AInfFunctor& Fp, const ObjSeq& seq,
                                          const MultilinearOp& sig) {
    const AInfInstance& B = F.target();
    int n = (int)seq.size() - 1;
    MultilinearOp acc(sig.field(), sig.sources(), sig.target(), 0);
    for (int k = 1; k <= n; ++k) {
        std::vector<std::vector<int>> parts;
        compositions(n, k, parts);
        for (auto& s : parts) {
            std::vector<int> l(k + 1, 0);
            for (int p = 1; p <= k; ++p) l[p] = l[p - 1] + s[p - 1];
            ObjSeq outer_seq;
            for (int p = k; p >= 0; --p) outer_seq.push_back(F.map_object(seq[n - l[p]]));
            const MultilinearOp* bk = B.op_ptr(outer_seq);
            if (!bk) continue;
            MultilinearOp outer = detail::hat(*bk);
            for (int t = 1; t <= k; ++t) {
                std::vector<MultilinearOp> blocks;
                bool dead = false;
                for (int p = 1; p <= k && !dead; ++p) {
                    ObjSeq segment(seq.begin() + (n - l[p]), seq.begin() + (n - l[p - 1]) + 1);
                    const MultilinearOp* c = p == t  ? H.comp_ptr(segment)
                                             : p < t ? F.comp_ptr(segment)
                                                     : Fp.comp_ptr(segment);
                    if (!c) { dead = true; break; }
                    blocks.push_back(hat(*c, p == t ? 1 : 0));
                }
                if (dead) continue;
                // Koszul: only the h-bar block is odd, so inputs of earlier
                // blocks pick up one sign factor each
                std::vector<long> mults(k, 0);
                for (int p = 1; p < t; ++p) mults[p - 1] = 1;
                std::vector<const MultilinearOp*> bptrs;
                for (auto& b : blocks) bptrs.push_back(&b);
                acc += compose_blocks(outer, bptrs, 0, mults);
            }
        }
    }
    return acc;
}

}  // namespace detail

/// Residual of the homotopy identity f - f' = b_B H + H b_A at a source
/// sequence, reported in the unshifted picture (degree 1-n).
inline MultilinearOp homotopy_residual(const FunctorHomotopy& H, const ObjSeq& seq) {
    const AInfFunctor& F = H.first();
    const AInfFunctor& Fp = H.second();
    int n = (int)seq.size() - 1;
    MultilinearOp sig = F.zero_comp(seq);
    std::vector<GradedSpace> ssrc;
    for (auto& v : sig.sources()) ssrc.push_back(shift(v, 1));
    MultilinearOp bar(sig.field(), std::move(ssrc), shift(sig.target(), 1), 0);
    if (const MultilinearOp* f = F.comp_ptr(seq)) bar += detail::hat(*f);
    if (const MultilinearOp* fp = Fp.comp_ptr(seq)) bar = bar - detail::hat(*fp);
    bar = bar - detail::homotopy_postcompose(H, F, Fp, seq, bar);
    bar = bar - detail::homotopy_precompose(H, seq, bar);
    return suspend(bar, -1).scaled(sign_of(bar.field(), detail::bar_twist(n)));
}

inline RelationReport check_homotopy(const FunctorHomotopy& H) {
    RelationReport report;
    const AInfInstance& A = H.first().source();
    int N = std::min(A.truncation(), H.first().target().truncation());
    for (int len = 2; len <= N + 1; ++len)
        for (auto& seq : A.sequences(len)) collect_violations(seq, homotopy_residual(H, seq), report);
    return report;
}

/// The unique functor F' homotopic to F via the given components (keyed like
/// functor components, degree -n): built arity-by-arity from the homotopy
/// identity, in which f'_n appears alone once lower arities are fixed.
inline AInfFunctor homotopy_extend(const AInfFunctor& F,
                                   const std::map<ObjSeq, MultilinearOp>& h) {
    AInfFunctor Fp(F.source(), F.target(), F.object_map());
    FunctorHomotopy H(F, Fp);
    for (auto& [seq, op] : h) H.set_comp(seq, op);
    const AInfInstance& A = F.source();
    int N = std::min(A.truncation(), F.target().truncation());
    for (int len = 2; len <= N + 1; ++len)
        for (auto& seq : A.sequences(len)) {
            MultilinearOp sig = F.zero_comp(seq);
            std::vector<GradedSpace> ssrc;
            for (auto& v : sig.sources()) ssrc.push_back(shift(v, 1));
            MultilinearOp bar(sig.field(), std::move(ssrc), shift(sig.target(), 1), 0);
            if (const MultilinearOp* f = F.comp_ptr(seq)) bar += detail::hat(*f);
            bar = bar - detail::homotopy_postcompose(H, F, Fp, seq, bar);
            bar = bar - detail::homotopy_precompose(H, seq, bar);
            MultilinearOp fpn =
                suspend(bar, -1).scaled(sign_of(bar.field(), detail::bar_twist((int)seq.size() - 1)));
            if (!fpn.is_zero()) Fp.set_comp(seq, std::move(fpn));
        }
    return Fp;
}

}  // namespace ainf
