#pragma once

#include "relations.hpp"

namespace ainf {

/// Compositions of n into i ordered positive parts.
inline void compositions(int n, int i, std::vector<std::vector<int>>& out) {
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rem, int parts) {
        if (parts == 1) {
            if (rem >= 1) {
                cur.push_back(rem);
                out.push_back(cur);
                cur.pop_back();
            }
            return;
        }
        for (int s = 1; rem - s >= parts - 1; ++s) {
            cur.push_back(s);
            rec(rem - s, parts - 1);
            cur.pop_back();
        }
    };
    if (i >= 1) rec(n, i);
}

/// A-infinity functor between instances: object map plus components f_n of
/// degree 1-n keyed by source transversal (n+1)-sequences; absent keys are
/// zero components.
class AInfFunctor {
public:
    AInfFunctor() = default;
    AInfFunctor(AInfInstance src, AInfInstance tgt, std::vector<int> obj_map)
        : src_(std::move(src)), tgt_(std::move(tgt)), obj_map_(std::move(obj_map)) {}

    static AInfFunctor identity(const AInfInstance& A) {
        std::vector<int> id_map(A.object_count());
        for (int i = 0; i < A.object_count(); ++i) id_map[i] = i;
        AInfFunctor F(A, A, id_map);
        for (int x = 0; x < A.object_count(); ++x)
            for (int y = 0; y < A.object_count(); ++y) {
                if (!A.is_transversal({x, y})) continue;
                MultilinearOp f1 = A.zero_op({x, y}, 0);
                const GradedSpace& h = A.hom(x, y);
                for (int b = 0; b < h.dim(); ++b) f1.add_entry({b}, b, Scalar::one(A.field()));
                F.set_comp({x, y}, std::move(f1));
            }
        return F;
    }

    const AInfInstance& source() const { return src_; }
    const AInfInstance& target() const { return tgt_; }
    const std::vector<int>& object_map() const { return obj_map_; }
    int map_object(int x) const { return obj_map_[x]; }
    ObjSeq map_seq(const ObjSeq& s) const {
        ObjSeq t;
        for (int x : s) t.push_back(obj_map_[x]);
        return t;
    }

    void set_comp(const ObjSeq& seq, MultilinearOp op) {
        int n = (int)seq.size() - 1;
        if (op.degree() != 1 - n) throw std::invalid_argument("AInfFunctor: f_n must have degree 1-n");
        if (op.is_zero())
            comps_.erase(seq);
        else
            comps_[seq] = std::move(op);
    }
    const std::map<ObjSeq, MultilinearOp>& comps() const { return comps_; }

    /// Signature of f_n over a source sequence (zero when no entries stored).
    MultilinearOp zero_comp(const ObjSeq& seq) const {
        int n = (int)seq.size() - 1;
        std::vector<GradedSpace> srcs;
        for (int s = 0; s < n; ++s) srcs.push_back(src_.hom(seq[n - 1 - s], seq[n - s]));
        return MultilinearOp(src_.field(), std::move(srcs), tgt_.hom(obj_map_[seq[0]], obj_map_[seq[n]]), 1 - n);
    }
    MultilinearOp comp(const ObjSeq& seq) const {
        auto it = comps_.find(seq);
        return it == comps_.end() ? zero_comp(seq) : it->second;
    }
    const MultilinearOp* comp_ptr(const ObjSeq& seq) const {
        auto it = comps_.find(seq);
        return it == comps_.end() ? nullptr : &it->second;
    }

private:
    AInfInstance src_, tgt_;
    std::vector<int> obj_map_;
    std::map<ObjSeq, MultilinearOp> comps_;
};

/// Left-hand side of the functor equation at a source sequence: the sum over
/// partitions n = s_1+...+s_i of m_i(f_{s_1} blocks) with the gamma sign.
/// `skip_trivial` drops the i = n all-singleton term; `skip_whole` drops the
/// i = 1 term m_1(f_n).
inline MultilinearOp functor_lhs(const AInfFunctor& F, const ObjSeq& seq, bool skip_trivial = false,
                                 bool skip_whole = false) {
    const AInfInstance& B = F.target();
    int n = (int)seq.size() - 1;
    // degree of every term is 2-i + sum (1-s_p) = 2-n, one above f_n's 1-n
    MultilinearOp sig = F.zero_comp(seq);
    MultilinearOp lhs(sig.field(), sig.sources(), sig.target(), 2 - n);
    for (int i = 1; i <= n; ++i) {
        if (skip_whole && i == 1) continue;
        if (skip_trivial && i == n) continue;
        std::vector<std::vector<int>> parts;
        compositions(n, i, parts);
        for (auto& s : parts) {
            // block p (1-based) covers slots l_{p-1}..l_p-1, path segment
            // seq[n-l_p .. n-l_{p-1}]
            std::vector<int> l(i + 1, 0);
            for (int p = 1; p <= i; ++p) l[p] = l[p - 1] + s[p - 1];
            std::vector<MultilinearOp> blocks;
            ObjSeq outer_seq;
            bool dead = false;
            for (int p = 1; p <= i; ++p) {
                ObjSeq segment(seq.begin() + (n - l[p]), seq.begin() + (n - l[p - 1]) + 1);
                const MultilinearOp* fp = F.comp_ptr(segment);
                if (!fp) { dead = true; break; }
                blocks.push_back(*fp);
            }
            if (dead) continue;
            for (int p = i; p >= 0; --p) outer_seq.push_back(F.map_object(seq[n - l[p]]));
            const MultilinearOp* mi = B.op_ptr(outer_seq);
            if (!mi) continue;
            long gconst = 0;
            std::vector<long> mults(i, 0);
            for (int p = 1; p <= i - 1; ++p) {
                gconst += (long)(i - p) * (s[p - 1] - 1);
                long nu = 0;
                for (int m = p + 1; m <= i; ++m) nu += s[m - 1] - 1;
                mults[p - 1] = nu;
            }
            std::vector<const MultilinearOp*> bptrs;
            for (auto& b : blocks) bptrs.push_back(&b);
            lhs += compose_blocks(*mi, bptrs, gconst, mults);
        }
    }
    return lhs;
}

/// Right-hand side: sum over r+s = n+1 and insertion slots of
/// f_s(..., m_r(...), ...) with sign exponent r*sum deg + (j-1) + r(s-j).
/// `skip_whole` drops the s = 1 term f_n-free... (r = n, s = 1) f_1(m_n).
inline MultilinearOp functor_rhs(const AInfFunctor& F, const ObjSeq& seq, bool skip_arity_n_inner = false) {
    const AInfInstance& A = F.source();
    int n = (int)seq.size() - 1;
    MultilinearOp sig = F.zero_comp(seq);
    MultilinearOp rhs(sig.field(), sig.sources(), sig.target(), 2 - n);
    for (int r = 1; r <= n; ++r) {
        if (skip_arity_n_inner && r == n) continue;
        int s = n + 1 - r;
        for (int j = 1; j <= s; ++j) {
            int l = j - 1;
            const MultilinearOp* inner = A.op_ptr(insertion_segment(seq, l, r));
            if (!inner) continue;
            const MultilinearOp* fs = F.comp_ptr(insertion_collapse(seq, l, r));
            if (!fs) continue;
            rhs += compose_insert(*fs, *inner, l, (long)(j - 1) + (long)r * (s - j), r);
        }
    }
    return rhs;
}

inline MultilinearOp functor_residual(const AInfFunctor& F, const ObjSeq& seq) {
    return functor_lhs(F, seq) - functor_rhs(F, seq);
}

inline RelationReport check_functor(const AInfFunctor& F) {
    RelationReport report;
    const AInfInstance& A = F.source();
    int N = std::min(A.truncation(), F.target().truncation());
    for (int len = 2; len <= N + 1; ++len)
        for (auto& seq : A.sequences(len)) {
            if (!F.target().is_transversal(F.map_seq(seq)))
                throw std::invalid_argument("AInfFunctor: object map does not preserve transversality");
            collect_violations(seq, functor_residual(F, seq), report);
        }
    return report;
}

/// Componentwise composition (G after F): the coalgebra-map composition,
/// (GF)_n = sum over partitions of g_i(f-blocks) with the gamma signs.
inline AInfFunctor compose_functors(const AInfFunctor& G, const AInfFunctor& F) {
    std::vector<int> obj_map(F.source().object_count());
    for (int x = 0; x < (int)obj_map.size(); ++x) obj_map[x] = G.map_object(F.map_object(x));
    AInfFunctor GF(F.source(), G.target(), obj_map);
    int N = std::min(F.source().truncation(), G.target().truncation());
    for (int len = 2; len <= N + 1; ++len)
        for (auto& seq : F.source().sequences(len)) {
            int n = len - 1;
            MultilinearOp acc = GF.zero_comp(seq);
            for (int i = 1; i <= n; ++i) {
                std::vector<std::vector<int>> parts;
                compositions(n, i, parts);
                for (auto& s : parts) {
                    std::vector<int> l(i + 1, 0);
                    for (int p = 1; p <= i; ++p) l[p] = l[p - 1] + s[p - 1];
                    std::vector<MultilinearOp> blocks;
                    ObjSeq g_seq;
                    bool dead = false;
                    for (int p = 1; p <= i; ++p) {
                        ObjSeq segment(seq.begin() + (n - l[p]), seq.begin() + (n - l[p - 1]) + 1);
                        const MultilinearOp* fp = F.comp_ptr(segment);
                        if (!fp) { dead = true; break; }
                        blocks.push_back(*fp);
                    }
                    if (dead) continue;
                    for (int p = i; p >= 0; --p) g_seq.push_back(F.map_object(seq[n - l[p]]));
                    const MultilinearOp* gi = G.comp_ptr(g_seq);
                    if (!gi) continue;
                    long gconst = 0;
                    std::vector<long> mults(i, 0);
                    for (int p = 1; p <= i - 1; ++p) {
                        gconst += (long)(i - p) * (s[p - 1] - 1);
                        long nu = 0;
                        for (int m = p + 1; m <= i; ++m) nu += s[m - 1] - 1;
                        mults[p - 1] = nu;
                    }
                    std::vector<const MultilinearOp*> bptrs;
                    for (auto& b : blocks) bptrs.push_back(&b);
                    acc += compose_blocks(*gi, bptrs, gconst, mults);
                }
            }
            GF.set_comp(seq, std::move(acc));
        }
    return GF;
}

}  // namespace ainf
