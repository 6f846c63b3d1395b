#pragma once

#include "instance.hpp"

namespace ainf {

struct RelationViolation {
    ObjSeq seq;
    std::vector<int> tuple;
    Vec residual;
};

using RelationReport = std::vector<RelationViolation>;

/// Segment/collapse bookkeeping for inserting an arity-j operation at slot l
/// (composition order) of an operation over the path `seq` with k edges.
inline ObjSeq insertion_segment(const ObjSeq& seq, int l, int j) {
    int k = (int)seq.size() - 1;
    return ObjSeq(seq.begin() + (k - l - j), seq.begin() + (k - l) + 1);
}
inline ObjSeq insertion_collapse(const ObjSeq& seq, int l, int j) {
    int k = (int)seq.size() - 1;
    ObjSeq out(seq.begin(), seq.begin() + (k - l - j) + 1);
    out.insert(out.end(), seq.begin() + (k - l), seq.end());
    return out;
}

/// The defining quadratic relation with k inputs over a (k+1)-object
/// transversal sequence: sum over i+j = k+1 and slots l of the signed
/// insertions m_i(a_0,...,m_j(a_l,...),...,a_k), with sign exponent
/// j*sum_{s<l} deg(a_s) + l(j-1) + j(i-1).
inline MultilinearOp relation_residual(const AInfInstance& A, const ObjSeq& seq) {
    int k = (int)seq.size() - 1;
    MultilinearOp res = A.zero_op(seq, 3 - k);
    for (int j = 1; j <= k; ++j) {
        int i = k + 1 - j;
        for (int l = 0; l <= i - 1; ++l) {
            const MultilinearOp* inner = A.op_ptr(insertion_segment(seq, l, j));
            if (!inner) continue;
            const MultilinearOp* outer = A.op_ptr(insertion_collapse(seq, l, j));
            if (!outer) continue;
            res += compose_insert(*outer, *inner, l, (long)l * (j - 1) + (long)j * (i - 1), j);
        }
    }
    return res;
}

inline void collect_violations(const ObjSeq& seq, const MultilinearOp& res, RelationReport& report) {
    for (auto& [tuple, v] : res.entries())
        if (!v.empty()) report.push_back({seq, tuple, v});
}

/// Checks the defining relations on every transversal sequence with at most
/// N inputs.  Empty report means the instance is a valid A-infinity
/// (pre-)category up to the truncation arity.
inline RelationReport check_relations(const AInfInstance& A) {
    RelationReport report;
    for (int len = 2; len <= A.truncation() + 1; ++len)
        for (auto& seq : A.sequences(len)) collect_violations(seq, relation_residual(A, seq), report);
    return report;
}

}  // namespace ainf
