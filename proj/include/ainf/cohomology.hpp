#pragma once

#include <optional>

#include "linalg.hpp"
#include "relations.hpp"

namespace ainf {

inline int canon_deg(Grading mode, long d) { return mode == Grading::Z2 ? parity(d) : (int)d; }

/// Partial evaluation: fixes one argument slot at a vector, no extra sign.
inline MultilinearOp partial_evaluate(const MultilinearOp& op, int slot, const Vec& val, int val_degree) {
    std::vector<GradedSpace> srcs;
    for (int s = 0; s < op.arity(); ++s)
        if (s != slot) srcs.push_back(op.source(s));
    MultilinearOp r(op.field(), std::move(srcs), op.target(), op.degree() + val_degree);
    for (auto& [tuple, v] : op.entries()) {
        auto it = val.find(tuple[slot]);
        if (it == val.end()) continue;
        std::vector<int> rest;
        for (int s = 0; s < op.arity(); ++s)
            if (s != slot) rest.push_back(tuple[s]);
        r.add_entry(rest, v, it->second);
    }
    return r;
}

/// Cohomology of one hom space with respect to an arity-1 differential,
/// with deterministic chosen representatives and class-coordinate solving.
class HomCohomology {
public:
    HomCohomology() = default;
    HomCohomology(Field f, Grading mode, const GradedSpace& V, const MultilinearOp* m1)
        : field_(f), mode_(mode), space_(V) {
        for (int b = 0; b < V.dim(); ++b) slices_[canon_deg(mode, V.degree(b))].push_back(b);
        if (m1 && m1->degree() != 1) throw std::invalid_argument("HomCohomology: differential must have degree 1");
        for (auto& [d, idx] : slices_) data_[d].idx = idx;
        // images first, then kernels extended over images
        for (auto& [d, sd] : data_) {
            ExactMatrix out = matrix_from(m1, d);
            auto ker = out.kernel_basis();
            ExactMatrix into = matrix_into(m1, d);
            // span of the image inside slice d
            std::vector<std::vector<Scalar>> im_cols;
            for (std::size_t c = 0; c < into.cols(); ++c) {
                std::vector<Scalar> col;
                for (std::size_t r = 0; r < into.rows(); ++r) col.push_back(into.at(r, c));
                im_cols.push_back(std::move(col));
            }
            sd.im = independent_subset(im_cols, (int)sd.idx.size());
            std::vector<std::vector<Scalar>> span = sd.im;
            for (auto& kv : ker) {
                span.push_back(kv);
                if (rank_of(span, (int)sd.idx.size()) == span.size()) {
                    sd.reps.push_back(kv);
                } else {
                    span.pop_back();
                }
            }
        }
        for (auto& [d, sd] : data_)
            for (auto& r : sd.reps) {
                classes_.push_back({d, to_vec(d, r)});
                sd.class_offsets.push_back((int)classes_.size() - 1);
            }
    }

    const GradedSpace& space() const { return space_; }
    const std::vector<std::pair<int, Vec>>& classes() const { return classes_; }
    int dim(int d) const {
        auto it = data_.find(d);
        return it == data_.end() ? 0 : (int)it->second.reps.size();
    }
    int total_dim() const { return (int)classes_.size(); }

    /// Class coordinates (over classes()) of a closed homogeneous vector;
    /// nullopt when the vector is not in ker (caller's bug) -- we only check
    /// membership of the affine solve.
    std::optional<std::vector<Scalar>> class_coords(const Vec& v) const {
        std::vector<Scalar> coords(classes_.size(), Scalar::zero(field_));
        if (v.empty()) return coords;
        int d = canon_deg(mode_, space_.degree(v.begin()->first));
        auto it = data_.find(d);
        if (it == data_.end()) return std::nullopt;
        const SliceData& sd = it->second;
        std::size_t n = sd.idx.size();
        ExactMatrix m(field_, n, sd.im.size() + sd.reps.size());
        for (std::size_t c = 0; c < sd.im.size(); ++c)
            for (std::size_t r = 0; r < n; ++r) m.at(r, c) = sd.im[c][r];
        for (std::size_t c = 0; c < sd.reps.size(); ++c)
            for (std::size_t r = 0; r < n; ++r) m.at(r, sd.im.size() + c) = sd.reps[c][r];
        std::vector<Scalar> b(n, Scalar::zero(field_));
        for (auto& [i, s] : v) {
            auto pos = std::find(sd.idx.begin(), sd.idx.end(), i);
            if (pos == sd.idx.end()) return std::nullopt;  // inhomogeneous
            b[pos - sd.idx.begin()] = s;
        }
        auto x = m.solve(b);
        if (!x) return std::nullopt;
        for (std::size_t c = 0; c < sd.reps.size(); ++c) coords[sd.class_offsets[c]] = (*x)[sd.im.size() + c];
        return coords;
    }

    bool is_exact(const Vec& v) const {
        auto c = class_coords(v);
        if (!c) return false;
        for (auto& s : *c)
            if (!s.is_zero()) return false;
        return true;
    }

private:
    struct SliceData {
        std::vector<int> idx;
        std::vector<std::vector<Scalar>> im;    // slice coordinates
        std::vector<std::vector<Scalar>> reps;  // slice coordinates
        std::vector<int> class_offsets;
    };

    Field field_{};
    Grading mode_ = Grading::Z;
    GradedSpace space_;
    std::map<int, std::vector<int>> slices_;
    std::map<int, SliceData> data_;
    std::vector<std::pair<int, Vec>> classes_;

    Vec to_vec(int d, const std::vector<Scalar>& slice_coords) const {
        Vec v;
        auto& idx = slices_.at(d);
        for (std::size_t k = 0; k < idx.size(); ++k) vec_add(v, idx[k], slice_coords[k]);
        return v;
    }

    int next_deg(int d) const { return mode_ == Grading::Z2 ? 1 - d : d + 1; }
    int prev_deg(int d) const { return mode_ == Grading::Z2 ? 1 - d : d - 1; }

    std::vector<int> slice(int d) const {
        auto it = slices_.find(d);
        return it == slices_.end() ? std::vector<int>{} : it->second;
    }

    /// Matrix of m1 out of slice d (rows indexed by slice d+1).
    ExactMatrix matrix_from(const MultilinearOp* m1, int d) const {
        auto dom = slice(d);
        auto cod = slice(next_deg(d));
        ExactMatrix m(field_, cod.size(), dom.size());
        if (!m1) return m;
        for (std::size_t c = 0; c < dom.size(); ++c) {
            const Vec* out = m1->lookup({dom[c]});
            if (!out) continue;
            for (auto& [o, s] : *out) {
                auto pos = std::find(cod.begin(), cod.end(), o);
                if (pos != cod.end()) m.at(pos - cod.begin(), c) += s;
            }
        }
        return m;
    }

    /// Matrix of m1 into slice d (columns indexed by slice d-1).
    ExactMatrix matrix_into(const MultilinearOp* m1, int d) const {
        auto dom = slice(prev_deg(d));
        auto cod = slice(d);
        ExactMatrix m(field_, cod.size(), dom.size());
        if (!m1) return m;
        for (std::size_t c = 0; c < dom.size(); ++c) {
            const Vec* out = m1->lookup({dom[c]});
            if (!out) continue;
            for (auto& [o, s] : *out) {
                auto pos = std::find(cod.begin(), cod.end(), o);
                if (pos != cod.end()) m.at(pos - cod.begin(), c) += s;
            }
        }
        return m;
    }

    std::size_t rank_of(const std::vector<std::vector<Scalar>>& cols, int n) const {
        ExactMatrix m(field_, n, cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (int r = 0; r < n; ++r) m.at(r, c) = cols[c][r];
        return m.rank();
    }

    std::vector<std::vector<Scalar>> independent_subset(const std::vector<std::vector<Scalar>>& cols, int n) const {
        std::vector<std::vector<Scalar>> keep;
        for (auto& c : cols) {
            keep.push_back(c);
            if (rank_of(keep, n) != keep.size()) keep.pop_back();
        }
        return keep;
    }
};

/// Per-pair cohomology of an instance's hom complexes.
inline std::map<std::pair<int, int>, HomCohomology> hom_cohomologies(const AInfInstance& A) {
    std::map<std::pair<int, int>, HomCohomology> out;
    for (int x = 0; x < A.object_count(); ++x)
        for (int y = 0; y < A.object_count(); ++y) {
            if (!A.is_transversal({x, y})) continue;
            const MultilinearOp* m1 = A.op_ptr({x, y});
            out.emplace(std::make_pair(x, y), HomCohomology(A.field(), A.mode(), A.hom(x, y), m1));
        }
    return out;
}

/// True iff the arity-1 closed map T (a chain map between the two complexes)
/// induces a bijection on cohomology.
inline bool induces_cohomology_iso(const MultilinearOp& T, const HomCohomology& src, const HomCohomology& tgt) {
    if (src.total_dim() != tgt.total_dim()) return false;
    std::size_t n = tgt.total_dim();
    ExactMatrix m(T.field(), n, src.total_dim());
    for (std::size_t c = 0; c < src.classes().size(); ++c) {
        Vec img = T.evaluate({src.classes()[c].second});
        auto coords = tgt.class_coords(img);
        if (!coords) return false;  // image not closed-compatible
        for (std::size_t r = 0; r < n; ++r) m.at(r, c) = (*coords)[r];
    }
    return m.rank() == n;
}

struct CohomologyCategory {
    AInfInstance cat;
    std::map<std::pair<int, int>, HomCohomology> coh;
};

/// Graded category (or pre-category) on cohomology: homs replaced by chosen
/// representatives of ker m_1 / im m_1, composition induced by m_2.
inline CohomologyCategory cohomology_category(const AInfInstance& A) {
    CohomologyCategory out;
    out.cat = AInfInstance(A.field(), A.mode(), A.truncation());
    for (int x = 0; x < A.object_count(); ++x) out.cat.add_object(A.object_name(x));
    if (A.full_family())
        out.cat.set_full_family();
    else
        for (auto& s : A.family()) out.cat.add_transversal(s);

    for (int len = 2; len <= 2; ++len)
        for (auto& pr : A.sequences(2)) {
            MultilinearOp res = relation_residual(A, pr);
            if (!res.is_zero()) throw std::domain_error("cohomology_category: m_1^2 != 0");
        }
    out.coh = hom_cohomologies(A);
    for (auto& [pair, hc] : out.coh) {
        std::vector<std::pair<std::string, int>> basis;
        for (std::size_t k = 0; k < hc.classes().size(); ++k)
            basis.push_back({"c" + std::to_string(k), hc.classes()[k].first});
        out.cat.set_hom(pair.first, pair.second, GradedSpace(A.mode(), basis));
    }
    for (auto& triple : out.cat.sequences(3)) {
        const MultilinearOp* m2 = A.op_ptr(triple);
        if (!m2) continue;
        const HomCohomology& h0 = out.coh.at({triple[1], triple[2]});
        const HomCohomology& h1 = out.coh.at({triple[0], triple[1]});
        const HomCohomology& ht = out.coh.at({triple[0], triple[2]});
        MultilinearOp op = out.cat.zero_op(triple);
        for (std::size_t a = 0; a < h0.classes().size(); ++a)
            for (std::size_t b = 0; b < h1.classes().size(); ++b) {
                Vec img = m2->evaluate({h0.classes()[a].second, h1.classes()[b].second});
                auto coords = ht.class_coords(img);
                if (!coords) throw std::logic_error("cohomology_category: m_2 image not closed");
                for (std::size_t k = 0; k < coords->size(); ++k)
                    op.add_entry({(int)a, (int)b}, (int)k, (*coords)[k]);
            }
        if (!op.is_zero()) out.cat.set_op(triple, std::move(op));
    }
    return out;
}

/// True iff f (a closed degree-0 element of Hom(x1,x2)) composes to a
/// quasi-isomorphism of complexes on every applicable transversal triple.
inline bool is_quasi_isomorphism(const AInfInstance& A, int x1, int x2, const Vec& f,
                                 const std::map<std::pair<int, int>, HomCohomology>* coh_cache = nullptr) {
    const MultilinearOp* m1 = A.op_ptr({x1, x2});
    if (m1 && !m1->evaluate({f}).empty()) throw std::invalid_argument("is_quasi_isomorphism: f not closed");
    for (auto& [i, s] : f)
        if (canon_deg(A.mode(), A.hom(x1, x2).degree(i)) != 0)
            throw std::invalid_argument("is_quasi_isomorphism: f not of degree 0");
    std::map<std::pair<int, int>, HomCohomology> local;
    auto coh_at = [&](int a, int b) -> const HomCohomology& {
        if (coh_cache) return coh_cache->at({a, b});
        auto key = std::make_pair(a, b);
        if (!local.count(key)) local.emplace(key, HomCohomology(A.field(), A.mode(), A.hom(a, b), A.op_ptr({a, b})));
        return local.at(key);
    };
    for (int x0 = 0; x0 < A.object_count(); ++x0) {
        if (!A.is_transversal({x0, x1, x2})) continue;
        MultilinearOp L = partial_evaluate(A.op(ObjSeq{x0, x1, x2}), 0, f, 0);
        if (!induces_cohomology_iso(L, coh_at(x0, x1), coh_at(x0, x2))) return false;
    }
    for (int x3 = 0; x3 < A.object_count(); ++x3) {
        if (!A.is_transversal({x1, x2, x3})) continue;
        MultilinearOp R = partial_evaluate(A.op(ObjSeq{x1, x2, x3}), 1, f, 0);
        if (!induces_cohomology_iso(R, coh_at(x2, x3), coh_at(x1, x3))) return false;
    }
    return true;
}

/// Strict identity: m_2(f,e) = f, m_2(e,g) = g, and every other insertion of
/// e into an operation vanishes.
inline bool is_strict_identity(const AInfInstance& A, int X, const Vec& e) {
    if (!A.is_transversal({X, X})) throw std::invalid_argument("is_strict_identity: (X,X) not transversal");
    const GradedSpace& hXX = A.hom(X, X);
    for (auto& [i, s] : e)
        if (canon_deg(A.mode(), hXX.degree(i)) != 0) return false;
    // m_2 insertions against every transversal triple through (X,X)
    for (auto& triple : A.sequences(3)) {
        bool left = triple[0] == X && triple[1] == X;    // m_2(g', e)
        bool right = triple[1] == X && triple[2] == X;   // m_2(e, g)
        if (!left && !right) continue;
        MultilinearOp m2 = A.op(triple);
        int slot = left ? 1 : 0;  // slot holding Hom(X,X)
        MultilinearOp mult = partial_evaluate(m2, slot, e, 0);
        const GradedSpace& other = left ? A.hom(X, triple[2]) : A.hom(triple[0], X);
        for (int b = 0; b < other.dim(); ++b) {
            Vec img = mult.evaluate({Vec{{b, Scalar::one(A.field())}}});
            Vec want{{b, Scalar::one(A.field())}};
            if (!vec_sub(img, want).empty()) return false;
        }
    }
    // all other arities: stored operations with an adjacent (X,X) slot must
    // kill e there
    for (auto& [seq, op] : A.ops()) {
        int n = (int)seq.size() - 1;
        for (int t = 0; t + 1 <= n; ++t) {
            if (seq[t] != X || seq[t + 1] != X) continue;
            int slot = n - 1 - t;
            if (n == 2) continue;  // handled above
            MultilinearOp ins = partial_evaluate(op, slot, e, 0);
            for (auto& [tuple, v] : ins.entries())
                if (!v.empty()) return false;
        }
    }
    return true;
}

/// Weak identity: e closed, and left/right multiplication by its class act
/// as the identity on cohomology for all applicable transversal triples.
inline bool is_weak_identity(const AInfInstance& A, int X, const Vec& e) {
    if (!A.is_transversal({X, X})) throw std::invalid_argument("is_weak_identity: (X,X) not transversal");
    const MultilinearOp* m1 = A.op_ptr({X, X});
    if (m1 && !m1->evaluate({e}).empty()) return false;
    auto coh = hom_cohomologies(A);
    for (auto& triple : A.sequences(3)) {
        bool left = triple[0] == X && triple[1] == X;
        bool right = triple[1] == X && triple[2] == X;
        if (!left && !right) continue;
        MultilinearOp m2 = A.op(triple);
        int slot = left ? 1 : 0;
        MultilinearOp mult = partial_evaluate(m2, slot, e, 0);
        const HomCohomology& src = left ? coh.at({X, triple[2]}) : coh.at({triple[0], X});
        const HomCohomology& tgt = left ? coh.at({X, triple[2]}) : coh.at({triple[0], X});
        for (auto& [d, rep] : src.classes()) {
            Vec img = mult.evaluate({rep});
            auto coords = tgt.class_coords(img);
            if (!coords) return false;
            auto want = tgt.class_coords(rep);
            for (std::size_t k = 0; k < coords->size(); ++k)
                if (!((*coords)[k] == (*want)[k])) return false;
        }
    }
    return true;
}

/// Solves for a strict identity element at X, if one exists.
inline std::optional<Vec> find_strict_identity(const AInfInstance& A, int X) {
    if (!A.is_transversal({X, X})) return std::nullopt;
    const GradedSpace& h = A.hom(X, X);
    std::vector<int> cand;
    for (int b = 0; b < h.dim(); ++b)
        if (canon_deg(A.mode(), h.degree(b)) == 0) cand.push_back(b);
    if (cand.empty()) return std::nullopt;
    // linear constraints: for each triple and basis g, mult_e(g) = g
    std::vector<std::vector<Scalar>> rows;
    std::vector<Scalar> rhs;
    Field f = A.field();
    auto add_constraints = [&](const MultilinearOp& m2, int slot, const GradedSpace& other, bool want_identity) {
        for (int g = 0; g < other.dim(); ++g)
            for (int out = 0; out < m2.target().dim(); ++out) {
                std::vector<Scalar> row(cand.size(), Scalar::zero(f));
                for (std::size_t c = 0; c < cand.size(); ++c) {
                    std::vector<int> tuple(2);
                    tuple[slot] = cand[c];
                    tuple[1 - slot] = g;
                    const Vec* v = m2.lookup(tuple);
                    if (v) {
                        auto it = v->find(out);
                        if (it != v->end()) row[c] = it->second;
                    }
                }
                Scalar want = want_identity && out == g ? Scalar::one(f) : Scalar::zero(f);
                rows.push_back(std::move(row));
                rhs.push_back(want);
            }
    };
    for (auto& triple : A.sequences(3)) {
        bool left = triple[0] == X && triple[1] == X;
        bool right = triple[1] == X && triple[2] == X;
        if (left) add_constraints(A.op(triple), 1, A.hom(X, triple[2]), true);
        if (right) add_constraints(A.op(triple), 0, A.hom(triple[0], X), true);
    }
    if (rows.empty()) return std::nullopt;
    ExactMatrix m(f, rows.size(), cand.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cand.size(); ++c) m.at(r, c) = rows[r][c];
    auto x = m.solve(rhs);
    if (!x) return std::nullopt;
    Vec e;
    for (std::size_t c = 0; c < cand.size(); ++c) vec_add(e, cand[c], (*x)[c]);
    if (!is_strict_identity(A, X, e)) return std::nullopt;
    return e;
}

}  // namespace ainf
