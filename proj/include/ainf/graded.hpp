#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"

namespace ainf {

enum class Grading { Z, Z2 };

inline int parity(long d) { return (int)(((d % 2) + 2) % 2); }
inline Scalar sign_of(Field f, long exponent) {
    return parity(exponent) == 0 ? Scalar::one(f) : -Scalar::one(f);
}

/// Finite-dimensional graded vector space with named basis elements.
/// Degrees are stored as integers in both grading modes; in Z2 mode only
/// their parity is meaningful and degree comparisons are taken mod 2.
class GradedSpace {
public:
    GradedSpace() = default;
    GradedSpace(Grading mode, std::vector<std::pair<std::string, int>> basis) : mode_(mode) {
        for (auto& [name, deg] : basis) {
            if (index_.count(name)) throw std::invalid_argument("GradedSpace: duplicate basis name " + name);
            index_[name] = (int)names_.size();
            names_.push_back(name);
            degrees_.push_back(deg);
        }
    }

    Grading mode() const { return mode_; }
    int dim() const { return (int)names_.size(); }
    const std::string& name(int i) const { return names_[i]; }
    int degree(int i) const { return degrees_[i]; }
    int index(const std::string& n) const {
        auto it = index_.find(n);
        if (it == index_.end()) throw std::out_of_range("GradedSpace: unknown basis name " + n);
        return it->second;
    }
    bool has(const std::string& n) const { return index_.count(n) > 0; }

    bool degrees_equal(long a, long b) const {
        return mode_ == Grading::Z ? a == b : parity(a) == parity(b);
    }

    bool operator==(const GradedSpace& o) const {
        return mode_ == o.mode_ && names_ == o.names_ && degrees_ == o.degrees_;
    }

private:
    Grading mode_ = Grading::Z;
    std::vector<std::string> names_;
    std::vector<int> degrees_;
    std::map<std::string, int> index_;
};

/// Shift by n: an element of degree i+n in V sits in degree i of the result.
inline GradedSpace shift(const GradedSpace& V, int n) {
    std::vector<std::pair<std::string, int>> basis;
    for (int b = 0; b < V.dim(); ++b) basis.push_back({V.name(b), V.degree(b) - n});
    return GradedSpace(V.mode(), basis);
}

/// Sparse vector in a GradedSpace: basis index -> coefficient.
using Vec = std::map<int, Scalar>;

inline void vec_add(Vec& v, int idx, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = v.find(idx);
    if (it == v.end()) {
        v.emplace(idx, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) v.erase(it);
    }
}

inline void vec_add(Vec& v, const Vec& w, const Scalar& c) {
    for (auto& [i, s] : w) vec_add(v, i, s * c);
}

inline Vec vec_scale(const Vec& v, const Scalar& c) {
    Vec r;
    for (auto& [i, s] : v) vec_add(r, i, s * c);
    return r;
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
    Vec r = a;
    for (auto& [i, s] : b) vec_add(r, i, -s);
    return r;
}

/// Multilinear operation given by sparse structure constants on basis tuples.
/// Arguments are taken in function-composition order: for an operation along
/// a path X_0 -> ... -> X_k, slot 0 holds the last arrow Hom(X_{k-1}, X_k)
/// and slot k-1 holds the first arrow Hom(X_0, X_1).
class MultilinearOp {
public:
    MultilinearOp() = default;
    MultilinearOp(Field f, std::vector<GradedSpace> sources, GradedSpace target, int degree)
        : field_(f), sources_(std::move(sources)), target_(std::move(target)), degree_(degree) {}

    Field field() const { return field_; }
    int arity() const { return (int)sources_.size(); }
    int degree() const { return degree_; }
    const GradedSpace& source(int s) const { return sources_[s]; }
    const std::vector<GradedSpace>& sources() const { return sources_; }
    const GradedSpace& target() const { return target_; }
    const std::map<std::vector<int>, Vec>& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }

    long input_degree(const std::vector<int>& tuple) const {
        long d = 0;
        for (int s = 0; s < arity(); ++s) d += sources_[s].degree(tuple[s]);
        return d;
    }

    /// Adds c * (output basis element) to the structure constants at the
    /// given input tuple, enforcing homogeneity of degree `degree_`.
    void add_entry(const std::vector<int>& tuple, int out, const Scalar& c) {
        if (c.is_zero()) return;
        if ((int)tuple.size() != arity()) throw std::invalid_argument("MultilinearOp: tuple arity mismatch");
        long din = input_degree(tuple) + degree_;
        if (!target_.degrees_equal(din, target_.degree(out)))
            throw std::invalid_argument("MultilinearOp: inhomogeneous entry at output " + target_.name(out));
        auto it = entries_.find(tuple);
        if (it == entries_.end()) {
            Vec v;
            vec_add(v, out, c);
            if (!v.empty()) entries_.emplace(tuple, std::move(v));
        } else {
            vec_add(it->second, out, c);
            if (it->second.empty()) entries_.erase(it);
        }
    }

    void add_entry(const std::vector<int>& tuple, const Vec& out, const Scalar& c) {
        for (auto& [o, s] : out) add_entry(tuple, o, s * c);
    }

    const Vec* lookup(const std::vector<int>& tuple) const {
        auto it = entries_.find(tuple);
        return it == entries_.end() ? nullptr : &it->second;
    }

    Vec evaluate(const std::vector<Vec>& args) const {
        if ((int)args.size() != arity()) throw std::invalid_argument("MultilinearOp: argument count mismatch");
        Vec out;
        for (auto& [tuple, v] : entries_) {
            Scalar c = Scalar::one(field_);
            bool dead = false;
            for (int s = 0; s < arity(); ++s) {
                auto it = args[s].find(tuple[s]);
                if (it == args[s].end()) { dead = true; break; }
                c *= it->second;
            }
            if (!dead) vec_add(out, v, c);
        }
        return out;
    }

    MultilinearOp& operator+=(const MultilinearOp& o) {
        for (auto& [t, v] : o.entries_) add_entry(t, v, Scalar::one(field_));
        return *this;
    }

    MultilinearOp scaled(const Scalar& c) const {
        MultilinearOp r(field_, sources_, target_, degree_);
        if (!c.is_zero())
            for (auto& [t, v] : entries_) r.add_entry(t, v, c);
        return r;
    }

    MultilinearOp operator-(const MultilinearOp& o) const {
        MultilinearOp r = *this;
        for (auto& [t, v] : o.entries_) r.add_entry(t, v, -Scalar::one(field_));
        return r;
    }

private:
    Field field_{};
    std::vector<GradedSpace> sources_;
    GradedSpace target_;
    int degree_ = 0;
    std::map<std::vector<int>, Vec> entries_;
};

/// outer with `inner` substituted into slot `slot` (0-based, composition
/// order).  Every combined entry is multiplied by
/// (-1)^{const_exp + deg_mult * (sum of degrees of outer inputs in slots
/// before `slot`)}.
inline MultilinearOp compose_insert(const MultilinearOp& outer, const MultilinearOp& inner, int slot,
                                    long const_exp, long deg_mult) {
    std::vector<GradedSpace> srcs;
    for (int s = 0; s < slot; ++s) srcs.push_back(outer.source(s));
    for (int s = 0; s < inner.arity(); ++s) srcs.push_back(inner.source(s));
    for (int s = slot + 1; s < outer.arity(); ++s) srcs.push_back(outer.source(s));
    MultilinearOp r(outer.field(), std::move(srcs), outer.target(), outer.degree() + inner.degree());
    if (outer.is_zero() || inner.is_zero()) return r;
    for (auto& [ot, ov] : outer.entries()) {
        long pre = 0;
        for (int s = 0; s < slot; ++s) pre += outer.source(s).degree(ot[s]);
        Scalar sg = sign_of(outer.field(), const_exp + deg_mult * pre);
        for (auto& [it, iv] : inner.entries()) {
            auto hit = iv.find(ot[slot]);
            if (hit == iv.end()) continue;
            std::vector<int> tuple;
            tuple.reserve(ot.size() + it.size() - 1);
            tuple.insert(tuple.end(), ot.begin(), ot.begin() + slot);
            tuple.insert(tuple.end(), it.begin(), it.end());
            tuple.insert(tuple.end(), ot.begin() + slot + 1, ot.end());
            r.add_entry(tuple, ov, hit->second * sg);
        }
    }
    return r;
}

/// outer(g_0, ..., g_{i-1}) where block p feeds slot p of outer.  Each
/// combined entry is multiplied by
/// (-1)^{const_exp + sum_p deg_mult[p] * (sum of input degrees of block p)}.
inline MultilinearOp compose_blocks(const MultilinearOp& outer, const std::vector<const MultilinearOp*>& blocks,
                                    long const_exp, const std::vector<long>& deg_mult) {
    std::vector<GradedSpace> srcs;
    int total_deg = outer.degree();
    for (auto* b : blocks) {
        for (int s = 0; s < b->arity(); ++s) srcs.push_back(b->source(s));
        total_deg += b->degree();
    }
    MultilinearOp r(outer.field(), std::move(srcs), outer.target(), total_deg);
    if (outer.is_zero()) return r;
    for (auto* b : blocks)
        if (b->is_zero()) return r;

    // walk the product of block entry lists
    int i = (int)blocks.size();
    std::vector<std::map<std::vector<int>, Vec>::const_iterator> its(i);
    for (int p = 0; p < i; ++p) its[p] = blocks[p]->entries().begin();
    while (true) {
        long exp = const_exp;
        std::vector<int> tuple;
        for (int p = 0; p < i; ++p) {
            exp += deg_mult[p] * blocks[p]->input_degree(its[p]->first);
            tuple.insert(tuple.end(), its[p]->first.begin(), its[p]->first.end());
        }
        Scalar sg = sign_of(outer.field(), exp);
        // expand the product of block output terms against outer entries
        std::vector<Vec::const_iterator> ots(i);
        for (int p = 0; p < i; ++p) ots[p] = its[p]->second.begin();
        while (true) {
            std::vector<int> mid(i);
            Scalar c = sg;
            for (int p = 0; p < i; ++p) {
                mid[p] = ots[p]->first;
                c *= ots[p]->second;
            }
            if (const Vec* ov = outer.lookup(mid)) r.add_entry(tuple, *ov, c);
            int p = i - 1;
            while (p >= 0 && ++ots[p] == its[p]->second.end()) {
                ots[p] = its[p]->second.begin();
                --p;
            }
            if (p < 0) break;
        }
        int p = i - 1;
        while (p >= 0 && ++its[p] == blocks[p]->entries().end()) {
            its[p] = blocks[p]->entries().begin();
            --p;
        }
        if (p < 0) break;
    }
    return r;
}

}  // namespace ainf
