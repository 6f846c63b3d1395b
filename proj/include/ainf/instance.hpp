#pragma once

#include <climits>
#include <functional>
#include <set>

#include "graded.hpp"

namespace ainf {

/// Object sequence, entries are indices into the instance's object list.
using ObjSeq = std::vector<int>;

/// Finite arity-truncated A-infinity category or pre-category.
///
/// Hom spaces exist on transversal ordered pairs; the operation m_n lives on
/// transversal (n+1)-sequences (X_0,...,X_n), takes its arguments in
/// composition order (slot 0 in Hom(X_{n-1},X_n), ..., slot n-1 in
/// Hom(X_0,X_1)) and lands in Hom(X_0,X_n) with degree 2-n.
class AInfInstance {
public:
    AInfInstance() = default;
    AInfInstance(Field f, Grading mode, int trunc) : field_(f), mode_(mode), trunc_(trunc) {}

    Field field() const { return field_; }
    Grading mode() const { return mode_; }
    int truncation() const { return trunc_; }
    void set_truncation(int n) { trunc_ = n; }

    int add_object(const std::string& name) {
        objects_.push_back(name);
        return (int)objects_.size() - 1;
    }
    int object_count() const { return (int)objects_.size(); }
    const std::string& object_name(int i) const { return objects_[i]; }
    int object_index(const std::string& n) const {
        for (int i = 0; i < (int)objects_.size(); ++i)
            if (objects_[i] == n) return i;
        throw std::out_of_range("AInfInstance: unknown object " + n);
    }

    void set_hom(int x, int y, GradedSpace h) { homs_[{x, y}] = std::move(h); }
    bool has_hom(int x, int y) const { return homs_.count({x, y}) > 0; }
    const GradedSpace& hom(int x, int y) const {
        auto it = homs_.find({x, y});
        if (it == homs_.end())
            throw std::out_of_range("AInfInstance: no hom (" + objects_[x] + "," + objects_[y] + ")");
        return it->second;
    }

    /// Full family: every tuple of objects is transversal.
    void set_full_family() { full_family_ = true; family_.clear(); }
    bool full_family() const { return full_family_; }

    void add_transversal(const ObjSeq& seq) { family_.insert(seq); }
    const std::set<ObjSeq>& family() const { return family_; }

    bool is_transversal(const ObjSeq& seq) const {
        if (seq.empty()) return false;
        if (full_family_) {
            for (int x : seq)
                if (x < 0 || x >= (int)objects_.size()) return false;
            return true;
        }
        return family_.count(seq) > 0;
    }

    /// All transversal sequences of the given length, lexicographically.
    std::vector<ObjSeq> sequences(int len) const {
        std::vector<ObjSeq> out;
        if (full_family_) {
            ObjSeq cur(len, 0);
            int n = (int)objects_.size();
            if (n == 0 || len == 0) return out;
            while (true) {
                out.push_back(cur);
                int p = len - 1;
                while (p >= 0 && ++cur[p] == n) cur[p--] = 0;
                if (p < 0) break;
            }
        } else {
            for (auto& s : family_)
                if ((int)s.size() == len) out.push_back(s);
        }
        return out;
    }

    /// Signature of m_n on a transversal (n+1)-sequence: all-zero entries.
    MultilinearOp zero_op(const ObjSeq& seq, int degree_override = INT_MIN) const {
        int n = (int)seq.size() - 1;
        std::vector<GradedSpace> srcs;
        for (int s = 0; s < n; ++s) srcs.push_back(hom(seq[n - 1 - s], seq[n - s]));
        int d = degree_override == INT_MIN ? 2 - n : degree_override;
        return MultilinearOp(field_, std::move(srcs), hom(seq[0], seq[n]), d);
    }

    void set_op(const ObjSeq& seq, MultilinearOp op) {
        if (!is_transversal(seq)) throw std::invalid_argument("AInfInstance: op on non-transversal sequence");
        int n = (int)seq.size() - 1;
        if (op.degree() != 2 - n) throw std::invalid_argument("AInfInstance: m_n must have degree 2-n");
        if (op.is_zero())
            ops_.erase(seq);
        else
            ops_[seq] = std::move(op);
    }

    bool has_op(const ObjSeq& seq) const { return ops_.count(seq) > 0; }
    const std::map<ObjSeq, MultilinearOp>& ops() const { return ops_; }

    MultilinearOp op(const ObjSeq& seq) const {
        auto it = ops_.find(seq);
        return it == ops_.end() ? zero_op(seq) : it->second;
    }
    const MultilinearOp* op_ptr(const ObjSeq& seq) const {
        auto it = ops_.find(seq);
        return it == ops_.end() ? nullptr : &it->second;
    }

    /// Structural validation: family subsequence-closed, singletons present,
    /// homs on transversal pairs, op signatures coherent.  Throws on failure.
    void validate() const {
        if (!full_family_) {
            for (int x = 0; x < (int)objects_.size(); ++x)
                if (!family_.count({x}))
                    throw std::logic_error("AInfInstance: singleton (" + objects_[x] + ") missing from family");
            for (auto& s : family_) {
                if ((int)s.size() < 2) continue;
                for (std::size_t drop = 0; drop < s.size(); ++drop) {
                    ObjSeq sub;
                    for (std::size_t k = 0; k < s.size(); ++k)
                        if (k != drop) sub.push_back(s[k]);
                    if (!family_.count(sub))
                        throw std::logic_error("AInfInstance: family not closed under subsequences");
                }
            }
        }
        for (auto& s : family_)
            for (std::size_t i = 0; i < s.size(); ++i)
                for (std::size_t j = i + 1; j < s.size(); ++j)
                    if (!has_hom(s[i], s[j]))
                        throw std::logic_error("AInfInstance: missing hom on transversal pair");
        for (auto& [seq, o] : ops_) {
            if (!is_transversal(seq)) throw std::logic_error("AInfInstance: op on non-transversal sequence");
            int n = (int)seq.size() - 1;
            if (n < 1 || n > trunc_) throw std::logic_error("AInfInstance: op arity out of range");
            if (o.degree() != 2 - n) throw std::logic_error("AInfInstance: op degree != 2-n");
        }
    }

    bool operator==(const AInfInstance& o) const {
        if (!(field_ == o.field_) || mode_ != o.mode_ || trunc_ != o.trunc_ || objects_ != o.objects_ ||
            full_family_ != o.full_family_ || family_ != o.family_ || homs_ != o.homs_)
            return false;
        if (ops_.size() != o.ops_.size()) return false;
        for (auto& [seq, op] : ops_) {
            auto it = o.ops_.find(seq);
            if (it == o.ops_.end()) return false;
            if (!(op - it->second).is_zero()) return false;
        }
        return true;
    }

private:
    Field field_{};
    Grading mode_ = Grading::Z;
    int trunc_ = 1;
    std::vector<std::string> objects_;
    bool full_family_ = false;
    std::set<ObjSeq> family_;
    std::map<std::pair<int, int>, GradedSpace> homs_;
    std::map<ObjSeq, MultilinearOp> ops_;
};

}  // namespace ainf
