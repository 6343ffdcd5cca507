#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyd/rational.hpp"

namespace polyd {

/// Tagged partition of {1..n} as a canonical signed labeling: label 0 puts a
/// cell in the zero part P0, +k in part P_k, -k in the counterpart of P_k.
/// Canonical form: class indices are 1..p in order of first occurrence and
/// the first occurrence of every class is positive. Equal labelings are
/// exactly the partitions with equal generalized polydiagonals.
class TaggedPartition {
public:
    TaggedPartition() = default;

    /// Renumber classes by first occurrence and flip per-class signs so every
    /// first occurrence is positive. Gaps in class indices are repaired.
    static TaggedPartition canonicalize(std::span<const int> raw);

    /// Comma- or space-separated signed integers, exactly n of them.
    static TaggedPartition parse(std::string_view s, int n);

    int size() const { return static_cast<int>(labels_.size()); }
    int num_parts() const { return p_; }           // p
    int num_counterparts() const { return q_; }    // q: classes with a negative occurrence
    bool has_zero_part() const { return r_; }      // r
    bool is_standard() const { return q_ == 0 && !r_; }
    bool is_null() const { return p_ == 0; }
    int dimension() const { return p_; }           // dim of the generalized polydiagonal

    const std::vector<int>& labels() const { return labels_; }

    std::vector<int> part(int k) const;         // cells with label +k (0-based cells)
    std::vector<int> counterpart(int k) const;  // cells with label -k
    std::vector<int> zero_part() const;         // cells with label 0

    std::string str() const;  // "1,1,2,-2"

    friend bool operator==(const TaggedPartition&, const TaggedPartition&) = default;
    friend auto operator<=>(const TaggedPartition& a, const TaggedPartition& b) {
        return a.labels_ <=> b.labels_;
    }

private:
    std::vector<int> labels_;
    int p_ = 0, q_ = 0;
    bool r_ = false;
};

enum class PartitionFilter { all, standard_only, nonstandard_only };

/// Visits every canonical tagged partition of {1..n} exactly once, in
/// lexicographic order of the label vectors. Return false from the visitor
/// to stop early.
void enumerate_tagged_partitions(int n, PartitionFilter filter,
                                 const std::function<bool(const TaggedPartition&)>& visit);

std::vector<TaggedPartition> all_tagged_partitions(int n, PartitionFilter filter = PartitionFilter::all);

/// Number of canonical tagged partitions of {1..n}.
mpz_class tagged_partition_count(int n);

/// Basis of the generalized polydiagonal as columns b_k = sum of e_i over
/// label +k minus sum over label -k. Shape n x p.
RatMatrix membership_basis(const TaggedPartition& P);

/// x lies in the generalized polydiagonal of P (exact check).
bool in_polydiagonal(const RatVector& x, const TaggedPartition& P);

/// Cell reordering adapted to a tagged partition: classes with counterparts
/// first (renumbered 1..q), then the remaining parts, then counterparts
/// in the same class order, then the zero part. Exposes the named blocks of
/// the permuted matrix.
struct BlockDecomposition {
    int p = 0, q = 0, r = 0;
    std::vector<int> class_order;   // adapted class k (1..p) -> original class id
    std::vector<int> permutation;   // adapted index -> original cell (0-based)
    RatMatrix permuted;             // M reordered by `permutation` on rows and columns

    using Block = Eigen::Block<const RatMatrix>;
    Block Q(int i, int j) const;     // to P_i from P_j        (1 <= i,j <= p)
    Block R(int i, int j) const;     // to P_i from Pbar_j     (1 <= i <= p, 1 <= j <= q)
    Block Z_i0(int i) const;         // to P_i from P0
    Block Qbar(int i, int j) const;  // to Pbar_i from Pbar_j  (1 <= i,j <= q)
    Block Rbar(int i, int j) const;  // to Pbar_i from P_j     (1 <= i <= q, 1 <= j <= p)
    Block Zbar_i0(int i) const;      // to Pbar_i from P0
    Block Z_0j(int j) const;         // to P0 from P_j
    Block Zbar_0j(int j) const;      // to P0 from Pbar_j
    Block Z_00() const;              // to P0 from P0

    /// Adapted part sizes and offsets inside `permuted`.
    std::pair<int, int> part_range(int k) const { return parts_[k - 1]; }
    std::pair<int, int> counterpart_range(int k) const { return cparts_[k - 1]; }
    std::pair<int, int> zero_range() const { return zero_; }

    friend BlockDecomposition block_decomposition(const RatMatrix&, const TaggedPartition&);

private:
    std::vector<std::pair<int, int>> parts_, cparts_;  // (offset, size)
    std::pair<int, int> zero_{0, 0};
};

BlockDecomposition block_decomposition(const RatMatrix& M, const TaggedPartition& P);

struct AmbiguousPatternError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Smallest generalized polydiagonal containing every input vector: cells
/// share a part iff their coordinates agree in all vectors, a part and its
/// counterpart iff they are opposite, and a cell is in the zero part iff its
/// coordinate is always zero.
TaggedPartition minimal_polydiagonal_containing(const std::vector<RatVector>& vectors);

/// Floating variant with absolute tolerance (|a-b| <= tol, |a+b| <= tol).
/// Throws AmbiguousPatternError when the transitive closure of near-ties
/// asserts a relation the pairwise comparisons do not support.
TaggedPartition minimal_polydiagonal_containing(const std::vector<Eigen::VectorXd>& vectors, double tol);

/// Canonical partition of the intersection of the two polydiagonals.
TaggedPartition intersect(const TaggedPartition& a, const TaggedPartition& b);

/// Delta_a is a subspace of Delta_b.
bool is_subspace_of(const TaggedPartition& a, const TaggedPartition& b);

}  // namespace polyd
