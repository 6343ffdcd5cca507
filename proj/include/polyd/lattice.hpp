#pragma once

#include <map>
#include <string>
#include <vector>

#include "polyd/invariance.hpp"
#include "polyd/network.hpp"
#include "polyd/partition.hpp"

namespace polyd {

/// Intersection-closed, inclusion-ordered set of generalized polydiagonals
/// invariant under one matrix. Always contains the all-singletons partition
/// (full space) and the null partition ({0}).
struct InvariantLattice {
    std::string matrix_tag;                  // "W" or "L"
    std::vector<TaggedPartition> elements;   // sorted lexicographically by labels

    bool contains(const TaggedPartition& P) const;
};

struct LatticeSizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filter the full tagged-partition enumeration by exact invariance.
/// Authoritative. Throws LatticeSizeError (with the partition-count
/// estimate) when n exceeds n_limit.
InvariantLattice lattice_bruteforce(const RatMatrix& M, int n_limit = 8, int jobs = 1,
                                    std::string matrix_tag = "W");

struct EigenLatticeOptions {
    double entry_tol = 1e-9;       // coordinate comparisons on float vectors
    double pattern_tol = 1e-7;     // vanishing test for relation functionals
    double spectral_tol = 1e-6;    // eigenvalue clustering / realness, relative to matrix scale
    double rank_tol = 1e-8;        // relative SVD threshold for numeric kernels
    int max_states = 50000;        // arrangement recursion budget
    int max_subset_seeds = 16;     // beyond this, fall back to pairwise sum closure
};

struct EigenLatticeResult {
    InvariantLattice lattice;
    std::vector<std::string> warnings;
};

/// Eigen-seeded construction: minimal generalized polydiagonals meeting the
/// kernel chains of each real eigenvalue, closed under sums that are again
/// invariant polydiagonals and under intersections. Every candidate is
/// verified exactly against the rational matrix before inclusion; complex
/// eigenvalue pairs are skipped with a warning. Best effort: brute force is
/// the authority wherever it runs.
EigenLatticeResult lattice_eigen(const RatMatrix& M, const EigenLatticeOptions& opts = {},
                                 std::string matrix_tag = "W");

/// Real-matrix convenience overload; entries are converted exactly so the
/// final verification stays rational.
inline EigenLatticeResult lattice_eigen(const Eigen::MatrixXd& M, const EigenLatticeOptions& opts = {},
                                        std::string matrix_tag = "W") {
    return lattice_eigen(to_rational(M), opts, std::move(matrix_tag));
}

/// DOT digraph of the covering relation of inclusion; deterministic node
/// ordering by canonical label.
std::string hasse_dot(const InvariantLattice& lat);

enum class LatticeMethod { brute, eigen, both };
LatticeMethod lattice_method_from_string(const std::string& s);

struct SynchronyReportEntry {
    TaggedPartition partition;
    bool in_W = false, in_L = false;
    ClassificationFlags flags;
    std::set<SystemClass> classes;
};

/// Union of both lattices with per-element classification and class counts.
struct SynchronyReport {
    InvariantLattice lattice_W, lattice_L;
    std::vector<SynchronyReportEntry> entries;  // sorted by labels
    std::map<std::string, int> counts;
    std::vector<std::string> warnings;
};

SynchronyReport synchrony_antisynchrony_report(const Network& net, LatticeMethod method,
                                               int n_limit = 8, int jobs = 1);

}  // namespace polyd
