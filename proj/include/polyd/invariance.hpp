#pragma once

#include <set>
#include <string>
#include <vector>

#include "polyd/network.hpp"
#include "polyd/partition.hpp"

namespace polyd {

/// M * b lies in Delta_P for every basis vector b of Delta_P (exact).
bool leaves_invariant(const RatMatrix& M, const TaggedPartition& P);

struct BlockCondition {
    std::string name;    // which block pair / sum the condition is about
    bool pass = false;
    std::string detail;  // the row sums that were compared
};

struct BlockConditionReport {
    bool overall = false;
    std::vector<BlockCondition> conditions;
};

/// Block conditions equivalent to invariance of Delta_P under M itself
/// (adjacency form): regularity and matching valencies of Q/R/Qbar/Rbar/Z
/// blocks of the adapted block structure of M.
BlockConditionReport check_block_conditions_W(const RatMatrix& M, const TaggedPartition& P);
inline BlockConditionReport check_block_conditions_W(const Network& net, const TaggedPartition& P) {
    return check_block_conditions_W(net.W, P);
}

/// Conditions on the blocks of the adjacency matrix W equivalent to
/// invariance of Delta_P under the Laplacian L = D - W.
BlockConditionReport check_block_conditions_L_via_W(const RatMatrix& W, const TaggedPartition& P);
inline BlockConditionReport check_block_conditions_L_via_W(const Network& net, const TaggedPartition& P) {
    return check_block_conditions_L_via_W(net.W, P);
}

struct ClassificationFlags {
    bool invariant_under_W = false;
    bool invariant_under_L = false;
    bool balanced = false;               // standard, W-invariant
    bool exo_balanced = false;           // standard, L-invariant
    bool strictly_exo_balanced = false;  // exo but not balanced
    bool odd_balanced = false;           // non-standard, block conditions for odd systems
    bool linear_balanced = false;        // non-standard, L-invariant
    bool even_odd_balanced = false;      // non-standard, W-invariant
};

/// Does the tagged partition satisfy the odd-balance block conditions
/// (regular non-exempt blocks, matched part/counterpart valencies, zero
/// row sums into and out of the zero part, and zero coupling between
/// counterpart-bearing and counterpart-free classes)?
bool odd_balance_conditions(const RatMatrix& W, const TaggedPartition& P);

ClassificationFlags classify(const Network& net, const TaggedPartition& P);

enum class SystemClass { IG, IG0, IGodd, IGl, IGeo };

const char* to_string(SystemClass c);
SystemClass system_class_from_string(const std::string& s);

/// Admissible-system classes whose every member leaves Delta_P flow-invariant.
std::set<SystemClass> preserving_system_classes(const Network& net, const TaggedPartition& P);
std::set<SystemClass> preserving_system_classes(const ClassificationFlags& f);

}  // namespace polyd
