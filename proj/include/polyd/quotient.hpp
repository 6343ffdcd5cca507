#pragma once

#include <string>
#include <vector>

#include "polyd/invariance.hpp"
#include "polyd/network.hpp"
#include "polyd/partition.hpp"

namespace polyd {

enum class QuotientKind { balanced, exo, odd_symbolic, linear_symbolic, eo_symbolic };

const char* to_string(QuotientKind k);
QuotientKind quotient_kind_from_string(const std::string& s);

enum class CellTag { plus, minus, zero };

/// Reduced network over the parts of a tagged partition. Symbolic kinds tag
/// counterpart cells as negative states and the zero part as a zero state.
/// matrix shapes: p x p for balanced/exo/eo_symbolic, p x (p+1) for
/// linear_symbolic (last column is the self-coupling valency r_i), and
/// (p+q+r) x (p+q+r) adjacency for odd_symbolic. Cell order follows the
/// adapted class numbering of the block decomposition (counterpart-bearing
/// classes first); only edges into the p part cells are defined for
/// odd_symbolic, rows of symbolic counterpart and zero cells stay empty.
struct QuotientNetwork {
    QuotientKind kind;
    std::vector<std::string> cell_names;   // "[1]", "-[1]", "[3]": named by first original cell (1-based)
    std::vector<CellTag> cell_tags;
    std::vector<int> representatives;      // 0-based original cell for each quotient cell
    RatMatrix matrix;
};

QuotientNetwork quotient_balanced(const Network& net, const TaggedPartition& P);
QuotientNetwork quotient_exo(const Network& net, const TaggedPartition& P);
QuotientNetwork quotient_odd_symbolic(const Network& net, const TaggedPartition& P);
QuotientNetwork quotient_linear_symbolic(const Network& net, const TaggedPartition& P);
QuotientNetwork quotient_eo_symbolic(const Network& net, const TaggedPartition& P);

QuotientNetwork make_quotient(const Network& net, const TaggedPartition& P, QuotientKind kind);

/// Weighted digraph in DOT; negative-state cells are drawn as boxes, the
/// zero cell dashed, zero-weight edges omitted.
std::string to_dot(const QuotientNetwork& q);

}  // namespace polyd
