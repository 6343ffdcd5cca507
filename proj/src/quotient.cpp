#include "polyd/quotient.hpp"

#include <sstream>
#include <stdexcept>

namespace polyd {

namespace {

Rational valency(const Eigen::Block<const RatMatrix>& block) {
    auto v = row_sum(block);
    return v.size() ? v(0) : Rational(0);
}

std::string part_name(const Network& net, const TaggedPartition& P, int original_class) {
    for (int i = 0; i < net.n; ++i)
        if (P.labels()[i] == original_class) return "[" + std::to_string(i + 1) + "]";
    return "[?]";
}

/// Part cells in adapted order, named and with representatives filled in.
void fill_part_cells(QuotientNetwork& q, const Network& net, const TaggedPartition& P,
                     const BlockDecomposition& D) {
    for (int k : D.class_order) {
        q.cell_names.push_back(part_name(net, P, k));
        q.cell_tags.push_back(CellTag::plus);
        q.representatives.push_back(P.part(k).front());
    }
}

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

}  // namespace

const char* to_string(QuotientKind k) {
    switch (k) {
        case QuotientKind::balanced: return "balanced";
        case QuotientKind::exo: return "exo";
        case QuotientKind::odd_symbolic: return "odd_symbolic";
        case QuotientKind::linear_symbolic: return "linear_symbolic";
        case QuotientKind::eo_symbolic: return "eo_symbolic";
    }
    return "?";
}

QuotientKind quotient_kind_from_string(const std::string& s) {
    if (s == "balanced") return QuotientKind::balanced;
    if (s == "exo") return QuotientKind::exo;
    if (s == "odd" || s == "odd_symbolic") return QuotientKind::odd_symbolic;
    if (s == "linear" || s == "linear_symbolic") return QuotientKind::linear_symbolic;
    if (s == "eo" || s == "eo_symbolic") return QuotientKind::eo_symbolic;
    throw std::invalid_argument("unknown quotient kind '" + s + "'");
}

QuotientNetwork quotient_balanced(const Network& net, const TaggedPartition& P) {
    require(classify(net, P).balanced, "quotient_balanced: partition is not balanced");
    auto D = block_decomposition(net.W, P);
    QuotientNetwork q{QuotientKind::balanced, {}, {}, {}, {}};
    fill_part_cells(q, net, P, D);
    q.matrix.resize(D.p, D.p);
    for (int i = 1; i <= D.p; ++i)
        for (int j = 1; j <= D.p; ++j) q.matrix(i - 1, j - 1) = valency(D.Q(i, j));
    return q;
}

QuotientNetwork quotient_exo(const Network& net, const TaggedPartition& P) {
    require(classify(net, P).exo_balanced, "quotient_exo: partition is not exo-balanced");
    auto D = block_decomposition(net.W, P);
    QuotientNetwork q{QuotientKind::exo, {}, {}, {}, {}};
    fill_part_cells(q, net, P, D);
    q.matrix = RatMatrix::Zero(D.p, D.p);
    for (int i = 1; i <= D.p; ++i)
        for (int j = 1; j <= D.p; ++j)
            if (i != j) q.matrix(i - 1, j - 1) = valency(D.Q(i, j));
    return q;
}

QuotientNetwork quotient_odd_symbolic(const Network& net, const TaggedPartition& P) {
    require(classify(net, P).odd_balanced, "quotient_odd_symbolic: partition is not odd-balanced");
    auto D = block_decomposition(net.W, P);
    const int p = D.p, q_ = D.q, r = D.r;
    QuotientNetwork q{QuotientKind::odd_symbolic, {}, {}, {}, {}};
    fill_part_cells(q, net, P, D);
    for (int idx = 0; idx < q_; ++idx) {
        int k = D.class_order[idx];
        q.cell_names.push_back("-" + part_name(net, P, k));
        q.cell_tags.push_back(CellTag::minus);
        q.representatives.push_back(P.counterpart(k).front());
    }
    if (r) {
        int first = P.zero_part().front();
        q.cell_names.push_back("[" + std::to_string(first + 1) + "]");
        q.cell_tags.push_back(CellTag::zero);
        q.representatives.push_back(first);
    }
    int m = p + q_ + r;
    q.matrix = RatMatrix::Zero(m, m);
    for (int i = 1; i <= p; ++i) {
        for (int j = 1; j <= p; ++j)
            if (j != i) q.matrix(i - 1, j - 1) = valency(D.Q(i, j));
        for (int j = 1; j <= q_; ++j) q.matrix(i - 1, p + j - 1) = valency(D.R(i, j));
        if (r) q.matrix(i - 1, m - 1) = valency(D.Z_i0(i));
    }
    return q;
}

QuotientNetwork quotient_linear_symbolic(const Network& net, const TaggedPartition& P) {
    require(classify(net, P).linear_balanced, "quotient_linear_symbolic: partition is not linear-balanced");
    auto D = block_decomposition(net.W, P);
    const int p = D.p, q_ = D.q, r = D.r;
    QuotientNetwork q{QuotientKind::linear_symbolic, {}, {}, {}, {}};
    fill_part_cells(q, net, P, D);
    q.matrix = RatMatrix::Zero(p, p + 1);
    for (int i = 1; i <= p; ++i) {
        for (int j = 1; j <= p; ++j) {
            if (j == i) continue;
            // q_ij: valency of -rs(Q_ij)+rs(R_ij), where R only spans the
            // counterpart-bearing columns
            RatVector d = -row_sum(D.Q(i, j));
            if (j <= q_) d += row_sum(D.R(i, j));
            q.matrix(i - 1, j - 1) = d.size() ? d(0) : Rational(0);
        }
        // r_i: total self-coupling valency
        RatVector big = RatVector::Zero(D.part_range(i).second);
        for (int j = 1; j <= p; ++j)
            if (j != i) big += row_sum(D.Q(i, j));
        for (int j = 1; j <= q_; ++j)
            if (j != i) big += row_sum(D.R(i, j));
        if (i <= q_) big += Rational(2) * row_sum(D.R(i, i));
        if (r) big += row_sum(D.Z_i0(i));
        q.matrix(i - 1, p) = big.size() ? big(0) : Rational(0);
    }
    return q;
}

QuotientNetwork quotient_eo_symbolic(const Network& net, const TaggedPartition& P) {
    require(classify(net, P).even_odd_balanced, "quotient_eo_symbolic: partition is not even-odd-balanced");
    auto D = block_decomposition(net.W, P);
    const int p = D.p, q_ = D.q;
    QuotientNetwork q{QuotientKind::eo_symbolic, {}, {}, {}, {}};
    fill_part_cells(q, net, P, D);
    q.matrix.resize(p, p);
    for (int i = 1; i <= p; ++i)
        for (int j = 1; j <= p; ++j) {
            RatVector d = row_sum(D.Q(i, j));
            if (j <= q_) d -= row_sum(D.R(i, j));
            q.matrix(i - 1, j - 1) = d.size() ? d(0) : Rational(0);
        }
    return q;
}

QuotientNetwork make_quotient(const Network& net, const TaggedPartition& P, QuotientKind kind) {
    switch (kind) {
        case QuotientKind::balanced: return quotient_balanced(net, P);
        case QuotientKind::exo: return quotient_exo(net, P);
        case QuotientKind::odd_symbolic: return quotient_odd_symbolic(net, P);
        case QuotientKind::linear_symbolic: return quotient_linear_symbolic(net, P);
        case QuotientKind::eo_symbolic: return quotient_eo_symbolic(net, P);
    }
    throw std::invalid_argument("make_quotient: bad kind");
}

std::string to_dot(const QuotientNetwork& q) {
    std::ostringstream os;
    os << "digraph quotient {\n";
    os << "  rankdir=LR;\n";
    for (size_t i = 0; i < q.cell_names.size(); ++i) {
        os << "  c" << i << " [label=\"" << q.cell_names[i] << "\"";
        if (q.cell_tags[i] == CellTag::minus) os << ", shape=box";
        else if (q.cell_tags[i] == CellTag::zero) os << ", style=dashed";
        os << "];\n";
    }
    // For linear_symbolic the last column is the self-coupling r_i, drawn as
    // a loop annotation.
    const bool linear = q.kind == QuotientKind::linear_symbolic;
    const Eigen::Index ncols = linear ? q.matrix.cols() - 1 : q.matrix.cols();
    for (Eigen::Index i = 0; i < q.matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < ncols; ++j) {
            if (q.matrix(i, j).is_zero()) continue;
            os << "  c" << j << " -> c" << i << " [label=\"" << q.matrix(i, j).str() << "\"];\n";
        }
        if (linear && !q.matrix(i, q.matrix.cols() - 1).is_zero()) {
            os << "  c" << i << " -> c" << i << " [label=\"r=" << q.matrix(i, q.matrix.cols() - 1).str()
               << "\", style=dotted];\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace polyd
