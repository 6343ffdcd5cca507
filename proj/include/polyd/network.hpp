#pragma once

#include <optional>
#include <span>
#include <vector>

#include "polyd/rational.hpp"

namespace polyd {

/// Weighted directed network. W(i,j) is the weight of the edge from cell j
/// to cell i (zero entry = no edge). Cells are 0-indexed internally; all
/// I/O is 1-indexed.
struct Network {
    int n = 0;
    RatMatrix W;

    static Network from_matrix(RatMatrix m);
};

/// Column vector of row sums. Entry i of row_sum(W) is the input valency v(i).
template <typename Derived>
Eigen::Vector<typename Derived::Scalar, Eigen::Dynamic> row_sum(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    Eigen::Vector<Scalar, Eigen::Dynamic> r(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Scalar s{0};
        for (Eigen::Index j = 0; j < m.cols(); ++j) s += m(i, j);
        r(i) = s;
    }
    return r;
}

/// Common row sum v_W if the matrix is regular (all row sums equal),
/// otherwise nullopt. A matrix with no rows is regular of valency 0.
template <typename Derived>
std::optional<typename Derived::Scalar> is_regular(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    if (m.rows() == 0) return Scalar{0};
    auto rs = row_sum(m);
    for (Eigen::Index i = 1; i < rs.size(); ++i)
        if (!(rs(i) == rs(0))) return std::nullopt;
    return rs(0);
}

/// L = D - W with D = diag(row_sum(W)). Always regular of valency 0.
RatMatrix laplacian(const RatMatrix& W);
inline RatMatrix laplacian(const Network& net) { return laplacian(net.W); }

/// Sum of weights into cell i (0-based) from the cells in `part` (0-based).
Rational valency_relative_to_part(const Network& net, int i, std::span<const int> part);

}  // namespace polyd
