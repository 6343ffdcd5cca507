#include "polyd/network.hpp"

#include <stdexcept>

namespace polyd {

Network Network::from_matrix(RatMatrix m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw std::invalid_argument("Network: adjacency matrix must be square and nonempty");
    Network net;
    net.n = static_cast<int>(m.rows());
    net.W = std::move(m);
    return net;
}

RatMatrix laplacian(const RatMatrix& W) {
    RatMatrix L = -W;
    auto v = row_sum(W);
    for (Eigen::Index i = 0; i < W.rows(); ++i) L(i, i) += v(i);
    return L;
}

Rational valency_relative_to_part(const Network& net, int i, std::span<const int> part) {
    if (i < 0 || i >= net.n) throw std::out_of_range("valency_relative_to_part: cell index");
    Rational s(0);
    for (int j : part) {
        if (j < 0 || j >= net.n) throw std::out_of_range("valency_relative_to_part: part index");
        s += net.W(i, j);
    }
    return s;
}

}  // namespace polyd
