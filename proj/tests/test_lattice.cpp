#include <doctest.h>
#include <Eigen/Eigenvalues>

#include <cstdlib>
#include <random>
#include <set>

#include "polyd/io.hpp"
#include "polyd/lattice.hpp"

using namespace polyd;

namespace {

std::string fixture(const char* name) {
    return std::string(std::getenv("POLYD_FIXTURES")) + "/" + name;
}

TaggedPartition tp(std::initializer_list<int> raw) {
    return TaggedPartition::canonicalize(std::vector<int>(raw));
}

std::set<std::vector<int>> label_set(const InvariantLattice& lat) {
    std::set<std::vector<int>> out;
    for (const auto& P : lat.elements) out.insert(P.labels());
    return out;
}

}  // namespace

TEST_CASE("brute-force lattice of the four-cell example") {
    Network net = load_network(fixture("four_cell.json"));
    auto LW = lattice_bruteforce(net.W, 8, 1, "W");
    auto LL = lattice_bruteforce(laplacian(net), 8, 1, "L");

    // {x3 = x4} is balanced for this network (cells 3 and 4 receive equal
    // inputs from every part), so the adjacency lattice has 12 elements.
    CHECK(LW.elements.size() == 12);
    CHECK(LL.elements.size() == 13);

    std::set<std::vector<int>> expect_W{
        {0, 0, 0, 0}, {0, 1, -1, 1}, {1, -1, 0, 0}, {1, 0, -1, 1}, {1, 1, 0, 0}, {1, 1, 2, -2},
        {1, 1, 2, 2}, {1, 1, 2, 3}, {1, 2, 0, 0},  {1, 2, 3, -3}, {1, 2, 3, 3}, {1, 2, 3, 4}};
    std::set<std::vector<int>> expect_L{
        {0, 0, 0, 0}, {1, -1, 0, 0}, {1, 1, -1, 1}, {1, 1, 0, 0}, {1, 1, 1, 1},
        {1, 1, 2, -2}, {1, 1, 2, 1}, {1, 1, 2, 2},  {1, 1, 2, 3}, {1, 2, 0, 0},
        {1, 2, 3, -3}, {1, 2, 3, 3}, {1, 2, 3, 4}};
    CHECK(label_set(LW) == expect_W);
    CHECK(label_set(LL) == expect_L);

    // union of the two lattices
    std::set<std::vector<int>> u = label_set(LW);
    u.insert(expect_L.begin(), expect_L.end());
    CHECK(u.size() == 15);
}

TEST_CASE("lattice invariants") {
    Network net = load_network(fixture("four_cell.json"));
    for (const RatMatrix& M : {net.W, RatMatrix(laplacian(net))}) {
        auto lat = lattice_bruteforce(M, 8);
        CHECK(lat.contains(tp({1, 2, 3, 4})));
        CHECK(lat.contains(tp({0, 0, 0, 0})));
        // intersection-closed
        for (const auto& a : lat.elements)
            for (const auto& b : lat.elements) CHECK(lat.contains(intersect(a, b)));
    }
    CHECK(lattice_bruteforce(laplacian(net), 8).contains(tp({1, 1, 1, 1})));

    // the zero matrix leaves every subspace invariant
    auto all = lattice_bruteforce(RatMatrix::Zero(2, 2), 8);
    CHECK(all.elements.size() == 6);

    CHECK_THROWS_AS(lattice_bruteforce(RatMatrix::Zero(9, 9), 8), LatticeSizeError);
    try {
        lattice_bruteforce(RatMatrix::Zero(9, 9), 8);
    } catch (const LatticeSizeError& e) {
        CHECK(std::string(e.what()).find("tagged partitions") != std::string::npos);
    }
}

TEST_CASE("parallel filtering is deterministic") {
    Network net = load_network(fixture("four_cell.json"));
    auto a = lattice_bruteforce(net.W, 8, 1);
    auto b = lattice_bruteforce(net.W, 8, 4);
    CHECK(a.elements == b.elements);
}

TEST_CASE("eigen-seeded lattice matches brute force on the fixtures") {
    Network net = load_network(fixture("four_cell.json"));
    for (const RatMatrix& M : {net.W, RatMatrix(laplacian(net))}) {
        auto brute = lattice_bruteforce(M, 8);
        auto eig = lattice_eigen(M);
        CHECK(eig.lattice.elements == brute.elements);
    }

    // identity: every generalized polydiagonal is invariant
    RatMatrix I3 = RatMatrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) I3(i, i) = Rational(1);
    auto eig3 = lattice_eigen(I3);
    CHECK(eig3.lattice.elements.size() == 24);
    CHECK(eig3.lattice.elements == lattice_bruteforce(I3, 8).elements);

    Network ring = load_network(fixture("three_cell_regular.json"));
    CHECK(lattice_eigen(ring.W).lattice.elements == lattice_bruteforce(ring.W, 8).elements);
    Network ne = load_network(fixture("four_cell_nonregular.json"));
    CHECK(lattice_eigen(ne.W).lattice.elements == lattice_bruteforce(ne.W, 8).elements);
    CHECK(lattice_eigen(laplacian(ne)).lattice.elements ==
          lattice_bruteforce(laplacian(ne), 8).elements);
}

TEST_CASE("eigen-seeded lattice on random integer matrices with real spectra") {
    std::mt19937_64 rng(59);
    int done = 0;
    while (done < 25) {
        int n = 2 + static_cast<int>(rng() % 4);
        RatMatrix M(n, n);
        if (rng() % 2) {  // symmetric
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    int v = static_cast<int>(rng() % 5) - 2;
                    M(i, j) = Rational(v);
                    M(j, i) = Rational(v);
                }
        } else {  // triangular, possibly defective
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    M(i, j) = j > i   ? Rational(static_cast<int>(rng() % 3) - 1)
                              : j == i ? Rational(static_cast<int>(rng() % 2))
                                       : Rational(0);
        }
        ++done;
        auto brute = lattice_bruteforce(M, 8);
        auto eig = lattice_eigen(M);
        CHECK(eig.lattice.elements == brute.elements);
    }
}

TEST_CASE("complex spectra are skipped with a warning") {
    // rotation by 90 degrees: eigenvalues +-i
    RatMatrix R(2, 2);
    R << Rational(0), Rational(-1), Rational(1), Rational(0);
    auto eig = lattice_eigen(R);
    REQUIRE(!eig.warnings.empty());
    CHECK(eig.warnings[0].find("complex") != std::string::npos);
    // full space and zero remain
    CHECK(eig.lattice.elements.size() == lattice_bruteforce(R, 8).elements.size());
}

TEST_CASE("eigen-seeded lattice is always a subset of brute force") {
    std::mt19937_64 rng(61);
    for (int t = 0; t < 40; ++t) {
        int n = 2 + static_cast<int>(rng() % 4);
        RatMatrix M(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) M(i, j) = Rational(static_cast<int>(rng() % 5) - 2);
        auto brute = lattice_bruteforce(M, 8);
        auto eig = lattice_eigen(M);
        for (const auto& P : eig.lattice.elements) CHECK(brute.contains(P));
        // with an all-real spectrum the two must be equal
        Eigen::EigenSolver<Eigen::MatrixXd> es(to_double(M));
        bool real = true;
        for (int i = 0; i < n; ++i)
            if (std::abs(es.eigenvalues()(i).imag()) > 1e-6) real = false;
        if (real) CHECK(eig.lattice.elements == brute.elements);
    }
}

TEST_CASE("hasse diagram") {
    InvariantLattice two{"W", {tp({0, 0}), tp({1, 2})}};
    std::string dot = hasse_dot(two);
    CHECK(dot.find("p0 -> p1") != std::string::npos);

    Network net = load_network(fixture("four_cell.json"));
    auto LW = lattice_bruteforce(net.W, 8, 1, "W");
    std::string big = hasse_dot(LW);
    // the null partition is covered by every dimension-1 element
    CHECK(big.find("->") != std::string::npos);

    // inclusion chain inside the Laplacian lattice
    CHECK(is_subspace_of(tp({1, 1, 1, 1}), tp({1, 1, 2, 1})));
    CHECK(is_subspace_of(tp({1, 1, 2, 1}), tp({1, 1, 2, 3})));
}

TEST_CASE("synchrony and anti-synchrony report") {
    Network net = load_network(fixture("four_cell.json"));
    auto rep = synchrony_antisynchrony_report(net, LatticeMethod::both);
    CHECK(rep.entries.size() == 15);
    CHECK(rep.counts.at("lattice_W") == 12);
    CHECK(rep.counts.at("lattice_L") == 13);
    CHECK(rep.counts.at("balanced") == 4);                // includes the full space
    CHECK(rep.counts.at("strictly_exo_balanced") == 2);   // [1,1,1,1] and [1,1,2,1]
    CHECK(rep.counts.at("odd_balanced") == 7);            // six plus the null partition
    CHECK(rep.counts.at("linear_balanced") == 7);
    CHECK(rep.counts.at("even_odd_balanced") == 8);
    CHECK(rep.warnings.empty());

    // regular network: both lattices coincide
    Network ring = load_network(fixture("three_cell_regular.json"));
    auto rr = synchrony_antisynchrony_report(ring, LatticeMethod::brute);
    CHECK(rr.lattice_W.elements == rr.lattice_L.elements);

    // the chain network has no nontrivial synchrony space
    Network chain = load_network(fixture("three_cell_chain.json"));
    auto rc = synchrony_antisynchrony_report(chain, LatticeMethod::brute);
    for (const auto& e : rc.entries)
        if (e.flags.balanced) CHECK(e.partition == tp({1, 2, 3}));
    bool has_112 = false;
    for (const auto& e : rc.entries)
        if (e.partition == tp({1, 1, 2})) has_112 = e.flags.exo_balanced;
    CHECK(has_112);
}
