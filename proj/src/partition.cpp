#include "polyd/partition.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace polyd {

namespace {

// Union-find over signed cells: node 2i is (cell i, +), node 2i+1 is (cell i, -).
struct SignedDsu {
    std::vector<int> parent;
    explicit SignedDsu(int n) : parent(2 * n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[b] = a;
    }
    void relate_eq(int i, int j) { unite(2 * i, 2 * j); unite(2 * i + 1, 2 * j + 1); }
    void relate_opp(int i, int j) { unite(2 * i, 2 * j + 1); unite(2 * i + 1, 2 * j); }
    void relate_zero(int i) { unite(2 * i, 2 * i + 1); }
    bool is_zero(int i) { return find(2 * i) == find(2 * i + 1); }
};

std::vector<int> labels_from_dsu(SignedDsu& dsu, int n) {
    std::vector<int> labels(n, 0);
    std::vector<int> cls(2 * n, 0);  // root -> signed class id
    int next = 1;
    for (int i = 0; i < n; ++i) {
        if (dsu.is_zero(i)) continue;
        int rp = dsu.find(2 * i), rm = dsu.find(2 * i + 1);
        if (cls[rp] != 0) {
            labels[i] = cls[rp];
        } else {
            cls[rp] = next;
            cls[rm] = -next;
            labels[i] = next;
            ++next;
        }
    }
    return labels;
}

}  // namespace

TaggedPartition TaggedPartition::canonicalize(std::span<const int> raw) {
    if (raw.empty()) throw std::invalid_argument("TaggedPartition: empty labeling");
    TaggedPartition P;
    P.labels_.assign(raw.size(), 0);
    std::vector<std::pair<int, int>> remap;  // old class id -> (new id, sign flip)
    auto lookup = [&](int k) -> std::pair<int, int>* {
        for (auto& e : remap)
            if (e.first == k) return &e;
        return nullptr;
    };
    std::vector<int> flips;  // per new class
    int next = 1;
    for (size_t i = 0; i < raw.size(); ++i) {
        int l = raw[i];
        if (l == 0) {
            P.r_ = true;
            continue;
        }
        int k = std::abs(l);
        auto* e = lookup(k);
        if (!e) {
            remap.emplace_back(k, next);
            flips.push_back(l < 0 ? -1 : 1);
            P.labels_[i] = next;
            ++next;
        } else {
            int nk = e->second;
            int v = (l < 0 ? -1 : 1) * flips[nk - 1];
            P.labels_[i] = v * nk;
        }
    }
    P.p_ = next - 1;
    std::vector<bool> has_neg(P.p_ + 1, false);
    for (int l : P.labels_)
        if (l < 0) has_neg[-l] = true;
    P.q_ = static_cast<int>(std::count(has_neg.begin(), has_neg.end(), true));
    return P;
}

TaggedPartition TaggedPartition::parse(std::string_view s, int n) {
    std::string buf(s);
    for (char& c : buf)
        if (c == ',') c = ' ';
    std::istringstream in(buf);
    std::vector<int> raw;
    std::string tok;
    while (in >> tok) {
        size_t pos = 0;
        int v;
        try {
            v = std::stoi(tok, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("partition: non-integer token '" + tok + "'");
        }
        if (pos != tok.size()) throw std::invalid_argument("partition: non-integer token '" + tok + "'");
        raw.push_back(v);
    }
    if (static_cast<int>(raw.size()) != n) {
        throw std::invalid_argument("partition length mismatch: expected " + std::to_string(n) +
                                    " labels, got " + std::to_string(raw.size()));
    }
    return canonicalize(raw);
}

std::vector<int> TaggedPartition::part(int k) const {
    std::vector<int> r;
    for (int i = 0; i < size(); ++i)
        if (labels_[i] == k) r.push_back(i);
    return r;
}

std::vector<int> TaggedPartition::counterpart(int k) const {
    std::vector<int> r;
    for (int i = 0; i < size(); ++i)
        if (labels_[i] == -k) r.push_back(i);
    return r;
}

std::vector<int> TaggedPartition::zero_part() const {
    std::vector<int> r;
    for (int i = 0; i < size(); ++i)
        if (labels_[i] == 0) r.push_back(i);
    return r;
}

std::string TaggedPartition::str() const {
    std::string s;
    for (int i = 0; i < size(); ++i) {
        if (i) s += ',';
        s += std::to_string(labels_[i]);
    }
    return s;
}

void enumerate_tagged_partitions(int n, PartitionFilter filter,
                                 const std::function<bool(const TaggedPartition&)>& visit) {
    if (n < 1) throw std::invalid_argument("enumerate_tagged_partitions: n >= 1 required");
    std::vector<int> labels(n, 0);
    bool stop = false;
    bool standard_only = filter == PartitionFilter::standard_only;

    // Labels are generated in ascending order at each cell, so the stream is
    // lexicographic over the canonical label vectors.
    auto rec = [&](auto&& self, int cell, int classes) -> void {
        if (stop) return;
        if (cell == n) {
            TaggedPartition P = TaggedPartition::canonicalize(labels);
            if (filter == PartitionFilter::nonstandard_only && P.is_standard()) return;
            if (!visit(P)) stop = true;
            return;
        }
        int lo = standard_only ? 1 : -classes;
        for (int l = lo; l <= classes + 1 && !stop; ++l) {
            if (l == 0 && standard_only) continue;
            labels[cell] = l;
            self(self, cell + 1, classes + (l == classes + 1 ? 1 : 0));
        }
        labels[cell] = 0;
    };
    rec(rec, 0, 0);
}

std::vector<TaggedPartition> all_tagged_partitions(int n, PartitionFilter filter) {
    std::vector<TaggedPartition> out;
    enumerate_tagged_partitions(n, filter, [&](const TaggedPartition& P) {
        out.push_back(P);
        return true;
    });
    return out;
}

mpz_class tagged_partition_count(int n) {
    // Nonzero cells form a set partition where each block of size m carries
    // 2^(m-1) sign patterns (first occurrence positive): EGF exp((e^(2x)-1)/2).
    std::vector<mpz_class> b(n + 1);
    b[0] = 1;
    for (int m = 0; m < n; ++m) {
        mpz_class acc = 0;
        for (int j = 0; j <= m; ++j) {
            mpz_class binom, pw;
            mpz_bin_uiui(binom.get_mpz_t(), m, j);
            mpz_ui_pow_ui(pw.get_mpz_t(), 2, j);
            acc += binom * pw * b[m - j];
        }
        b[m + 1] = acc;
    }
    mpz_class total = 0;
    for (int k = 0; k <= n; ++k) {
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), n, k);
        total += binom * b[n - k];
    }
    return total;
}

RatMatrix membership_basis(const TaggedPartition& P) {
    int n = P.size(), p = P.num_parts();
    RatMatrix B = RatMatrix::Zero(n, p);
    for (int i = 0; i < n; ++i) {
        int l = P.labels()[i];
        if (l > 0) B(i, l - 1) = Rational(1);
        else if (l < 0) B(i, -l - 1) = Rational(-1);
    }
    return B;
}

bool in_polydiagonal(const RatVector& x, const TaggedPartition& P) {
    int p = P.num_parts();
    std::vector<bool> seen(p + 1, false);
    std::vector<Rational> rep(p + 1);
    for (int i = 0; i < P.size(); ++i) {
        int l = P.labels()[i];
        if (l == 0) {
            if (!x(i).is_zero()) return false;
            continue;
        }
        int k = std::abs(l);
        Rational v = l > 0 ? x(i) : -x(i);
        if (!seen[k]) {
            seen[k] = true;
            rep[k] = v;
        } else if (!(v == rep[k])) {
            return false;
        }
    }
    return true;
}

BlockDecomposition block_decomposition(const RatMatrix& M, const TaggedPartition& P) {
    if (M.rows() != M.cols() || M.rows() != P.size())
        throw std::invalid_argument("block_decomposition: matrix size must match partition");
    BlockDecomposition D;
    D.p = P.num_parts();
    D.q = P.num_counterparts();
    D.r = P.has_zero_part() ? 1 : 0;

    // Adapted class order: classes that have a counterpart first, keeping
    // first-occurrence order within each group.
    std::vector<int> with_c, without_c;
    for (int k = 1; k <= D.p; ++k)
        (P.counterpart(k).empty() ? without_c : with_c).push_back(k);
    D.class_order = with_c;
    D.class_order.insert(D.class_order.end(), without_c.begin(), without_c.end());

    int off = 0;
    for (int k : D.class_order) {
        auto cells = P.part(k);
        D.parts_.emplace_back(off, static_cast<int>(cells.size()));
        for (int c : cells) D.permutation.push_back(c);
        off += static_cast<int>(cells.size());
    }
    for (int idx = 0; idx < D.q; ++idx) {
        auto cells = P.counterpart(D.class_order[idx]);
        D.cparts_.emplace_back(off, static_cast<int>(cells.size()));
        for (int c : cells) D.permutation.push_back(c);
        off += static_cast<int>(cells.size());
    }
    {
        auto cells = P.zero_part();
        D.zero_ = {off, static_cast<int>(cells.size())};
        for (int c : cells) D.permutation.push_back(c);
    }

    int n = P.size();
    D.permuted.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) D.permuted(i, j) = M(D.permutation[i], D.permutation[j]);
    return D;
}

BlockDecomposition::Block BlockDecomposition::Q(int i, int j) const {
    auto [ro, rs] = parts_[i - 1];
    auto [co, cs] = parts_[j - 1];
    return permuted.block(ro, co, rs, cs);
}
BlockDecomposition::Block BlockDecomposition::R(int i, int j) const {
    auto [ro, rs] = parts_[i - 1];
    auto [co, cs] = cparts_[j - 1];
    return permuted.block(ro, co, rs, cs);
}
BlockDecomposition::Block BlockDecomposition::Z_i0(int i) const {
    auto [ro, rs] = parts_[i - 1];
    return permuted.block(ro, zero_.first, rs, zero_.second);
}
BlockDecomposition::Block BlockDecomposition::Qbar(int i, int j) const {
    auto [ro, rs] = cparts_[i - 1];
    auto [co, cs] = cparts_[j - 1];
    return permuted.block(ro, co, rs, cs);
}
BlockDecomposition::Block BlockDecomposition::Rbar(int i, int j) const {
    auto [ro, rs] = cparts_[i - 1];
    auto [co, cs] = parts_[j - 1];
    return permuted.block(ro, co, rs, cs);
}
BlockDecomposition::Block BlockDecomposition::Zbar_i0(int i) const {
    auto [ro, rs] = cparts_[i - 1];
    return permuted.block(ro, zero_.first, rs, zero_.second);
}
BlockDecomposition::Block BlockDecomposition::Z_0j(int j) const {
    auto [co, cs] = parts_[j - 1];
    return permuted.block(zero_.first, co, zero_.second, cs);
}
BlockDecomposition::Block BlockDecomposition::Zbar_0j(int j) const {
    auto [co, cs] = cparts_[j - 1];
    return permuted.block(zero_.first, co, zero_.second, cs);
}
BlockDecomposition::Block BlockDecomposition::Z_00() const {
    return permuted.block(zero_.first, zero_.first, zero_.second, zero_.second);
}

TaggedPartition minimal_polydiagonal_containing(const std::vector<RatVector>& vectors) {
    if (vectors.empty()) throw std::invalid_argument("minimal_polydiagonal_containing: no vectors");
    const Eigen::Index n = vectors.front().size();
    for (const auto& v : vectors)
        if (v.size() != n) throw std::invalid_argument("minimal_polydiagonal_containing: length mismatch");

    auto zero = [&](Eigen::Index i) {
        for (const auto& v : vectors)
            if (!v(i).is_zero()) return false;
        return true;
    };
    auto eq = [&](Eigen::Index i, Eigen::Index j) {
        for (const auto& v : vectors)
            if (!(v(i) == v(j))) return false;
        return true;
    };
    auto opp = [&](Eigen::Index i, Eigen::Index j) {
        for (const auto& v : vectors)
            if (!(v(i) == -v(j))) return false;
        return true;
    };

    std::vector<int> labels(n, 0);
    std::vector<Eigen::Index> reps;  // first cell of each class
    for (Eigen::Index i = 0; i < n; ++i) {
        if (zero(i)) continue;
        bool placed = false;
        for (size_t k = 0; k < reps.size() && !placed; ++k) {
            if (eq(reps[k], i)) {
                labels[i] = static_cast<int>(k) + 1;
                placed = true;
            } else if (opp(reps[k], i)) {
                labels[i] = -(static_cast<int>(k) + 1);
                placed = true;
            }
        }
        if (!placed) {
            reps.push_back(i);
            labels[i] = static_cast<int>(reps.size());
        }
    }
    return TaggedPartition::canonicalize(labels);
}

TaggedPartition minimal_polydiagonal_containing(const std::vector<Eigen::VectorXd>& vectors, double tol) {
    if (vectors.empty()) throw std::invalid_argument("minimal_polydiagonal_containing: no vectors");
    if (tol < 0) throw std::invalid_argument("minimal_polydiagonal_containing: negative tolerance");
    const Eigen::Index n = vectors.front().size();
    for (const auto& v : vectors)
        if (v.size() != n) throw std::invalid_argument("minimal_polydiagonal_containing: length mismatch");

    auto zero = [&](Eigen::Index i) {
        for (const auto& v : vectors)
            if (std::abs(v(i)) > tol) return false;
        return true;
    };
    auto eq = [&](Eigen::Index i, Eigen::Index j) {
        for (const auto& v : vectors)
            if (std::abs(v(i) - v(j)) > tol) return false;
        return true;
    };
    auto opp = [&](Eigen::Index i, Eigen::Index j) {
        for (const auto& v : vectors)
            if (std::abs(v(i) + v(j)) > tol) return false;
        return true;
    };

    SignedDsu dsu(static_cast<int>(n));
    std::vector<bool> zflag(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        zflag[i] = zero(i);
        if (zflag[i]) dsu.relate_zero(static_cast<int>(i));
    }
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (zflag[i] || zflag[j]) continue;
            if (eq(i, j)) dsu.relate_eq(static_cast<int>(i), static_cast<int>(j));
            if (opp(i, j)) dsu.relate_opp(static_cast<int>(i), static_cast<int>(j));
        }

    // The closure must not assert anything the pairwise comparisons reject.
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!zflag[i] && dsu.is_zero(static_cast<int>(i)))
            throw AmbiguousPatternError("tolerance ties force a nonzero cell to zero");
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (zflag[i] || zflag[j]) continue;
            if (dsu.find(2 * i) == dsu.find(2 * j) && !eq(i, j))
                throw AmbiguousPatternError("tolerance ties are not transitive (equality)");
            if (dsu.find(2 * i) == dsu.find(2 * j + 1) && !opp(i, j))
                throw AmbiguousPatternError("tolerance ties are not transitive (opposition)");
        }
    }
    auto labels = labels_from_dsu(dsu, static_cast<int>(n));
    return TaggedPartition::canonicalize(labels);
}

TaggedPartition intersect(const TaggedPartition& a, const TaggedPartition& b) {
    if (a.size() != b.size()) throw std::invalid_argument("intersect: size mismatch");
    int n = a.size();
    SignedDsu dsu(n);
    for (const TaggedPartition* P : {&a, &b}) {
        std::vector<int> rep(P->num_parts() + 1, -1);
        for (int i = 0; i < n; ++i) {
            int l = P->labels()[i];
            if (l == 0) {
                dsu.relate_zero(i);
                continue;
            }
            int k = std::abs(l);
            if (rep[k] < 0) {
                rep[k] = i;  // canonical: positive occurrence
            } else if (l > 0) {
                dsu.relate_eq(rep[k], i);
            } else {
                dsu.relate_opp(rep[k], i);
            }
        }
    }
    auto labels = labels_from_dsu(dsu, n);
    return TaggedPartition::canonicalize(labels);
}

bool is_subspace_of(const TaggedPartition& a, const TaggedPartition& b) {
    if (a.size() != b.size()) throw std::invalid_argument("is_subspace_of: size mismatch");
    RatMatrix B = membership_basis(a);
    for (Eigen::Index k = 0; k < B.cols(); ++k) {
        RatVector col = B.col(k);
        if (!in_polydiagonal(col, b)) return false;
    }
    return true;
}

}  // namespace polyd
