#include "polyd/lattice.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <bit>
#include <deque>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

namespace polyd {

namespace {

int rational_rank(RatMatrix A) {
    int rank = 0;
    const int rows = static_cast<int>(A.rows()), cols = static_cast<int>(A.cols());
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (!A(r, c).is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        A.row(rank).swap(A.row(pivot));
        for (int r = rank + 1; r < rows; ++r) {
            if (A(r, c).is_zero()) continue;
            Rational f = A(r, c) / A(rank, c);
            for (int cc = c; cc < cols; ++cc) A(r, cc) -= f * A(rank, cc);
        }
        ++rank;
    }
    return rank;
}

TaggedPartition full_partition(int n) {
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = i + 1;
    return TaggedPartition::canonicalize(labels);
}

TaggedPartition null_partition(int n) {
    return TaggedPartition::canonicalize(std::vector<int>(n, 0));
}

std::vector<TaggedPartition> sorted_elements(const std::set<TaggedPartition>& s) {
    return {s.begin(), s.end()};
}

// ---- eigen-seeded machinery ----

// Relation functionals on R^n: x_i = 0, x_i = x_j, x_i = -x_j.
struct Functionals {
    std::vector<Eigen::VectorXd> f;
    std::vector<std::tuple<int, int, int>> meta;  // (kind 0/1/2, i, j)
    explicit Functionals(int n) {
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
            v(i) = 1;
            f.push_back(v);
            meta.emplace_back(0, i, i);
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
                v(i) = 1;
                v(j) = -1;
                f.push_back(v);
                meta.emplace_back(1, i, j);
                Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
                w(i) = 1;
                w(j) = 1;
                f.push_back(w);
                meta.emplace_back(2, i, j);
            }
    }
};

// Pattern of the subspace spanned by the (orthonormal) columns of U: the
// relations are those whose functional vanishes identically on the span.
// Returns nullopt when tolerance noise makes the relations inconsistent.
std::optional<TaggedPartition> pattern_of_span(const Eigen::MatrixXd& U, const Functionals& F,
                                               double pattern_tol) {
    const int n = static_cast<int>(U.rows());
    std::vector<bool> zero(n, false);
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, +1 eq / -1 opp)
    for (size_t k = 0; k < F.f.size(); ++k) {
        if ((F.f[k].transpose() * U).cwiseAbs().maxCoeff() > pattern_tol) continue;
        auto [kind, i, j] = F.meta[k];
        if (kind == 0) {
            zero[i] = true;
        } else {
            int s = kind == 1 ? 1 : -1;
            adj[i].emplace_back(j, s);
            adj[j].emplace_back(i, s);
        }
    }
    std::vector<int> labels(n, 0);
    int next = 1;
    for (int i = 0; i < n; ++i) {
        if (zero[i] || labels[i] != 0) continue;
        labels[i] = next;
        std::deque<int> queue{i};
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (auto [j, s] : adj[v]) {
                if (zero[j]) return std::nullopt;  // related to an identically-zero cell
                int want = s * labels[v];
                if (labels[j] == 0) {
                    labels[j] = want;
                    queue.push_back(j);
                } else if (labels[j] != want) {
                    return std::nullopt;
                }
            }
        }
        ++next;
    }
    return TaggedPartition::canonicalize(labels);
}

// Enumerate the patterns realized by vectors of span(U): walk the
// arrangement of relation hyperplanes, intersecting one non-vanishing
// functional at a time. When `states` is given, every visited subspace is
// recorded as (pattern, subspace dimension).
void patterns_from_subspace(const Eigen::MatrixXd& U0, const Functionals& F,
                            const EigenLatticeOptions& opts, std::set<TaggedPartition>& out,
                            std::vector<std::string>& warnings,
                            std::vector<std::pair<TaggedPartition, int>>* states = nullptr) {
    std::set<std::vector<bool>> seen;
    std::set<TaggedPartition> state_patterns;
    int visited = 0;
    bool budget_hit = false;

    auto rec = [&](auto&& self, const Eigen::MatrixXd& U) -> void {
        if (U.cols() == 0 || budget_hit) return;
        std::vector<bool> vanish(F.f.size());
        for (size_t k = 0; k < F.f.size(); ++k)
            vanish[k] = (F.f[k].transpose() * U).cwiseAbs().maxCoeff() <= opts.pattern_tol;
        if (!seen.insert(vanish).second) return;
        if (++visited > opts.max_states) {
            budget_hit = true;
            return;
        }
        if (auto P = pattern_of_span(U, F, opts.pattern_tol)) {
            out.insert(*P);
            if (states && state_patterns.insert(*P).second)
                states->emplace_back(*P, static_cast<int>(U.cols()));
        }
        if (U.cols() == 1) return;
        for (size_t k = 0; k < F.f.size(); ++k) {
            if (vanish[k]) continue;
            Eigen::VectorXd w = U.transpose() * F.f[k];
            // orthonormal basis of the hyperplane w-perp inside coefficient space
            Eigen::Index d = U.cols();
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(w);
            Eigen::MatrixXd Q = qr.householderQ();
            Eigen::MatrixXd N = Q.rightCols(d - 1);
            self(self, U * N);
        }
    };
    rec(rec, U0);
    if (budget_hit)
        warnings.push_back("arrangement budget exceeded; eigen-seeded lattice may be incomplete");
}

// Relations holding on the sum of two subspaces are those holding on both;
// at the pattern level that is the minimal polydiagonal containing the
// union of the two membership bases.
TaggedPartition join_patterns(const TaggedPartition& a, const TaggedPartition& b) {
    std::vector<RatVector> cols;
    for (const TaggedPartition* P : {&a, &b}) {
        RatMatrix B = membership_basis(*P);
        for (Eigen::Index c = 0; c < B.cols(); ++c) cols.push_back(B.col(c));
    }
    if (cols.empty()) return a;  // both null
    return minimal_polydiagonal_containing(cols);
}

}  // namespace

bool InvariantLattice::contains(const TaggedPartition& P) const {
    return std::binary_search(elements.begin(), elements.end(), P);
}

InvariantLattice lattice_bruteforce(const RatMatrix& M, int n_limit, int jobs, std::string matrix_tag) {
    const int n = static_cast<int>(M.rows());
    if (n > n_limit) {
        throw LatticeSizeError("network has " + std::to_string(n) + " cells; brute force limited to " +
                               std::to_string(n_limit) + " (would enumerate " +
                               tagged_partition_count(n).get_str() + " tagged partitions)");
    }
    auto all = all_tagged_partitions(n);
    std::vector<char> keep(all.size(), 0);
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        for (size_t i = 0; i < all.size(); ++i) keep[i] = leaves_invariant(M, all[i]);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t i = next.fetch_add(64); i < all.size(); i = next.fetch_add(64))
                for (size_t k = i; k < std::min(all.size(), i + 64); ++k)
                    keep[k] = leaves_invariant(M, all[k]);
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    InvariantLattice lat;
    lat.matrix_tag = std::move(matrix_tag);
    for (size_t i = 0; i < all.size(); ++i)
        if (keep[i]) lat.elements.push_back(all[i]);
    // enumeration is lexicographic, so elements are already sorted
    return lat;
}

EigenLatticeResult lattice_eigen(const RatMatrix& M, const EigenLatticeOptions& opts,
                                 std::string matrix_tag) {
    const int n = static_cast<int>(M.rows());
    EigenLatticeResult res;
    res.lattice.matrix_tag = std::move(matrix_tag);

    Eigen::MatrixXd Md = to_double(M);
    const double scale = std::max(1.0, Md.cwiseAbs().maxCoeff());
    const double spec_tol = opts.spectral_tol * scale;

    Eigen::EigenSolver<Eigen::MatrixXd> es(Md);
    if (es.info() != Eigen::Success) {
        res.warnings.push_back("eigen decomposition failed; only trivial elements seeded");
    }

    // cluster real eigenvalues; complex pairs are skipped
    std::vector<double> reals;
    bool complex_seen = false;
    for (int i = 0; i < n; ++i) {
        auto ev = es.eigenvalues()(i);
        if (std::abs(ev.imag()) > spec_tol) complex_seen = true;
        else reals.push_back(ev.real());
    }
    if (complex_seen)
        res.warnings.push_back("complex eigenvalue pair present; its chains were skipped");
    std::sort(reals.begin(), reals.end());
    std::vector<std::pair<double, int>> clusters;  // (value, algebraic multiplicity)
    for (double v : reals) {
        if (!clusters.empty() && std::abs(v - clusters.back().first) <= spec_tol) {
            auto& [cv, cm] = clusters.back();
            cv = (cv * cm + v) / (cm + 1);
            ++cm;
        } else {
            clusters.emplace_back(v, 1);
        }
    }

    Functionals F(n);
    std::set<TaggedPartition> candidates;
    // arrangement states of each full generalized eigenspace
    std::vector<std::vector<std::pair<TaggedPartition, int>>> lambda_states;

    for (auto [lambda, mult] : clusters) {
        Eigen::MatrixXd B = Md - lambda * Eigen::MatrixXd::Identity(n, n);
        double bn = std::max(1.0, B.cwiseAbs().maxCoeff());
        B /= bn;
        Eigen::MatrixXd Bp = Eigen::MatrixXd::Identity(n, n);
        Eigen::MatrixXd last;
        int prev_dim = 0;
        for (int m = 1; m <= mult; ++m) {
            Bp = Bp * B;
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(Bp, Eigen::ComputeFullV);
            const auto& sv = svd.singularValues();
            double thr = opts.rank_tol * std::max(sv(0), 1e-300);
            int nullity = 0;
            for (int i = 0; i < sv.size(); ++i)
                if (sv(i) <= thr) ++nullity;
            if (nullity <= prev_dim) break;
            last = svd.matrixV().rightCols(nullity);
            if (nullity < mult) patterns_from_subspace(last, F, opts, candidates, res.warnings);
            prev_dim = nullity;
        }
        if (last.cols() > 0) {
            std::vector<std::pair<TaggedPartition, int>> states;
            patterns_from_subspace(last, F, opts, candidates, res.warnings, &states);
            lambda_states.push_back(std::move(states));
        }
    }

    // An invariant polydiagonal splits into one arrangement state per
    // generalized eigenspace; join the state patterns across eigenvalues and
    // keep the joins whose pattern dimension equals the summed state
    // dimensions (the sum is then itself a generalized polydiagonal).
    {
        struct Combo {
            TaggedPartition pattern;
            int dim;
            size_t next;
        };
        std::deque<Combo> queue;
        const size_t L = lambda_states.size();
        for (size_t t = 0; t < L; ++t)
            for (const auto& [p, d] : lambda_states[t]) queue.push_back({p, d, t + 1});
        size_t budget = 50000;
        while (!queue.empty()) {
            Combo c = std::move(queue.front());
            queue.pop_front();
            for (size_t u = c.next; u < L; ++u) {
                for (const auto& [p, d] : lambda_states[u]) {
                    if (budget == 0) break;
                    --budget;
                    TaggedPartition joined = join_patterns(c.pattern, p);
                    int dim = c.dim + d;
                    if (joined.dimension() == dim) candidates.insert(joined);
                    if (dim < n) queue.push_back({joined, dim, u + 1});
                }
            }
        }
        if (budget == 0)
            res.warnings.push_back("cross-eigenvalue join budget exceeded; eigen-seeded lattice may be incomplete");
    }

    // exact filter: a candidate enters only if verified on the rational matrix
    std::set<TaggedPartition> kept;
    for (const auto& P : candidates)
        if (leaves_invariant(M, P)) kept.insert(P);
    kept.insert(full_partition(n));
    kept.insert(null_partition(n));

    // close under sums whose span is itself an invariant polydiagonal
    std::set<TaggedPartition> result = kept;
    std::vector<TaggedPartition> seeds(kept.begin(), kept.end());
    std::erase_if(seeds, [](const TaggedPartition& P) { return P.is_null(); });
    auto try_sum = [&](const std::vector<const TaggedPartition*>& group) {
        Eigen::Index cols = 0;
        for (auto* P : group) cols += P->num_parts();
        RatMatrix V(n, cols);
        Eigen::Index at = 0;
        for (auto* P : group) {
            RatMatrix B = membership_basis(*P);
            for (Eigen::Index c = 0; c < B.cols(); ++c) V.col(at++) = B.col(c);
        }
        std::vector<RatVector> colvecs;
        for (Eigen::Index c = 0; c < V.cols(); ++c) colvecs.push_back(V.col(c));
        TaggedPartition S = minimal_polydiagonal_containing(colvecs);
        if (result.count(S)) return;
        if (S.dimension() == rational_rank(V) && leaves_invariant(M, S)) result.insert(S);
    };
    if (seeds.size() <= static_cast<size_t>(opts.max_subset_seeds)) {
        // Masks holding a nested pair span the same sum as a smaller mask.
        std::vector<unsigned> subsumed;
        for (size_t a = 0; a < seeds.size(); ++a)
            for (size_t b = 0; b < seeds.size(); ++b)
                if (a != b && is_subspace_of(seeds[a], seeds[b]))
                    subsumed.push_back((1u << a) | (1u << b));
        const unsigned total = 1u << seeds.size();
        std::vector<unsigned> masks;
        for (unsigned m = 3; m < total; ++m) {
            if ((m & (m - 1)) == 0) continue;
            bool redundant = false;
            for (unsigned pair : subsumed)
                if ((m & pair) == pair) {
                    redundant = true;
                    break;
                }
            if (!redundant) masks.push_back(m);
        }
        std::stable_sort(masks.begin(), masks.end(),
                         [](unsigned a, unsigned b) { return std::popcount(a) < std::popcount(b); });
        for (unsigned m : masks) {
            std::vector<const TaggedPartition*> group;
            for (size_t t = 0; t < seeds.size(); ++t)
                if (m & (1u << t)) group.push_back(&seeds[t]);
            try_sum(group);
        }
    } else {
        res.warnings.push_back("many seeds; sum closure ran pairwise to a fixpoint");
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<TaggedPartition> cur(result.begin(), result.end());
            for (size_t a = 0; a < cur.size(); ++a)
                for (size_t b = a + 1; b < cur.size(); ++b) {
                    if (is_subspace_of(cur[a], cur[b]) || is_subspace_of(cur[b], cur[a])) continue;
                    size_t before = result.size();
                    try_sum({&cur[a], &cur[b]});
                    if (result.size() != before) grew = true;
                }
        }
    }

    // intersection closure
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<TaggedPartition> cur(result.begin(), result.end());
        for (size_t a = 0; a < cur.size(); ++a)
            for (size_t b = a + 1; b < cur.size(); ++b) {
                TaggedPartition I = intersect(cur[a], cur[b]);
                if (result.insert(I).second) grew = true;
            }
    }

    res.lattice.elements = sorted_elements(result);
    return res;
}

std::string hasse_dot(const InvariantLattice& lat) {
    std::ostringstream os;
    os << "digraph lattice {\n  rankdir=BT;\n";
    const auto& els = lat.elements;
    for (size_t i = 0; i < els.size(); ++i)
        os << "  p" << i << " [label=\"" << els[i].str() << "\"];\n";
    for (size_t a = 0; a < els.size(); ++a)
        for (size_t b = 0; b < els.size(); ++b) {
            if (a == b || !is_subspace_of(els[a], els[b])) continue;
            bool covering = true;
            for (size_t c = 0; c < els.size() && covering; ++c) {
                if (c == a || c == b) continue;
                if (is_subspace_of(els[a], els[c]) && is_subspace_of(els[c], els[b]))
                    covering = false;
            }
            if (covering) os << "  p" << a << " -> p" << b << ";\n";
        }
    os << "}\n";
    return os.str();
}

LatticeMethod lattice_method_from_string(const std::string& s) {
    if (s == "brute") return LatticeMethod::brute;
    if (s == "eigen") return LatticeMethod::eigen;
    if (s == "both") return LatticeMethod::both;
    throw std::invalid_argument("unknown lattice method '" + s + "'");
}

SynchronyReport synchrony_antisynchrony_report(const Network& net, LatticeMethod method, int n_limit,
                                               int jobs) {
    SynchronyReport rep;
    auto run = [&](const RatMatrix& M, const std::string& tag) -> InvariantLattice {
        if (method == LatticeMethod::brute) return lattice_bruteforce(M, n_limit, jobs, tag);
        if (method == LatticeMethod::eigen) {
            auto r = lattice_eigen(M, {}, tag);
            rep.warnings.insert(rep.warnings.end(), r.warnings.begin(), r.warnings.end());
            return r.lattice;
        }
        auto brute = lattice_bruteforce(M, n_limit, jobs, tag);
        auto eig = lattice_eigen(M, {}, tag);
        rep.warnings.insert(rep.warnings.end(), eig.warnings.begin(), eig.warnings.end());
        if (eig.lattice.elements != brute.elements)
            rep.warnings.push_back("eigen method disagreed with brute force on " + tag +
                                   "; brute force kept");
        return brute;
    };
    rep.lattice_W = run(net.W, "W");
    rep.lattice_L = run(laplacian(net), "L");

    std::set<TaggedPartition> u(rep.lattice_W.elements.begin(), rep.lattice_W.elements.end());
    u.insert(rep.lattice_L.elements.begin(), rep.lattice_L.elements.end());
    for (const auto& P : u) {
        SynchronyReportEntry e;
        e.partition = P;
        e.in_W = rep.lattice_W.contains(P);
        e.in_L = rep.lattice_L.contains(P);
        e.flags = classify(net, P);
        e.classes = preserving_system_classes(e.flags);
        rep.entries.push_back(std::move(e));
    }
    auto count = [&](auto pred) {
        return static_cast<int>(std::count_if(rep.entries.begin(), rep.entries.end(), pred));
    };
    rep.counts["union"] = static_cast<int>(rep.entries.size());
    rep.counts["lattice_W"] = static_cast<int>(rep.lattice_W.elements.size());
    rep.counts["lattice_L"] = static_cast<int>(rep.lattice_L.elements.size());
    rep.counts["balanced"] = count([](const auto& e) { return e.flags.balanced; });
    rep.counts["strictly_exo_balanced"] =
        count([](const auto& e) { return e.flags.strictly_exo_balanced; });
    rep.counts["odd_balanced"] = count([](const auto& e) { return e.flags.odd_balanced; });
    rep.counts["linear_balanced"] = count([](const auto& e) { return e.flags.linear_balanced; });
    rep.counts["even_odd_balanced"] = count([](const auto& e) { return e.flags.even_odd_balanced; });
    return rep;
}

}  // namespace polyd
