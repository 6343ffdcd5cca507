#include "polyd/invariance.hpp"

#include <sstream>
#include <stdexcept>

namespace polyd {

namespace {

std::string fmt(const RatVector& v) {
    std::string s = "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v(i).str();
    }
    return s + ")";
}

bool regular_vec(const RatVector& v) {
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (!(v(i) == v(0))) return false;
    return true;
}

Rational valency_of(const RatVector& v) { return v.size() ? v(0) : Rational(0); }

struct ReportBuilder {
    BlockConditionReport rep;
    void add(std::string name, bool pass, std::string detail) {
        rep.conditions.push_back({std::move(name), pass, std::move(detail)});
    }
    // two row-sum vectors, both regular of the same valency
    void pair_same_valency(const std::string& name, const RatVector& a, const RatVector& b) {
        bool ok = regular_vec(a) && regular_vec(b) && valency_of(a) == valency_of(b);
        add(name, ok, fmt(a) + " vs " + fmt(b));
    }
    void regular(const std::string& name, const RatVector& a) {
        add(name, regular_vec(a), fmt(a));
    }
    void equals_zero(const std::string& name, const RatVector& a) {
        bool ok = true;
        for (Eigen::Index i = 0; i < a.size(); ++i)
            if (!a(i).is_zero()) ok = false;
        add(name, ok, fmt(a));
    }
    void equal_vectors(const std::string& name, const RatVector& a, const RatVector& b) {
        bool ok = a.size() == b.size();
        for (Eigen::Index i = 0; ok && i < a.size(); ++i)
            if (!(a(i) == b(i))) ok = false;
        add(name, ok, fmt(a) + " vs " + fmt(b));
    }
    BlockConditionReport finish() {
        rep.overall = true;
        for (const auto& c : rep.conditions)
            if (!c.pass) rep.overall = false;
        return std::move(rep);
    }
};

std::string idx(const char* base, int i, int j) {
    return std::string(base) + std::to_string(i) + std::to_string(j);
}

}  // namespace

bool leaves_invariant(const RatMatrix& M, const TaggedPartition& P) {
    if (M.rows() != M.cols() || M.rows() != P.size())
        throw std::invalid_argument("leaves_invariant: matrix size must match partition");
    const int n = P.size();
    // basis vectors have entries 0/+-1, so each image is a signed column sum
    RatVector img(n);
    for (int k = 1; k <= P.num_parts(); ++k) {
        for (int i = 0; i < n; ++i) img(i) = Rational(0);
        for (int j = 0; j < n; ++j) {
            int l = P.labels()[j];
            if (l == k)
                for (int i = 0; i < n; ++i) img(i) += M(i, j);
            else if (l == -k)
                for (int i = 0; i < n; ++i) img(i) -= M(i, j);
        }
        if (!in_polydiagonal(img, P)) return false;
    }
    return true;
}

BlockConditionReport check_block_conditions_W(const RatMatrix& M, const TaggedPartition& P) {
    if (P.is_null()) throw std::invalid_argument("block conditions: null partition rejected");
    auto D = block_decomposition(M, P);
    const int p = D.p, q = D.q, r = D.r;
    ReportBuilder out;

    for (int i = 1; i <= q; ++i)
        for (int j = 1; j <= q; ++j) {
            RatVector d1 = row_sum(D.Q(i, j)) - row_sum(D.R(i, j));
            RatVector d2 = row_sum(D.Qbar(i, j)) - row_sum(D.Rbar(i, j));
            out.pair_same_valency("rs(" + idx("Q", i, j) + ")-rs(" + idx("R", i, j) + ") vs rs(" +
                                      idx("Qb", i, j) + ")-rs(" + idx("Rb", i, j) + ")",
                                  d1, d2);
        }
    for (int i = 1; i <= q; ++i)
        for (int j = q + 1; j <= p; ++j) {
            RatVector v1 = row_sum(D.Q(i, j));
            RatVector v2 = -row_sum(D.Rbar(i, j));
            out.pair_same_valency("rs(" + idx("Q", i, j) + ") vs -rs(" + idx("Rb", i, j) + ")", v1, v2);
        }
    for (int i = q + 1; i <= p; ++i)
        for (int j = 1; j <= q; ++j) {
            RatVector d = row_sum(D.Q(i, j)) - row_sum(D.R(i, j));
            out.regular("rs(" + idx("Q", i, j) + ")-rs(" + idx("R", i, j) + ")", d);
        }
    for (int i = q + 1; i <= p; ++i)
        for (int j = q + 1; j <= p; ++j) out.regular(idx("Q", i, j), row_sum(D.Q(i, j)));
    if (r) {
        for (int j = 1; j <= q; ++j)
            out.equal_vectors("rs(" + idx("Z0", 0, j) + ") = rs(" + idx("Zb0", 0, j) + ")",
                              row_sum(D.Z_0j(j)), row_sum(D.Zbar_0j(j)));
        for (int j = q + 1; j <= p; ++j)
            out.equals_zero("rs(Z0" + std::to_string(j) + ") = 0", row_sum(D.Z_0j(j)));
    }
    return out.finish();
}

BlockConditionReport check_block_conditions_L_via_W(const RatMatrix& W, const TaggedPartition& P) {
    if (P.is_null()) throw std::invalid_argument("block conditions: null partition rejected");
    auto D = block_decomposition(W, P);
    const int p = D.p, q = D.q, r = D.r;
    ReportBuilder out;

    auto part_size = [&](int k) { return D.part_range(k).second; };
    auto cpart_size = [&](int k) { return D.counterpart_range(k).second; };

    // (i) parts with counterparts: total-valency sums and pair differences
    for (int i = 1; i <= q; ++i) {
        RatVector big1 = RatVector::Zero(part_size(i));
        for (int j = 1; j <= p; ++j)
            if (j != i) big1 += row_sum(D.Q(i, j));
        for (int j = 1; j <= q; ++j)
            if (j != i) big1 += row_sum(D.R(i, j));
        big1 += Rational(2) * row_sum(D.R(i, i));
        if (r) big1 += row_sum(D.Z_i0(i));

        RatVector big2 = RatVector::Zero(cpart_size(i));
        for (int j = 1; j <= q; ++j)
            if (j != i) big2 += row_sum(D.Qbar(i, j));
        for (int j = 1; j <= p; ++j)
            if (j != i) big2 += row_sum(D.Rbar(i, j));
        big2 += Rational(2) * row_sum(D.Rbar(i, i));
        if (r) big2 += row_sum(D.Zbar_i0(i));
        out.pair_same_valency("r_" + std::to_string(i) + " sums (part vs counterpart)", big1, big2);

        for (int j = 1; j <= q; ++j) {
            if (j == i) continue;
            RatVector d1 = row_sum(D.R(i, j)) - row_sum(D.Q(i, j));
            RatVector d2 = row_sum(D.Rbar(i, j)) - row_sum(D.Qbar(i, j));
            out.pair_same_valency("-rs(" + idx("Q", i, j) + ")+rs(" + idx("R", i, j) + ") vs rs(" +
                                      idx("Rb", i, j) + ")-rs(" + idx("Qb", i, j) + ")",
                                  d1, d2);
        }
    }
    // (ii) counterpart-bearing rows against counterpart-free columns
    for (int i = 1; i <= q; ++i)
        for (int j = q + 1; j <= p; ++j) {
            RatVector v1 = -row_sum(D.Q(i, j));
            RatVector v2 = row_sum(D.Rbar(i, j));
            out.pair_same_valency("-rs(" + idx("Q", i, j) + ") vs rs(" + idx("Rb", i, j) + ")", v1, v2);
        }
    // (iii) counterpart-free parts
    for (int i = q + 1; i <= p; ++i) {
        RatVector big = RatVector::Zero(part_size(i));
        for (int j = 1; j <= p; ++j)
            if (j != i) big += row_sum(D.Q(i, j));
        for (int j = 1; j <= q; ++j) big += row_sum(D.R(i, j));
        if (r) big += row_sum(D.Z_i0(i));
        out.regular("r_" + std::to_string(i) + " sum", big);

        for (int j = 1; j <= q; ++j) {
            RatVector d = row_sum(D.R(i, j)) - row_sum(D.Q(i, j));
            out.regular("-rs(" + idx("Q", i, j) + ")+rs(" + idx("R", i, j) + ")", d);
        }
    }
    // (iv)
    for (int i = q + 1; i <= p; ++i)
        for (int j = q + 1; j <= p; ++j) {
            if (j == i) continue;
            out.regular("-" + idx("Q", i, j), -row_sum(D.Q(i, j)));
        }
    // (v), (vi)
    if (r) {
        for (int j = 1; j <= q; ++j)
            out.equal_vectors("rs(Z0" + std::to_string(j) + ") = rs(Zb0" + std::to_string(j) + ")",
                              row_sum(D.Z_0j(j)), row_sum(D.Zbar_0j(j)));
        for (int j = q + 1; j <= p; ++j)
            out.equals_zero("rs(Z0" + std::to_string(j) + ") = 0", row_sum(D.Z_0j(j)));
    }
    return out.finish();
}

bool odd_balance_conditions(const RatMatrix& W, const TaggedPartition& P) {
    if (P.is_standard()) return false;  // defined for non-standard tagged partitions
    if (P.is_null()) return true;       // no parts, all conditions vacuous
    auto D = block_decomposition(W, P);
    const int p = D.p, q = D.q, r = D.r;

    auto regular = [](const RatVector& v) { return regular_vec(v); };

    // (a) every block regular except Q_ii, Qbar_ii, Z_0j, Zbar_0j, Z_00
    for (int i = 1; i <= p; ++i) {
        for (int j = 1; j <= p; ++j)
            if (i != j && !regular(row_sum(D.Q(i, j)))) return false;
        for (int j = 1; j <= q; ++j)
            if (!regular(row_sum(D.R(i, j)))) return false;
        if (r && !regular(row_sum(D.Z_i0(i)))) return false;
    }
    for (int i = 1; i <= q; ++i) {
        for (int j = 1; j <= q; ++j)
            if (i != j && !regular(row_sum(D.Qbar(i, j)))) return false;
        for (int j = 1; j <= p; ++j)
            if (!regular(row_sum(D.Rbar(i, j)))) return false;
        if (r && !regular(row_sum(D.Zbar_i0(i)))) return false;
    }
    // (b) matched valencies between a part and its counterpart
    for (int i = 1; i <= q; ++i) {
        for (int j = 1; j <= q; ++j) {
            if (i != j && !(valency_of(row_sum(D.Q(i, j))) == valency_of(row_sum(D.Qbar(i, j)))))
                return false;
            if (!(valency_of(row_sum(D.R(i, j))) == valency_of(row_sum(D.Rbar(i, j))))) return false;
        }
        if (r && !(valency_of(row_sum(D.Z_i0(i))) == valency_of(row_sum(D.Zbar_i0(i))))) return false;
    }
    // Coupling from counterpart-free classes into counterpart-bearing ones
    // must vanish: the images h(y_i, +-y_j) have no mirrored term to cancel.
    for (int i = 1; i <= q; ++i)
        for (int j = q + 1; j <= p; ++j) {
            if (!valency_of(row_sum(D.Q(i, j))).is_zero()) return false;
            if (!valency_of(row_sum(D.Rbar(i, j))).is_zero()) return false;
        }
    // (c), (d) rows of the zero part
    if (r) {
        for (int j = 1; j <= q; ++j) {
            RatVector a = row_sum(D.Z_0j(j)), b = row_sum(D.Zbar_0j(j));
            for (Eigen::Index t = 0; t < a.size(); ++t)
                if (!(a(t) == b(t))) return false;
        }
        for (int j = q + 1; j <= p; ++j) {
            RatVector a = row_sum(D.Z_0j(j));
            for (Eigen::Index t = 0; t < a.size(); ++t)
                if (!a(t).is_zero()) return false;
        }
    }
    return true;
}

ClassificationFlags classify(const Network& net, const TaggedPartition& P) {
    ClassificationFlags f;
    f.invariant_under_W = leaves_invariant(net.W, P);
    f.invariant_under_L = leaves_invariant(laplacian(net), P);
    if (P.is_standard()) {
        f.balanced = f.invariant_under_W;
        f.exo_balanced = f.invariant_under_L;
        f.strictly_exo_balanced = f.exo_balanced && !f.balanced;
    } else {
        f.even_odd_balanced = f.invariant_under_W;
        f.linear_balanced = f.invariant_under_L;
        f.odd_balanced = odd_balance_conditions(net.W, P);
    }
    return f;
}

const char* to_string(SystemClass c) {
    switch (c) {
        case SystemClass::IG: return "I_G";
        case SystemClass::IG0: return "I_G0";
        case SystemClass::IGodd: return "I_Godd";
        case SystemClass::IGl: return "I_Gl";
        case SystemClass::IGeo: return "I_Geo";
    }
    return "?";
}

SystemClass system_class_from_string(const std::string& s) {
    if (s == "I_G" || s == "IG") return SystemClass::IG;
    if (s == "I_G0" || s == "IG0") return SystemClass::IG0;
    if (s == "I_Godd" || s == "IGodd") return SystemClass::IGodd;
    if (s == "I_Gl" || s == "IGl") return SystemClass::IGl;
    if (s == "I_Geo" || s == "IGeo") return SystemClass::IGeo;
    throw std::invalid_argument("unknown system class '" + s + "'");
}

std::set<SystemClass> preserving_system_classes(const ClassificationFlags& f) {
    std::set<SystemClass> out;
    if (f.balanced) {
        out.insert(SystemClass::IG);
        out.insert(SystemClass::IGeo);
    }
    if (f.exo_balanced) {
        out.insert(SystemClass::IG0);
        out.insert(SystemClass::IGodd);
        out.insert(SystemClass::IGl);
    }
    if (f.odd_balanced) out.insert(SystemClass::IGodd);
    if (f.linear_balanced) out.insert(SystemClass::IGl);
    if (f.even_odd_balanced) out.insert(SystemClass::IGeo);
    return out;
}

std::set<SystemClass> preserving_system_classes(const Network& net, const TaggedPartition& P) {
    return preserving_system_classes(classify(net, P));
}

}  // namespace polyd
