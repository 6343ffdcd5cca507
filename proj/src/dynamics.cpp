#include "polyd/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>

namespace polyd {

namespace {

// Deterministic across platforms: raw mt19937_64 output mapped to [0,1).
struct Rng {
    std::mt19937_64 eng;
    Rng(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
        std::seed_seq seq{a, b, c};
        eng.seed(seq);
    }
    double uniform() { return static_cast<double>(eng() >> 11) * (1.0 / 9007199254740992.0); }
    double sym() { return 2.0 * uniform() - 1.0; }
};

Trajectory integrate_field(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                           Eigen::VectorXd x0, double dt, int steps, double blowup) {
    if (!(dt > 0) || steps < 1) throw std::invalid_argument("integrate: dt > 0 and steps >= 1 required");
    if (!x0.allFinite()) throw std::invalid_argument("integrate: non-finite initial state");
    Trajectory tr;
    tr.dt = dt;
    tr.steps = steps;
    tr.times.reserve(steps + 1);
    tr.states.reserve(steps + 1);
    tr.times.push_back(0);
    tr.states.push_back(x0);
    Eigen::VectorXd x = std::move(x0);
    for (int s = 1; s <= steps; ++s) {
        Eigen::VectorXd k1 = f(x);
        Eigen::VectorXd k2 = f(x + 0.5 * dt * k1);
        Eigen::VectorXd k3 = f(x + 0.5 * dt * k2);
        Eigen::VectorXd k4 = f(x + dt * k3);
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!x.allFinite() || x.cwiseAbs().maxCoeff() > blowup) {
            tr.blew_up = true;
            break;
        }
        tr.times.push_back(s * dt);
        tr.states.push_back(x);
    }
    return tr;
}

// Initial condition inside Delta_P: one random value per part, counterparts
// negated, zero part zeroed, whole vector scaled into the unit half-ball.
Eigen::VectorXd draw_in_polydiagonal(const TaggedPartition& P, Rng& rng, double scale) {
    const int n = P.size(), p = P.num_parts();
    std::vector<double> c(p + 1, 0.0);
    if (p > 0) {
        double maxabs = 0;
        do {
            maxabs = 0;
            for (int k = 1; k <= p; ++k) {
                c[k] = 0.5 * rng.sym();
                maxabs = std::max(maxabs, std::abs(c[k]));
            }
        } while (maxabs < 0.05);
    }
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) {
        int l = P.labels()[i];
        x(i) = l == 0 ? 0.0 : (l > 0 ? c[l] : -c[-l]);
    }
    double nrm = x.norm();
    if (nrm > 0.5) x *= 0.5 / nrm;
    return x * scale;
}

}  // namespace

double Poly2::operator()(double x, double y) const {
    double acc = 0;
    double xp = 1;
    for (Eigen::Index a = 0; a < coeff.rows(); ++a) {
        double yp = 1;
        for (Eigen::Index b = 0; b < coeff.cols(); ++b) {
            acc += coeff(a, b) * xp * yp;
            yp *= y;
        }
        xp *= x;
    }
    return acc;
}

double Poly1::operator()(double x) const {
    double acc = 0;
    for (size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
}

double SystemSpec::h(double x, double y) const {
    switch (cls) {
        case SystemClass::IG: return hpoly(x, y);
        case SystemClass::IG0: return (x - y) * hpoly(x, y);
        case SystemClass::IGodd: return (x - y) * hpoly(x * x, y * y);
        case SystemClass::IGl: return beta * (x - y);
        case SystemClass::IGeo: return y * hpoly(x * x, y * y);
    }
    return 0;
}

SystemSpec sample_system(const Network& net, SystemClass cls, std::uint64_t seed, int degree_bound) {
    if (degree_bound < 1) throw std::invalid_argument("sample_system: degree_bound >= 1 required");
    Rng rng(seed, 0x67e55044, static_cast<std::uint64_t>(cls));
    SystemSpec sys;
    sys.weights = to_double(net.W);
    sys.cls = cls;
    sys.seed = seed;

    const bool g_odd = cls == SystemClass::IGodd || cls == SystemClass::IGl || cls == SystemClass::IGeo;
    sys.g.c.assign(degree_bound + 1, 0.0);
    for (int k = 0; k <= degree_bound; ++k) {
        double v = rng.sym();
        if (!g_odd || k % 2 == 1) sys.g.c[k] = v;
    }

    // h-factor degree so that deg h <= degree_bound
    int hdeg = 0;
    switch (cls) {
        case SystemClass::IG: hdeg = degree_bound; break;
        case SystemClass::IG0: hdeg = degree_bound - 1; break;
        case SystemClass::IGodd:
        case SystemClass::IGeo: hdeg = (degree_bound - 1) / 2; break;
        case SystemClass::IGl: hdeg = 0; break;
    }
    hdeg = std::max(hdeg, 0);
    sys.hpoly.coeff = Eigen::MatrixXd::Zero(hdeg + 1, hdeg + 1);
    for (int a = 0; a <= hdeg; ++a)
        for (int b = 0; b <= hdeg; ++b) {
            double v = rng.sym();
            if (a + b <= hdeg) sys.hpoly.coeff(a, b) = v;
        }
    sys.beta = rng.sym();
    return sys;
}

SystemSpec sample_linear_system(const Network& net, SystemClass cls, std::uint64_t seed) {
    Rng rng(seed, 0x9ab37e1f, static_cast<std::uint64_t>(cls));
    SystemSpec sys;
    sys.weights = to_double(net.W);
    sys.cls = cls;
    sys.seed = seed;
    sys.g.c = {0.0, rng.sym()};  // g(x) = alpha x
    double b = rng.sym();
    switch (cls) {
        case SystemClass::IG: {
            // linear coupling h(x,y) = b*y keeps the field in <id, W>
            sys.hpoly.coeff = Eigen::MatrixXd::Zero(2, 2);
            sys.hpoly.coeff(0, 1) = b;
            break;
        }
        case SystemClass::IG0: {
            sys.hpoly.coeff = Eigen::MatrixXd::Constant(1, 1, b);  // h1 = b
            break;
        }
        case SystemClass::IGodd:
        case SystemClass::IGeo: {
            sys.hpoly.coeff = Eigen::MatrixXd::Constant(1, 1, b);  // m = b
            break;
        }
        case SystemClass::IGl: break;
    }
    sys.beta = b;
    return sys;
}

Eigen::VectorXd vector_field(const SystemSpec& sys, const Eigen::VectorXd& x) {
    if (!x.allFinite()) throw std::invalid_argument("vector_field: non-finite input");
    const Eigen::Index n = sys.weights.rows();
    if (x.size() != n) throw std::invalid_argument("vector_field: state size mismatch");
    Eigen::VectorXd f(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double acc = sys.g(x(j));
        for (Eigen::Index i = 0; i < n; ++i) {
            double w = sys.weights(j, i);
            if (w != 0) acc += w * sys.h(x(j), x(i));
        }
        f(j) = acc;
    }
    return f;
}

Trajectory integrate(const SystemSpec& sys, Eigen::VectorXd x0, double dt, int steps,
                     double blowup_bound) {
    return integrate_field([&](const Eigen::VectorXd& x) { return vector_field(sys, x); },
                           std::move(x0), dt, steps, blowup_bound);
}

double constraint_residual(const Eigen::VectorXd& x, const TaggedPartition& P) {
    double worst = 0;
    std::vector<double> rep(P.num_parts() + 1, 0.0);
    std::vector<bool> seen(P.num_parts() + 1, false);
    for (int i = 0; i < P.size(); ++i) {
        int l = P.labels()[i];
        if (l == 0) {
            worst = std::max(worst, std::abs(x(i)));
            continue;
        }
        int k = std::abs(l);
        if (!seen[k]) {
            seen[k] = true;
            rep[k] = l > 0 ? x(i) : -x(i);
            continue;
        }
        double expect = l > 0 ? rep[k] : -rep[k];
        worst = std::max(worst, std::abs(x(i) - expect));
    }
    return worst;
}

InvarianceCertificate certify_flow_invariance(const Network& net, const TaggedPartition& P,
                                              SystemClass cls, int trials, double horizon, double tol,
                                              double dt, std::uint64_t seed, int jobs) {
    if (trials < 1) throw std::invalid_argument("certify_flow_invariance: trials >= 1 required");
    const int steps = std::max(1, static_cast<int>(std::llround(horizon / dt)));
    InvarianceCertificate cert;
    cert.tol = tol;
    cert.per_trial_residual.assign(trials, 0.0);
    std::vector<int> redraws(trials, 0);

    auto run_trial = [&](int t) {
        SystemSpec sys = sample_system(net, cls, seed + static_cast<std::uint64_t>(t));
        double scale = 1.0;
        double residual = 0;
        for (int attempt = 0; attempt <= 3; ++attempt) {
            Rng rng(seed, 0x51ed270b + static_cast<std::uint64_t>(t), attempt);
            Eigen::VectorXd x0 = draw_in_polydiagonal(P, rng, scale);
            Trajectory tr = integrate(sys, x0, dt, steps);
            residual = 0;
            for (const auto& x : tr.states) residual = std::max(residual, constraint_residual(x, P));
            if (!tr.blew_up) break;
            ++redraws[t];
            scale *= 0.5;
        }
        cert.per_trial_residual[t] = residual;
    };

    jobs = std::max(1, std::min(jobs, trials));
    if (jobs == 1) {
        for (int t = 0; t < trials; ++t) run_trial(t);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) run_trial(t);
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (int r : redraws) cert.blowup_redraws += r;
    cert.pass = true;
    for (double r : cert.per_trial_residual)
        if (!(r <= tol)) cert.pass = false;
    return cert;
}

FalsificationResult falsify_flow_invariance(const Network& net, const TaggedPartition& P,
                                            SystemClass cls, int samples, double horizon,
                                            double threshold, double dt, std::uint64_t seed) {
    const int steps = std::max(1, static_cast<int>(std::llround(horizon / dt)));
    FalsificationResult res;
    for (int s = 0; s < samples; ++s) {
        ++res.samples;
        SystemSpec sys = sample_system(net, cls, seed + 1000003ull * s);
        Rng rng(seed, 0x7b1fa3c5 + static_cast<std::uint64_t>(s), 0);
        Eigen::VectorXd x0 = draw_in_polydiagonal(P, rng, 1.0);
        Trajectory tr = integrate(sys, x0, dt, steps);
        for (const auto& x : tr.states)
            res.max_residual = std::max(res.max_residual, constraint_residual(x, P));
        if (res.max_residual > threshold) {
            res.falsified = true;
            break;
        }
    }
    return res;
}

namespace {

QuotientKind kind_for_class(SystemClass cls) {
    switch (cls) {
        case SystemClass::IG: return QuotientKind::balanced;
        case SystemClass::IG0: return QuotientKind::exo;
        case SystemClass::IGodd: return QuotientKind::odd_symbolic;
        case SystemClass::IGl: return QuotientKind::linear_symbolic;
        case SystemClass::IGeo: return QuotientKind::eo_symbolic;
    }
    throw std::invalid_argument("kind_for_class");
}

// Restricted equations on the p part coordinates for each class.
std::function<Eigen::VectorXd(const Eigen::VectorXd&)> quotient_field(const SystemSpec& sys,
                                                                      const QuotientNetwork& q) {
    Eigen::MatrixXd Q = to_double(q.matrix);
    int p = 0;
    for (auto t : q.cell_tags)
        if (t == CellTag::plus) ++p;
    const int qc = static_cast<int>(std::count(q.cell_tags.begin(), q.cell_tags.end(), CellTag::minus));
    const bool rz = std::count(q.cell_tags.begin(), q.cell_tags.end(), CellTag::zero) > 0;
    switch (q.kind) {
        case QuotientKind::balanced:
        case QuotientKind::exo:
            return [&sys, Q, p](const Eigen::VectorXd& y) {
                Eigen::VectorXd f(p);
                for (int j = 0; j < p; ++j) {
                    double acc = sys.g(y(j));
                    for (int i = 0; i < p; ++i)
                        if (Q(j, i) != 0) acc += Q(j, i) * sys.h(y(j), y(i));
                    f(j) = acc;
                }
                return f;
            };
        case QuotientKind::odd_symbolic:
            return [&sys, Q, p, qc, rz](const Eigen::VectorXd& y) {
                Eigen::VectorXd f(p);
                for (int j = 0; j < p; ++j) {
                    double acc = sys.g(y(j));
                    for (int i = 0; i < p; ++i)
                        if (i != j && Q(j, i) != 0) acc += Q(j, i) * sys.h(y(j), y(i));
                    for (int i = 0; i < qc; ++i)
                        if (Q(j, p + i) != 0) acc += Q(j, p + i) * sys.h(y(j), -y(i));
                    if (rz && Q(j, p + qc) != 0) acc += Q(j, p + qc) * sys.h(y(j), 0.0);
                    f(j) = acc;
                }
                return f;
            };
        case QuotientKind::linear_symbolic:
            return [&sys, Q, p](const Eigen::VectorXd& y) {
                Eigen::VectorXd f(p);
                for (int i = 0; i < p; ++i) {
                    double acc = sys.g(y(i));
                    for (int j = 0; j < p; ++j)
                        if (j != i && Q(i, j) != 0) acc += Q(i, j) * sys.h(y(j), 0.0);
                    acc += Q(i, p) * sys.h(y(i), 0.0);
                    f(i) = acc;
                }
                return f;
            };
        case QuotientKind::eo_symbolic:
            return [&sys, Q, p](const Eigen::VectorXd& y) {
                Eigen::VectorXd f(p);
                for (int i = 0; i < p; ++i) {
                    double acc = sys.g(y(i));
                    for (int j = 0; j < p; ++j)
                        if (Q(i, j) != 0) acc += Q(i, j) * sys.h(y(i), y(j));
                    f(i) = acc;
                }
                return f;
            };
    }
    throw std::invalid_argument("quotient_field");
}

}  // namespace

RestrictionReport restriction_consistency(const Network& net, const TaggedPartition& P, SystemClass cls,
                                          std::uint64_t seed, double dt, int steps, double tol) {
    QuotientNetwork q = make_quotient(net, P, kind_for_class(cls));  // throws on class mismatch
    auto D = block_decomposition(net.W, P);
    const int p = D.p;

    SystemSpec sys = sample_system(net, cls, seed);

    Rng rng(seed, 0x15ba93d7, 1);
    Eigen::VectorXd y0(p);
    for (int k = 0; k < p; ++k) y0(k) = 0.5 * rng.sym();

    std::vector<int> adapted_of_class(p + 1, 0);
    for (int k = 1; k <= p; ++k) adapted_of_class[D.class_order[k - 1]] = k;
    auto lift = [&](const Eigen::VectorXd& y) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(net.n);
        for (int i = 0; i < net.n; ++i) {
            int l = P.labels()[i];
            if (l == 0) continue;
            int k = adapted_of_class[std::abs(l)];
            x(i) = (l > 0 ? 1.0 : -1.0) * y(k - 1);
        }
        return x;
    };

    // Pull the initial condition towards the origin until the polynomial
    // flow survives the whole horizon. Exponential linear growth needs
    // exponentially small seeds, so allow many halvings; the comparison
    // stays meaningful at any nonzero scale.
    Trajectory full, red;
    for (int attempt = 0; attempt <= 60; ++attempt) {
        full = integrate(sys, lift(y0), dt, steps);
        if (full.blew_up) {
            y0 *= 0.5;
            continue;
        }
        red = integrate_field(quotient_field(sys, q), y0, dt, steps, 1e6);
        if (!red.blew_up) break;
        y0 *= 0.5;
    }

    RestrictionReport rep;
    rep.tol = tol;
    size_t common = std::min(full.states.size(), red.states.size());
    for (size_t s = 0; s < common; ++s) {
        const auto& x = full.states[s];
        const auto& y = red.states[s];
        for (int k = 1; k <= p; ++k) {
            int repc = D.permutation[D.part_range(k).first];
            rep.max_deviation = std::max(rep.max_deviation, std::abs(x(repc) - y(k - 1)));
        }
        for (int k = 1; k <= D.q; ++k) {
            int repc = D.permutation[D.counterpart_range(k).first];
            rep.max_deviation = std::max(rep.max_deviation, std::abs(x(repc) + y(k - 1)));
        }
        auto [zoff, zsz] = D.zero_range();
        for (int t = 0; t < zsz; ++t)
            rep.max_deviation = std::max(rep.max_deviation, std::abs(x(D.permutation[zoff + t])));
    }
    rep.pass = full.states.size() == red.states.size() && !full.blew_up && !red.blew_up &&
               rep.max_deviation <= tol;
    return rep;
}

SpanFit linear_span_check(const Network& net, SystemClass cls, std::uint64_t seed, double tol) {
    SystemSpec sys = sample_linear_system(net, cls, seed);
    const int n = net.n;
    Eigen::MatrixXd F(n, n);
    for (int j = 0; j < n; ++j) F.col(j) = vector_field(sys, Eigen::VectorXd::Unit(n, j));

    Eigen::MatrixXd B = cls == SystemClass::IGeo || cls == SystemClass::IG ? to_double(net.W)
                                                                           : to_double(laplacian(net));
    // least squares over span{I, B}
    double ii = n, ib = B.trace(), bb = B.squaredNorm();
    double fi = F.trace(), fb = (F.cwiseProduct(B)).sum();
    double det = ii * bb - ib * ib;
    SpanFit fit;
    if (std::abs(det) < 1e-14) {
        fit.beta = 0;
        fit.alpha = fi / ii;
    } else {
        fit.alpha = (fi * bb - fb * ib) / det;
        fit.beta = (ii * fb - ib * fi) / det;
    }
    fit.residual = (F - fit.alpha * Eigen::MatrixXd::Identity(n, n) - fit.beta * B).cwiseAbs().maxCoeff();
    fit.pass = fit.residual < tol;
    return fit;
}

}  // namespace polyd
