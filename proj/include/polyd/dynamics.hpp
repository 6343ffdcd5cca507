#pragma once

#include <cstdint>
#include <vector>

#include "polyd/invariance.hpp"
#include "polyd/network.hpp"
#include "polyd/partition.hpp"
#include "polyd/quotient.hpp"

namespace polyd {

/// Dense bivariate polynomial, coeff(a,b) multiplying x^a y^b.
struct Poly2 {
    Eigen::MatrixXd coeff;  // (deg+1) x (deg+1)
    double operator()(double x, double y) const;
};

/// Univariate polynomial, c[k] multiplying x^k.
struct Poly1 {
    std::vector<double> c;
    double operator()(double x) const;
};

/// Input-additive coupled cell system with one-dimensional cell phase space:
///   xdot_j = g(x_j) + sum_i w_ji h(x_j, x_i).
/// The stored data pins the class-appropriate form of h:
///   IG            h(x,y) arbitrary polynomial
///   IG0           h = (x-y) * h1(x,y)
///   IGodd         h = (x-y) * m(x^2,y^2),   g odd
///   IGl           h = beta*(x-y),           g odd
///   IGeo          h = y * m(x^2,y^2),       g odd
struct SystemSpec {
    Eigen::MatrixXd weights;  // adjacency as doubles
    SystemClass cls = SystemClass::IG;
    std::uint64_t seed = 0;
    Poly1 g;
    Poly2 hpoly;  // h itself (IG), h1 (IG0), or m (IGodd/IGeo); unused for IGl
    double beta = 0;

    double h(double x, double y) const;
};

SystemSpec sample_system(const Network& net, SystemClass cls, std::uint64_t seed, int degree_bound = 3);

/// Same coefficients but only the degree-one parts: g(x) = alpha x and the
/// linear form of h admitted by the class. Used by the span checks.
SystemSpec sample_linear_system(const Network& net, SystemClass cls, std::uint64_t seed);

Eigen::VectorXd vector_field(const SystemSpec& sys, const Eigen::VectorXd& x);

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    double dt = 0;
    int steps = 0;
    bool blew_up = false;
};

/// Classical fixed-step fourth-order Runge-Kutta. Deterministic; stops early
/// with blew_up set when the state leaves the blow-up bound.
Trajectory integrate(const SystemSpec& sys, Eigen::VectorXd x0, double dt, int steps,
                     double blowup_bound = 1e6);

/// Max over the polydiagonal's defining constraints of |x_i - x_rep|,
/// |x_j + x_rep| and |x_z| at a single state.
double constraint_residual(const Eigen::VectorXd& x, const TaggedPartition& P);

struct InvarianceCertificate {
    bool pass = false;
    double tol = 0;
    std::vector<double> per_trial_residual;
    int blowup_redraws = 0;
};

/// Integrates `trials` sampled systems of the class from random initial
/// conditions inside Delta_P and records the worst constraint residual along
/// each trajectory. Blown-up trials are redrawn closer to the origin, at
/// most three times. Trials are independent; `jobs` > 1 runs them on worker
/// threads with the same per-trial seeding.
InvarianceCertificate certify_flow_invariance(const Network& net, const TaggedPartition& P,
                                              SystemClass cls, int trials, double horizon, double tol,
                                              double dt = 1e-3, std::uint64_t seed = 2024,
                                              int jobs = 1);

struct FalsificationResult {
    bool falsified = false;      // some sampled system pushed the flow off Delta_P
    double max_residual = 0;
    int samples = 0;
};

/// Genericity check for the converse direction: samples up to `samples`
/// systems and reports whether one exceeds the escape threshold.
FalsificationResult falsify_flow_invariance(const Network& net, const TaggedPartition& P,
                                            SystemClass cls, int samples, double horizon,
                                            double threshold = 1e-3, double dt = 1e-3,
                                            std::uint64_t seed = 2024);

struct RestrictionReport {
    bool pass = false;
    double max_deviation = 0;
    double tol = 0;
};

/// Integrates the full system from a lift of y0 and the class-matching
/// quotient system from y0, then compares part representatives step by step.
RestrictionReport restriction_consistency(const Network& net, const TaggedPartition& P, SystemClass cls,
                                          std::uint64_t seed, double dt, int steps, double tol);

struct SpanFit {
    double alpha = 0, beta = 0;
    double residual = 0;  // max-norm of F - (alpha I + beta B)
    bool pass = false;
};

/// Fits the field matrix of a sampled linear class member against
/// alpha*id + beta*B, where B is the Laplacian for IG0/IGodd/IGl and the
/// adjacency matrix for IGeo (and either for IG on regular networks).
SpanFit linear_span_check(const Network& net, SystemClass cls, std::uint64_t seed = 7,
                          double tol = 1e-12);

}  // namespace polyd
