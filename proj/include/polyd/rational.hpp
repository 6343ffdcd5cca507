#pragma once

#include <gmpxx.h>

#include <Eigen/Core>
#include <compare>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace polyd {

/// Exact rational scalar, always in lowest terms with positive denominator.
/// Thin eager wrapper over mpq_class so it plugs into Eigen without gmpxx
/// expression templates leaking into scalar type deduction.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}
    Rational(long n) : v_(static_cast<long>(n)) {}
    Rational(long num, long den) : v_(num, den) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

    /// Accepts "3", "-3/2", "2.3" (decimals converted exactly, 2.3 -> 23/10).
    static Rational parse(std::string_view s);

    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }
    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }
    double to_double() const { return v_.get_d(); }

    /// Canonical text form: "3", "-3/2".
    std::string str() const;

    Rational operator-() const { Rational r; r.v_ = -v_; return r; }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

private:
    mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

std::ostream& operator<<(std::ostream& os, const Rational& r);

using RatMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RatVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

RatMatrix to_rational(const Eigen::MatrixXd& m);  // entries must be exactly representable
Eigen::MatrixXd to_double(const RatMatrix& m);
Eigen::VectorXd to_double(const RatVector& v);

}  // namespace polyd

namespace Eigen {
template <>
struct NumTraits<polyd::Rational> : GenericNumTraits<polyd::Rational> {
    using Real = polyd::Rational;
    using NonInteger = polyd::Rational;
    using Nested = polyd::Rational;
    static inline Real epsilon() { return polyd::Rational(0); }
    static inline Real dummy_precision() { return polyd::Rational(0); }
    static inline int digits10() { return 0; }
    enum {
        IsInteger = 0,
        IsSigned = 1,
        IsComplex = 0,
        RequireInitialization = 1,
        ReadCost = 6,
        AddCost = 150,
        MulCost = 100,
    };
};
}  // namespace Eigen
