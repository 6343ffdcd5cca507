#include "polyd/rational.hpp"

#include <cctype>
#include <ostream>

namespace polyd {

namespace {

bool valid_integer(std::string_view s) {
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational Rational::parse(std::string_view s) {
    // trim surrounding whitespace
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw std::invalid_argument("Rational::parse: empty string");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash);
        std::string_view den = s.substr(slash + 1);
        if (!valid_integer(num) || !valid_integer(den))
            throw std::invalid_argument("Rational::parse: bad fraction '" + std::string(s) + "'");
        mpz_class numz{std::string(num)};
        mpz_class denz{std::string(den)};
        if (denz == 0) throw std::invalid_argument("Rational::parse: zero denominator");
        mpq_class q{numz, denz};
        return Rational(q);
    }

    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot);
        std::string_view fp = s.substr(dot + 1);
        bool neg = !ip.empty() && ip[0] == '-';
        if (!ip.empty() && (ip[0] == '+' || ip[0] == '-')) ip.remove_prefix(1);
        if (ip.empty() && fp.empty())
            throw std::invalid_argument("Rational::parse: bad decimal '" + std::string(s) + "'");
        if ((!ip.empty() && !valid_integer(ip)) || (!fp.empty() && !valid_integer(fp)))
            throw std::invalid_argument("Rational::parse: bad decimal '" + std::string(s) + "'");
        mpz_class whole = ip.empty() ? mpz_class(0) : mpz_class{std::string(ip)};
        mpz_class frac = fp.empty() ? mpz_class(0) : mpz_class{std::string(fp)};
        mpz_class den(1);
        for (size_t i = 0; i < fp.size(); ++i) den *= 10;
        mpq_class q(whole * den + frac, den);
        if (neg) q = -q;
        return Rational(q);
    }

    if (!valid_integer(s))
        throw std::invalid_argument("Rational::parse: bad number '" + std::string(s) + "'");
    return Rational(mpq_class{mpz_class{std::string(s)}});
}

std::string Rational::str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

RatMatrix to_rational(const Eigen::MatrixXd& m) {
    RatMatrix r(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            mpq_class q(m(i, j));  // exact binary-to-rational conversion
            r(i, j) = Rational(q);
        }
    return r;
}

Eigen::MatrixXd to_double(const RatMatrix& m) {
    Eigen::MatrixXd r(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).to_double();
    return r;
}

Eigen::VectorXd to_double(const RatVector& v) {
    Eigen::VectorXd r(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) r(i) = v(i).to_double();
    return r;
}

}  // namespace polyd
