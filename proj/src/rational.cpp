#include "fixpoint/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstddef>
#include <string>

#include "fixpoint/errors.hpp"

namespace fixpoint {

namespace {

// LP64 assumption keeps the long long API lossless over gmpxx's long-based
// constructors.
static_assert(sizeof(long) == sizeof(long long), "requires an LP64 platform");

[[noreturn]] void bad_literal(const std::string& text) {
    throw InvalidInput("not a rational literal: '" + text + "'");
}

mpz_class pow10_z(unsigned long k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10u, k);
    return r;
}

std::string trimmed(const std::string& text) {
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    return text.substr(b, e - b);
}

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

// Optional sign followed by digits.
bool parse_integer_literal(const std::string& s, bool& negative, std::string& digits) {
    std::size_t i = 0;
    negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        negative = (s[i] == '-');
        ++i;
    }
    digits = s.substr(i);
    return all_digits(digits);
}

}  // namespace

Rational::Rational(long long num, long long den) {
    if (den == 0) throw InvalidInput("rational denominator must be nonzero");
    mpz_class n(static_cast<long>(num));
    mpz_class d(static_cast<long>(den));
    v_ = mpq_class(n, d);
    v_.canonicalize();
}

Rational::Rational(double value) {
    if (!std::isfinite(value)) throw InvalidInput("rational from non-finite double");
    v_ = mpq_class(value);
}

Rational::Rational(const mpq_class& v) : v_(v) {
    v_.canonicalize();
}

Rational Rational::from_string(const std::string& text) {
    const std::string s = trimmed(text);
    if (s.empty()) bad_literal(text);

    const std::size_t slash = s.find('/');
    if (slash != std::string::npos) {
        if (s.find('/', slash + 1) != std::string::npos) bad_literal(text);
        bool nneg = false;
        bool dneg = false;
        std::string ndig;
        std::string ddig;
        if (!parse_integer_literal(trimmed(s.substr(0, slash)), nneg, ndig)) bad_literal(text);
        if (!parse_integer_literal(trimmed(s.substr(slash + 1)), dneg, ddig)) bad_literal(text);
        mpz_class n(ndig, 10);
        mpz_class d(ddig, 10);
        if (d == 0) throw InvalidInput("rational denominator must be nonzero");
        if (nneg) n = -n;
        if (dneg) d = -d;
        Rational r;
        r.v_ = mpq_class(n, d);
        r.v_.canonicalize();
        return r;
    }

    // Decimal or scientific literal, parsed in base ten so "1e-3" means
    // exactly 1/1000.
    std::size_t i = 0;
    bool negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        negative = (s[i] == '-');
        ++i;
    }
    std::string int_digits;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        int_digits += s[i++];
    }
    std::string frac_digits;
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            frac_digits += s[i++];
        }
    }
    if (int_digits.empty() && frac_digits.empty()) bad_literal(text);

    long exponent = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            eneg = (s[i] == '-');
            ++i;
        }
        std::string edig;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            edig += s[i++];
        }
        if (edig.empty() || edig.size() > 6) bad_literal(text);
        exponent = std::stol(edig);
        if (eneg) exponent = -exponent;
    }
    if (i != s.size()) bad_literal(text);

    mpz_class mantissa(int_digits.empty() && frac_digits.empty() ? "0" : int_digits + frac_digits,
                       10);
    if (negative) mantissa = -mantissa;
    const long total_exp = exponent - static_cast<long>(frac_digits.size());

    Rational r;
    if (total_exp >= 0) {
        r.v_ = mpq_class(mantissa * pow10_z(static_cast<unsigned long>(total_exp)));
    } else {
        r.v_ = mpq_class(mantissa, pow10_z(static_cast<unsigned long>(-total_exp)));
    }
    r.v_.canonicalize();
    return r;
}

Rational Rational::pow2(long exponent) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2u,
                  static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    Rational r;
    r.v_ = exponent < 0 ? mpq_class(mpz_class(1), p) : mpq_class(p);
    r.v_.canonicalize();
    return r;
}

Rational Rational::operator-() const {
    Rational r;
    r.v_ = -v_;
    return r;
}

Rational Rational::operator+(const Rational& o) const {
    Rational r;
    r.v_ = v_ + o.v_;
    return r;
}

Rational Rational::operator-(const Rational& o) const {
    Rational r;
    r.v_ = v_ - o.v_;
    return r;
}

Rational Rational::operator*(const Rational& o) const {
    Rational r;
    r.v_ = v_ * o.v_;
    return r;
}

Rational Rational::operator/(const Rational& o) const {
    if (o.v_ == 0) throw InvalidInput("rational division by zero");
    Rational r;
    r.v_ = v_ / o.v_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    v_ += o.v_;
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    v_ -= o.v_;
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    v_ *= o.v_;
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.v_ == 0) throw InvalidInput("rational division by zero");
    v_ /= o.v_;
    return *this;
}

Rational Rational::abs() const {
    Rational r;
    r.v_ = ::abs(v_);
    return r;
}

Rational Rational::pow(unsigned long exponent) const {
    mpz_class n;
    mpz_class d;
    mpz_pow_ui(n.get_mpz_t(), v_.get_num().get_mpz_t(), exponent);
    mpz_pow_ui(d.get_mpz_t(), v_.get_den().get_mpz_t(), exponent);
    Rational r;
    r.v_ = mpq_class(n, d);
    r.v_.canonicalize();
    return r;
}

bool Rational::is_integer() const {
    return v_.get_den() == 1;
}

long long Rational::floor_ll() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    if (!q.fits_slong_p()) throw InvalidInput("rational floor out of machine range");
    return q.get_si();
}

std::string Rational::str() const {
    return v_.get_str();
}

std::string Rational::numerator_str() const {
    return v_.get_num().get_str();
}

std::string Rational::denominator_str() const {
    return v_.get_den().get_str();
}

double Rational::to_double() const {
    return v_.get_d();
}

}  // namespace fixpoint
