#pragma once

#include <gmpxx.h>

#include <string>

namespace fixpoint {

//! Arbitrary-precision rational, always in lowest terms with positive
//! denominator. Comparisons are exact (cross-multiplication inside GMP);
//! nothing here ever rounds.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long long num, long long den = 1);
    // Exact-match overloads so integer literals are not ambiguous against
    // the double constructor.
    Rational(int num) : Rational(static_cast<long long>(num)) {}
    Rational(long num) : Rational(static_cast<long long>(num)) {}
    //! Exact binary expansion of the double; no decimal reinterpretation.
    explicit Rational(double value);
    explicit Rational(const mpq_class& v);

    //! Parses "a/b", integers, and decimal/scientific literals ("2.5e-3")
    //! exactly. Decimal literals become num/10^k, not binary doubles.
    static Rational from_string(const std::string& text);
    //! 2^exponent; exponent may be negative.
    static Rational pow2(long exponent);

    Rational operator-() const;
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    bool operator==(const Rational& o) const { return v_ == o.v_; }
    bool operator!=(const Rational& o) const { return v_ != o.v_; }
    bool operator<(const Rational& o) const { return v_ < o.v_; }
    bool operator<=(const Rational& o) const { return v_ <= o.v_; }
    bool operator>(const Rational& o) const { return v_ > o.v_; }
    bool operator>=(const Rational& o) const { return v_ >= o.v_; }

    Rational abs() const;
    Rational pow(unsigned long exponent) const;

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const;
    //! floor as a machine integer; throws InvalidInput when out of range.
    long long floor_ll() const;

    //! Canonical "num" or "num/den" string.
    std::string str() const;
    std::string numerator_str() const;
    std::string denominator_str() const;
    //! Nearest double; for display only, never for comparisons.
    double to_double() const;

    const mpq_class& raw() const { return v_; }

private:
    mpq_class v_;
};

}  // namespace fixpoint
