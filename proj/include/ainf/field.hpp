#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ainf {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Coefficient field: the rationals (p == 0) or a prime field F_p.
struct Field {
    unsigned p = 0;

    bool is_rational() const { return p == 0; }
    bool operator==(const Field&) const = default;

    static bool is_prime(unsigned n) {
        if (n < 2) return false;
        for (unsigned d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    static Field rationals() { return Field{0}; }
    static Field prime(unsigned p) {
        if (!is_prime(p)) throw std::invalid_argument("Field::prime: " + std::to_string(p) + " is not prime");
        return Field{p};
    }

    std::string name() const { return p == 0 ? "q" : "f" + std::to_string(p); }
};

/// Exact field element.  Rationals are arbitrary-precision; F_p values are
/// kept as canonical representatives 0..p-1.
class Scalar {
public:
    Scalar() = default;
    Scalar(Field f, Rational v) : field_(f), v_(std::move(v)) { canonicalize(); }
    Scalar(Field f, long n) : field_(f), v_(n) { canonicalize(); }

    static Scalar zero(Field f) { return Scalar(f, 0); }
    static Scalar one(Field f) { return Scalar(f, 1); }

    const Field& field() const { return field_; }
    const Rational& value() const { return v_; }
    bool is_zero() const { return v_ == 0; }

    Scalar operator-() const { return Scalar(field_, -v_); }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        a.check(b);
        return Scalar(a.field_, a.v_ + b.v_);
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        a.check(b);
        return Scalar(a.field_, a.v_ - b.v_);
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        a.check(b);
        return Scalar(a.field_, a.v_ * b.v_);
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        a.check(b);
        if (b.is_zero()) throw std::domain_error("Scalar: division by zero");
        if (a.field_.is_rational()) return Scalar(a.field_, a.v_ / b.v_);
        return a * b.inverse();
    }

    Scalar inverse() const {
        if (is_zero()) throw std::domain_error("Scalar: inverse of zero");
        if (field_.is_rational()) return Scalar(field_, Rational(1) / v_);
        // extended Euclid on the canonical representative
        long long r = (long long)numerator_ll(), m = field_.p;
        long long t0 = 0, t1 = 1, r0 = m, r1 = r;
        while (r1 != 0) {
            long long q = r0 / r1;
            long long tmp = r0 - q * r1; r0 = r1; r1 = tmp;
            tmp = t0 - q * t1; t0 = t1; t1 = tmp;
        }
        long long inv = ((t0 % m) + m) % m;
        return Scalar(field_, inv);
    }

    Scalar& operator+=(const Scalar& b) { *this = *this + b; return *this; }
    Scalar& operator-=(const Scalar& b) { *this = *this - b; return *this; }
    Scalar& operator*=(const Scalar& b) { *this = *this * b; return *this; }

    bool operator==(const Scalar& b) const { return field_ == b.field_ && v_ == b.v_; }
    bool operator!=(const Scalar& b) const { return !(*this == b); }

    std::string str() const { return v_.str(); }

private:
    Field field_{};
    Rational v_{0};

    long long numerator_ll() const { return (long long)boost::multiprecision::numerator(v_); }

    void check(const Scalar& b) const {
        if (!(field_ == b.field_)) throw std::invalid_argument("Scalar: mixed fields");
    }

    void canonicalize() {
        if (field_.is_rational()) return;
        BigInt num = boost::multiprecision::numerator(v_);
        BigInt den = boost::multiprecision::denominator(v_);
        BigInt p = field_.p;
        BigInt dm = den % p;
        if (dm == 0) throw std::domain_error("Scalar: denominator divisible by p");
        BigInt nm = ((num % p) + p) % p;
        if (dm != 1) {
            Scalar inv = Scalar(field_, Rational(((dm % p) + p) % p)).inverse();
            nm = (nm * boost::multiprecision::numerator(inv.v_)) % p;
        }
        v_ = Rational(nm);
    }
};

}  // namespace ainf
