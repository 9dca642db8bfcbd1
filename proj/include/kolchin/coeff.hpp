#ifndef KOLCHIN_COEFF_HPP
#define KOLCHIN_COEFF_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace kolchin {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Base coefficient domain: the rationals (p == 0) or a prime field F_p.
struct CoeffDomain {
    std::uint64_t p = 0;  // 0 means characteristic zero

    bool operator==(const CoeffDomain&) const = default;
    bool is_prime_field() const { return p != 0; }
    std::string to_string() const { return p ? "F" + std::to_string(p) : "Q"; }
};

/// Element of a CoeffDomain. In characteristic p the value is the residue
/// in [0, p); in characteristic 0 it is an arbitrary-precision fraction in
/// lowest terms (cpp_rational keeps that invariant).
class Coeff {
  public:
    Coeff() = default;
    Coeff(CoeffDomain d, const Int& n) : dom_(d) { assign_int(n); }
    Coeff(CoeffDomain d, const Rat& q);
    static Coeff zero(CoeffDomain d) { return Coeff(d, Int(0)); }
    static Coeff one(CoeffDomain d) { return Coeff(d, Int(1)); }

    const CoeffDomain& domain() const { return dom_; }
    bool is_zero() const { return dom_.p ? res_ == 0 : q_ == 0; }
    bool is_one() const { return dom_.p ? res_ == 1 : q_ == 1; }

    Coeff operator+(const Coeff& o) const;
    Coeff operator-(const Coeff& o) const;
    Coeff operator*(const Coeff& o) const;
    Coeff operator-() const;
    Coeff inv() const;  // throws on zero
    Coeff operator/(const Coeff& o) const { return *this * o.inv(); }
    bool operator==(const Coeff& o) const;
    bool operator!=(const Coeff& o) const { return !(*this == o); }

    /// Multiply by a plain integer (exponents in derivative rules etc.).
    Coeff times_int(const Int& k) const { return *this * Coeff(dom_, k); }

    /// The residue (char p) or fraction (char 0).
    const Int& residue() const { return res_; }
    const Rat& rational() const { return q_; }

    /// In F_p the Frobenius is the identity, so every element is its own
    /// p-th root.
    Coeff pth_root() const;

    std::string to_string() const;

  private:
    void assign_int(const Int& n);
    void check(const Coeff& o) const {
        if (dom_ != o.dom_) throw std::invalid_argument("coefficient domain mismatch");
    }

    CoeffDomain dom_;
    Rat q_;    // char 0
    Int res_;  // char p, in [0, p)
};

}  // namespace kolchin

#endif
