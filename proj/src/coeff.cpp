#include "kolchin/coeff.hpp"

namespace kolchin {

void Coeff::assign_int(const Int& n) {
    if (dom_.p) {
        Int p(dom_.p);
        res_ = n % p;
        if (res_ < 0) res_ += p;
    } else {
        q_ = Rat(n);
    }
}

Coeff::Coeff(CoeffDomain d, const Rat& q) : dom_(d) {
    if (dom_.p == 0) {
        q_ = q;
    } else {
        // n/d mod p: the denominator must be a unit.
        Coeff num(d, numerator(q));
        Coeff den(d, denominator(q));
        *this = num / den;
    }
}

Coeff Coeff::operator+(const Coeff& o) const {
    check(o);
    Coeff r(*this);
    if (dom_.p) {
        r.res_ += o.res_;
        if (r.res_ >= dom_.p) r.res_ -= dom_.p;
    } else {
        r.q_ += o.q_;
    }
    return r;
}

Coeff Coeff::operator-(const Coeff& o) const { return *this + (-o); }

Coeff Coeff::operator-() const {
    Coeff r(*this);
    if (dom_.p) {
        if (r.res_ != 0) r.res_ = Int(dom_.p) - r.res_;
    } else {
        r.q_ = -r.q_;
    }
    return r;
}

Coeff Coeff::operator*(const Coeff& o) const {
    check(o);
    Coeff r(*this);
    if (dom_.p)
        r.res_ = (res_ * o.res_) % Int(dom_.p);
    else
        r.q_ *= o.q_;
    return r;
}

Coeff Coeff::inv() const {
    if (is_zero()) throw std::domain_error("division by zero coefficient");
    Coeff r(*this);
    if (dom_.p) {
        // extended Euclid mod p
        Int t = 0, nt = 1, a = Int(dom_.p), b = res_;
        while (b != 0) {
            Int q = a / b;
            Int tmp = t - q * nt;
            t = nt;
            nt = tmp;
            tmp = a - q * b;
            a = b;
            b = tmp;
        }
        if (t < 0) t += Int(dom_.p);
        r.res_ = t;
    } else {
        r.q_ = Rat(1) / q_;
    }
    return r;
}

bool Coeff::operator==(const Coeff& o) const {
    if (dom_ != o.dom_) return false;
    return dom_.p ? res_ == o.res_ : q_ == o.q_;
}

Coeff Coeff::pth_root() const {
    if (!dom_.p) throw std::domain_error("pth_root needs characteristic p > 0");
    return *this;
}

std::string Coeff::to_string() const {
    if (dom_.p) return res_.str();
    if (denominator(q_) == 1) return numerator(q_).str();
    return numerator(q_).str() + "/" + denominator(q_).str();
}

}  // namespace kolchin
