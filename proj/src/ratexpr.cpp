#include "kolchin/ratexpr.hpp"

namespace kolchin {

RatExpr::RatExpr(MPoly n, MPoly d) {
    if (d.is_zero()) throw std::domain_error("zero denominator polynomial");
    auto [nn, dd] = unify(n, d);
    num_ = std::move(nn);
    den_ = std::move(dd);
}

RatExpr::RatExpr(MPoly n)
    : num_(std::move(n)), den_(MPoly::constant(num_.domain(), num_.ctx(), Coeff::one(num_.domain()))) {}

RatExpr RatExpr::operator+(const RatExpr& o) const {
    return RatExpr(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatExpr RatExpr::operator-(const RatExpr& o) const {
    return RatExpr(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RatExpr RatExpr::operator*(const RatExpr& o) const { return RatExpr(num_ * o.num_, den_ * o.den_); }

RatExpr RatExpr::operator/(const RatExpr& o) const {
    if (o.num_.is_zero()) throw std::domain_error("division by zero expression");
    return RatExpr(num_ * o.den_, den_ * o.num_);
}

RatExpr RatExpr::operator-() const {
    RatExpr r(*this);
    r.num_ = -r.num_;
    return r;
}

RatExpr RatExpr::pow(std::uint32_t k) const {
    RatExpr r = RatExpr(MPoly::constant(domain(), num_.ctx(), Coeff::one(domain())));
    RatExpr base = *this;
    while (k) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

bool RatExpr::same_value(const RatExpr& o) const { return num_ * o.den_ == o.num_ * den_; }

std::string RatExpr::to_string() const {
    if (den_.is_constant() && den_.constant_value().is_one()) return num_.to_string();
    std::string n = num_.to_string(), d = den_.to_string();
    bool np = num_.terms().size() > 1;
    bool dp = den_.terms().size() > 1 || !den_.is_constant();
    return (np ? "(" + n + ")" : n) + "/" + (dp ? "(" + d + ")" : d);
}

RatExpr substitute(const MPoly& f, const std::function<std::optional<RatExpr>(const std::string&)>& image,
                   CoeffDomain dom, const VarCtx& ctx) {
    RatExpr acc(MPoly(dom, ctx));
    const VarList& vars = f.vars();
    for (const auto& [e, c] : f.terms()) {
        RatExpr term(MPoly::constant(dom, ctx, c));
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            auto img = image(vars[i]);
            RatExpr base = img ? img->in_ctx(ctx) : RatExpr(MPoly::variable(dom, ctx, vars[i]));
            term = term * base.pow(e[i]);
        }
        acc = acc + term;
    }
    return acc;
}

RatExpr substitute(const RatExpr& f, const std::function<std::optional<RatExpr>(const std::string&)>& image,
                   CoeffDomain dom, const VarCtx& ctx) {
    RatExpr n = substitute(f.num(), image, dom, ctx);
    RatExpr d = substitute(f.den(), image, dom, ctx);
    if (d.is_zero()) throw std::domain_error("substitution maps denominator to zero");
    return n / d;
}

std::pair<RatExpr, RatExpr> divrem_in_var(const MPoly& a, const MPoly& b, const std::string& v) {
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    auto [au, bu] = unify(a, b);
    std::uint32_t db = bu.degree_in(v);
    auto bview = bu.univariate_view(v);
    RatExpr lc(bview.at(db));
    MPoly x = bu.var_index(v) >= 0 ? MPoly::variable(bu.domain(), bu.ctx(), v)
                                   : MPoly::variable(au.domain(), au.ctx(), v);

    RatExpr q(MPoly(au.domain(), au.ctx()));
    RatExpr r(au);
    // classic long division; coefficients live in the fraction field of the
    // remaining variables
    while (!r.is_zero()) {
        // degree of r in v (r.num holds all v-dependence; den is v-free only
        // if inputs were, so track on the numerator relative to denominator)
        std::uint32_t dr = r.num().degree_in(v);
        if (r.den().degree_in(v) != 0) throw std::logic_error("divrem_in_var: denominator gained " + v);
        if (dr < db) break;
        auto rview = r.num().univariate_view(v);
        auto it = rview.find(dr);
        RatExpr lead = RatExpr(it->second) / RatExpr(r.den());
        RatExpr factor = lead / lc;
        RatExpr shift = factor * RatExpr(x.pow(dr - db));
        q = q + shift;
        r = r - shift * RatExpr(bu);
        // cancellation of the leading term is exact; guard anyway
        if (!r.is_zero() && r.num().degree_in(v) >= dr && r.den().degree_in(v) == 0) {
            auto chk = r.num().univariate_view(v);
            if (chk.count(dr) && !chk.at(dr).is_zero() && r.num().degree_in(v) == dr)
                throw std::logic_error("divrem_in_var failed to reduce degree");
        }
    }
    return {q, r};
}

RatExpr coeff_map_apply(const MPoly& f, const std::string& main_var,
                        const std::function<RatExpr(const MPoly&)>& m) {
    RatExpr acc(MPoly(f.domain(), f.ctx()));
    MPoly x = MPoly::variable(f.domain(), f.ctx(), main_var);
    for (const auto& [k, coeff] : f.univariate_view(main_var)) {
        acc = acc + m(coeff) * RatExpr(x.pow(k));
    }
    return acc;
}

}  // namespace kolchin
