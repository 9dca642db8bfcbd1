#ifndef KOLCHIN_RATEXPR_HPP
#define KOLCHIN_RATEXPR_HPP

#include <functional>
#include <optional>

#include "kolchin/mpoly.hpp"

namespace kolchin {

/// Fraction of multivariate polynomials. Not kept in reduced form; equality
/// is decided by cross-multiplication. Denominators are only required to be
/// nonzero as polynomials here; invertibility inside a tower is the tower
/// layer's concern.
class RatExpr {
  public:
    RatExpr() = default;
    RatExpr(MPoly n, MPoly d);
    explicit RatExpr(MPoly n);
    static RatExpr from_int(CoeffDomain dom, VarCtx ctx, const Int& n) {
        return RatExpr(MPoly::from_int(dom, ctx, n));
    }

    const MPoly& num() const { return num_; }
    const MPoly& den() const { return den_; }
    const CoeffDomain& domain() const { return num_.domain(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }

    RatExpr operator+(const RatExpr& o) const;
    RatExpr operator-(const RatExpr& o) const;
    RatExpr operator*(const RatExpr& o) const;
    RatExpr operator/(const RatExpr& o) const;
    RatExpr operator-() const;
    RatExpr pow(std::uint32_t k) const;

    /// Cross-multiplication equality of representations.
    bool same_value(const RatExpr& o) const;

    RatExpr in_ctx(const VarCtx& c) const { return RatExpr(num_.in_ctx(c), den_.in_ctx(c)); }

    std::string to_string() const;

  private:
    MPoly num_, den_;
};

/// Substitutes images for every variable that has one; remaining variables
/// map to themselves in `ctx`. A ring-homomorphism evaluation.
RatExpr substitute(const MPoly& f, const std::function<std::optional<RatExpr>(const std::string&)>& image,
                   CoeffDomain dom, const VarCtx& ctx);
RatExpr substitute(const RatExpr& f, const std::function<std::optional<RatExpr>(const std::string&)>& image,
                   CoeffDomain dom, const VarCtx& ctx);

/// Univariate division by `b` in the designated variable over the fraction
/// field of the remaining variables: a = q*b + r with deg_v r < deg_v b.
std::pair<RatExpr, RatExpr> divrem_in_var(const MPoly& a, const MPoly& b, const std::string& v);

/// f viewed as univariate in `main_var`; `m` is applied to each coefficient
/// polynomial (the part of f free of main_var). Realizes the f^delta / f^sigma
/// coefficient maps of the operator layer.
RatExpr coeff_map_apply(const MPoly& f, const std::string& main_var,
                        const std::function<RatExpr(const MPoly&)>& m);

}  // namespace kolchin

#endif
