#ifndef KOLCHIN_TOWER_HPP
#define KOLCHIN_TOWER_HPP

#include <optional>

#include "kolchin/errors.hpp"
#include "kolchin/ratexpr.hpp"

namespace kolchin {

class Tower;
using TowerRef = std::shared_ptr<const Tower>;

/// One generator of a presented field-extension tower: either transcendental
/// or algebraic with a monic minimal polynomial over the prefix subtower.
/// Minimal polynomials are stored as coefficient lists c_0..c_d (c_d = 1);
/// each coefficient is an element of the prefix in canonical form.
struct GenSpec {
    std::string name;
    bool transcendental = true;
    std::vector<RatExpr> minpoly;  // empty iff transcendental
    bool separable = true;         // cached: formal derivative of minpoly != 0

    static GenSpec trans(std::string name);

    std::uint32_t degree() const { return minpoly.empty() ? 0 : std::uint32_t(minpoly.size() - 1); }
};

/// Element of a tower. The representation is canonical: the numerator is
/// reduced modulo every algebraic generator's minimal polynomial (triangular,
/// top generator downward) and the denominator is a nonzero polynomial in the
/// base indeterminates and transcendental generators only. Denominators are
/// therefore always invertible; reducible presented minimal polynomials are
/// detected lazily when an inversion runs into a nontrivial factor.
class Element {
  public:
    Element() = default;
    Element(TowerRef t, RatExpr v) : tower_(std::move(t)), val_(std::move(v)) {}

    const TowerRef& tower() const { return tower_; }
    const RatExpr& value() const { return val_; }
    const MPoly& num() const { return val_.num(); }
    const MPoly& den() const { return val_.den(); }
    bool is_zero() const { return val_.num().is_zero(); }
    bool is_one() const;

    Element operator+(const Element& o) const;
    Element operator-(const Element& o) const;
    Element operator*(const Element& o) const;
    Element operator/(const Element& o) const;
    Element operator-() const;
    Element pow(std::uint32_t k) const;
    Element inv() const;
    bool operator==(const Element& o) const;
    bool operator!=(const Element& o) const { return !(*this == o); }

    std::string to_string() const { return val_.to_string(); }

  private:
    TowerRef tower_;
    RatExpr val_;
};

/// A presented field extension K(g_1, ..., g_m) over F_p(t_1..t_k) or
/// Q(t_1..t_k). Immutable; extension returns a new tower.
class Tower : public std::enable_shared_from_this<Tower> {
  public:
    static TowerRef make(CoeffDomain dom, VarList base_indets);

    /// Appends a generator. For algebraic generators the minimal polynomial
    /// must be monic of degree >= 1 with coefficients over the prefix; the
    /// separability tag is computed and cached here.
    TowerRef extend(const GenSpec& g) const;

    /// Convenience: algebraic generator given as a polynomial expression,
    /// univariate in `name` (which must be fresh), e.g. a^2 - t for a.
    TowerRef extend_algebraic(const std::string& name, const RatExpr& poly_in_name) const;
    TowerRef extend_transcendental(const std::string& name) const;

    TowerRef prefix(std::size_t ngens) const;

    const CoeffDomain& domain() const { return dom_; }
    const VarList& base_indets() const { return base_; }
    const std::vector<GenSpec>& gens() const { return gens_; }
    const VarCtx& ctx() const { return ctx_; }
    int gen_index(const std::string& name) const;
    bool has_symbol(const std::string& name) const;

    bool same_presentation(const Tower& o) const;

    /// Element construction; reduces and canonicalizes (may throw
    /// ReducibleMinPoly if a denominator exposes a reducible minpoly).
    Element elem(const RatExpr& v) const;
    Element elem(const MPoly& p) const { return elem(RatExpr(p)); }
    Element from_int(const Int& n) const { return elem(RatExpr::from_int(dom_, ctx_, n)); }
    Element sym(const std::string& name) const {
        return elem(RatExpr(MPoly::variable(dom_, ctx_, name)));
    }
    Element zero() const { return from_int(0); }
    Element one() const { return from_int(1); }

    /// Triangular normal form of an arbitrary fraction over this tower.
    RatExpr normal_form(const RatExpr& v) const;

    /// Inverse of a reduced polynomial representative (internal primitive of
    /// dynamic-evaluation inversion; prefer Element::inv).
    RatExpr invert_reduced(const MPoly& p) const;

    /// The minimal polynomial of generator i evaluated at x via the stored
    /// coefficients, plus its formal derivative, both as tower elements.
    Element minpoly_at(std::size_t i, const Element& x) const;
    Element minpoly_derivative_at(std::size_t i, const Element& x) const;

    /// p-th root if e lies in tower^p, std::nullopt otherwise. Supported for
    /// purely transcendental towers over F_p and towers whose algebraic
    /// generators all have minimal polynomials x^p - c with c free of
    /// algebraic generators; otherwise throws UnsupportedTower.
    std::optional<Element> is_pth_power(const Element& e) const;

    std::string to_string() const;

  private:
    Tower() = default;
    RatExpr reduce_poly(const MPoly& p) const;
    MPoly reduce_in_gen(const MPoly& p, std::size_t i, MPoly& den_acc) const;

    CoeffDomain dom_;
    VarList base_;
    std::vector<GenSpec> gens_;
    VarCtx ctx_;
};

/// True if a and b print the same presentation (structural identity by
/// names, kinds and minimal polynomials).
bool same_tower(const TowerRef& a, const TowerRef& b);

/// Univariate polynomials with Element coefficients: the workhorse for
/// extended-Euclid inversion and minimal-polynomial manipulation.
struct UPolyE {
    std::vector<Element> c;  // c[0] + c[1] x + ...

    int deg() const;
    void trim();
    Element eval(const Element& x) const;
    UPolyE derivative() const;
    std::string to_string(const std::string& var) const;
};

UPolyE upoly_sub(const UPolyE& a, const UPolyE& b);
UPolyE upoly_scale(const UPolyE& a, const Element& s);
UPolyE upoly_shift_mul(const UPolyE& a, const Element& s, std::size_t k);  // a * s * x^k
std::pair<UPolyE, UPolyE> upoly_divrem(const UPolyE& a, const UPolyE& b);

}  // namespace kolchin

#endif
