#ifndef KOLCHIN_DIFFOPS_HPP
#define KOLCHIN_DIFFOPS_HPP

#include <map>
#include <variant>
#include <vector>

#include "kolchin/tower.hpp"

namespace kolchin {

struct OperatorViolation {
    std::string generator;
    std::string detail;
};

/// A derivation on a tower, given by images of the base indeterminates and of
/// a prefix of the generators. Generators outside the prefix are outside the
/// domain (the kernel situation delta : L_{r-1} -> L_r). Validation walks the
/// generators in order: transcendental generators are unconstrained, a
/// separable algebraic generator forces its image to -f^delta(a)/f'(a), and an
/// inseparable one requires f^delta(a) = 0 with the image then free.
class Derivation {
  public:
    static Derivation define(const TowerRef& t, std::map<std::string, Element> base_images,
                             std::map<std::string, Element> gen_images);
    static std::variant<Derivation, std::vector<OperatorViolation>> try_define(
        const TowerRef& t, std::map<std::string, Element> base_images,
        std::map<std::string, Element> gen_images);

    const TowerRef& owner() const { return owner_; }
    bool defined_on(const std::string& symbol) const { return images_.count(symbol) != 0; }
    const Element& image(const std::string& symbol) const { return images_.at(symbol); }
    std::size_t domain_gens() const { return domain_gens_; }

    /// Chain-rule application delta(e); e may only mention symbols in the
    /// domain.
    Element apply(const Element& e) const;
    Element apply(const RatExpr& v) const { return apply(owner_->elem(v)); }

    /// delta applied to the coefficients of generator i's minimal polynomial,
    /// evaluated at x (the f^delta(a) of the extension conditions).
    Element minpoly_coeff_delta_at(std::size_t i, const Element& x) const;

    /// Unique extension through one additional separable algebraic generator.
    Derivation extend_forced(const TowerRef& bigger) const;

    /// Same derivation data re-rooted on a tower extending the owner (images
    /// unchanged, new generators outside the domain unless listed in extra).
    Derivation restricted_to(const TowerRef& t, std::map<std::string, Element> extra = {}) const;

    Derivation() = default;

  private:
    TowerRef owner_;
    std::map<std::string, Element> images_;  // base indets and domain generators
    std::size_t domain_gens_ = 0;
};

/// A field endomorphism between towers, fixed on the prime field, given by
/// images of base indeterminates and of a subset of generators. For an
/// algebraic generator in the domain the transported minimal polynomial must
/// vanish on the image: f^sigma(sigma(a)) = 0 in the target.
class Endomorphism {
  public:
    static Endomorphism define(const TowerRef& owner, const TowerRef& target,
                               std::map<std::string, Element> base_images,
                               std::map<std::string, Element> gen_images);
    static std::variant<Endomorphism, std::vector<OperatorViolation>> try_define(
        const TowerRef& owner, const TowerRef& target, std::map<std::string, Element> base_images,
        std::map<std::string, Element> gen_images);

    const TowerRef& owner() const { return owner_; }
    const TowerRef& target() const { return target_; }
    bool defined_on(const std::string& symbol) const { return images_.count(symbol) != 0; }
    const Element& image(const std::string& symbol) const { return images_.at(symbol); }

    /// Substitution application; e may only mention symbols with images.
    Element apply(const Element& e) const;
    Element apply(const RatExpr& v) const { return apply(owner_->elem(v)); }

    /// Transported minimal polynomial of generator i: coefficients mapped
    /// through sigma, as target elements c_0..c_d.
    std::vector<Element> transport_minpoly(std::size_t i) const;

    Endomorphism restricted_to(const TowerRef& owner, const TowerRef& target,
                               std::map<std::string, Element> extra = {}) const;

    Endomorphism() = default;

  private:
    TowerRef owner_, target_;
    std::map<std::string, Element> images_;
};

struct CommutationViolation {
    std::string symbol;
    Element delta_sigma;  // delta(sigma(v))
    Element sigma_delta;  // sigma(delta(v))
};

struct CommutationResult {
    std::vector<CommutationViolation> violations;
    std::vector<std::string> skipped;  // symbols with an undefined composite
    bool ok() const { return violations.empty(); }
};

/// Checks delta(sigma(v)) = sigma(delta(v)) on every base indeterminate and
/// generator where both composites are defined.
CommutationResult commutation_check(const Derivation& d, const Endomorphism& s);

/// Wood's r-function: 0 on non-constants, the p-th root on constants.
/// Throws PRootMissing when e is a constant whose root is not presented.
Element r_map(const Derivation& d, const Element& e);

}  // namespace kolchin

#endif
