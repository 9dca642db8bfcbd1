#ifndef KOLCHIN_MPOLY_HPP
#define KOLCHIN_MPOLY_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kolchin/coeff.hpp"

namespace kolchin {

using VarList = std::vector<std::string>;
using VarCtx = std::shared_ptr<const VarList>;
using Expvec = std::vector<std::uint32_t>;

VarCtx make_ctx(VarList vars);

/// Graded-lexicographic comparison on exponent vectors, descending, so that
/// map iteration starts at the leading term of the declared variable order.
struct GrlexDesc {
    bool operator()(const Expvec& a, const Expvec& b) const;
};

/// Sparse multivariate polynomial over a CoeffDomain. No zero coefficients
/// are stored; exponent vectors have the context's length. Binary operations
/// unify variable contexts by name.
class MPoly {
  public:
    using TermMap = std::map<Expvec, Coeff, GrlexDesc>;

    MPoly() = default;
    MPoly(CoeffDomain d, VarCtx ctx) : dom_(d), ctx_(std::move(ctx)) {}
    static MPoly constant(CoeffDomain d, VarCtx ctx, const Coeff& c);
    static MPoly from_int(CoeffDomain d, VarCtx ctx, const Int& n) {
        return constant(d, ctx, Coeff(d, n));
    }
    static MPoly variable(CoeffDomain d, VarCtx ctx, const std::string& name);

    const CoeffDomain& domain() const { return dom_; }
    const VarCtx& ctx() const { return ctx_; }
    const VarList& vars() const { return *ctx_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Coeff constant_value() const;  // requires is_constant()

    void add_term(const Expvec& e, const Coeff& c);

    MPoly operator+(const MPoly& o) const;
    MPoly operator-(const MPoly& o) const;
    MPoly operator*(const MPoly& o) const;
    MPoly operator-() const;
    MPoly scaled(const Coeff& c) const;
    MPoly pow(std::uint32_t k) const;
    bool operator==(const MPoly& o) const;
    bool operator!=(const MPoly& o) const { return !(*this == o); }

    int var_index(const std::string& name) const;  // -1 if absent
    std::uint32_t degree_in(const std::string& name) const;
    bool mentions(const std::string& name) const;

    /// View as univariate in `name`: exponent -> coefficient polynomial with
    /// that variable's exponent zeroed (context unchanged).
    std::map<std::uint32_t, MPoly> univariate_view(const std::string& name) const;

    /// Rebuild this polynomial in another context; every mentioned variable
    /// must exist there.
    MPoly in_ctx(const VarCtx& c2) const;

    /// Exact formal partial derivative; in characteristic p, exponents
    /// divisible by p annihilate through the Coeff arithmetic.
    MPoly partial(const std::string& name) const;

    std::string to_string() const;

  private:
    CoeffDomain dom_;
    VarCtx ctx_;
    TermMap terms_;
};

/// Smallest common context of a and b (a's order, then b's missing names),
/// with both rebuilt in it.
std::pair<MPoly, MPoly> unify(const MPoly& a, const MPoly& b);

}  // namespace kolchin

#endif
