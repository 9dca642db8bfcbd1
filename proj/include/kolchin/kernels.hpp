#ifndef KOLCHIN_KERNELS_HPP
#define KOLCHIN_KERNELS_HPP

#include <set>

#include "kolchin/diffops.hpp"

namespace kolchin {

/// Index (xi, i) of Gamma(r); std::pair's ordering is exactly the
/// left-lexicographic order the kernel machinery uses.
using GammaIndex = std::pair<int, int>;  // (xi, var), var is 1-based

std::vector<GammaIndex> gamma_enumerate(int r, int n);

std::string slot_symbol(const std::string& family, int var, int xi);

/// How one kernel generator is presented: a fresh transcendental, a fresh
/// algebraic generator with a minimal polynomial over its lex-predecessors,
/// or an element of the field generated so far (no new generator).
struct KernelSlot {
    enum class Kind { Trans, Alg, Defined };
    Kind kind = Kind::Trans;
    RatExpr minpoly;  // Alg: univariate in the slot's own symbol
    RatExpr value;    // Defined

    static KernelSlot trans() { return {}; }
    static KernelSlot alg(RatExpr mp) { return {Kind::Alg, std::move(mp), {}}; }
    static KernelSlot defined(RatExpr v) { return {Kind::Defined, {}, std::move(v)}; }
};

struct KernelViolation {
    int xi = 0;
    int var = 0;
    std::string what;
};

struct DiffKernelPresentation {
    TowerRef base;          // the field K
    Derivation base_delta;  // delta on K, total
    int r = 0;
    int n = 0;
    std::string family = "a";
    std::map<GammaIndex, KernelSlot> slots;  // one per Gamma(r) index
};

enum class LeaderKind { NonLeader, SeparableLeader, InseparableLeader };

struct LeaderReport {
    std::map<GammaIndex, LeaderKind> kinds;
    std::set<GammaIndex> minimal_separable;  // linear order on xi per column
    std::set<GammaIndex> inseparable;

    bool is_minimal(const GammaIndex& g) const { return minimal_separable.count(g) != 0; }
};

/// A verified differential kernel: the presented tower on Gamma(r) together
/// with the validated shift derivation L_{r-1} -> L_r.
class DiffKernel {
  public:
    const DiffKernelPresentation& presentation() const { return pres_; }
    const TowerRef& tower() const { return tower_; }
    const Derivation& shift() const { return shift_; }
    int length() const { return pres_.r; }
    int width() const { return pres_.n; }

    /// The element standing at index (xi, i): the generator symbol or the
    /// resolved Defined value.
    const Element& value_at(const GammaIndex& g) const { return values_.at(g); }
    const KernelSlot& slot_at(const GammaIndex& g) const { return pres_.slots.at(g); }

    friend std::variant<DiffKernel, std::vector<KernelViolation>> kernel_verify(
        const DiffKernelPresentation& p);

  private:
    DiffKernelPresentation pres_;
    TowerRef tower_;
    Derivation shift_;
    std::map<GammaIndex, Element> values_;
};

std::variant<DiffKernel, std::vector<KernelViolation>> kernel_verify(const DiffKernelPresentation& p);
DiffKernel kernel_verify_or_throw(const DiffKernelPresentation& p);

LeaderReport classify_leaders(const DiffKernel& k);

/// Prolongation by the two-case rule: transcendental columns get fresh
/// generics, separable-leader columns get the forced next value. Requires
/// every inseparable leader to sit at xi <= r-1.
DiffKernel kernel_prolong(const DiffKernel& k, int steps);

struct FinitenessVarReport {
    int var = 0;
    std::optional<int> first_separable_xi;
    bool higher_all_in_predecessor_field = true;
    int inseparable_count = 0;
};

struct FinitenessReport {
    int depth = 0;
    std::vector<FinitenessVarReport> per_var;
    int inseparable_total = 0;
    bool inseparable_all_in_initial_segment = true;  // none appeared past the input kernel
};

FinitenessReport finiteness_probe(const DiffKernel& k, int depth);

}  // namespace kolchin

#endif
