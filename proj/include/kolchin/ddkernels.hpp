#ifndef KOLCHIN_DDKERNELS_HPP
#define KOLCHIN_DDKERNELS_HPP

#include <tuple>

#include "kolchin/kernels.hpp"

namespace kolchin {

/// Index (xi, u, i) of Gamma(r, s); std::tuple ordering is the
/// left-lexicographic order. Minimality of dd-leaders uses the product order
/// on (xi, u) instead.
using Gamma2Index = std::tuple<int, int, int>;  // (xi, u, var)

std::vector<Gamma2Index> gamma2_enumerate(int r, int s, int n);
std::string slot2_symbol(const std::string& family, int var, int xi, int u);

/// (xi1,u1) <= (xi2,u2) in the product order on N0 x N0.
bool product_le(std::pair<int, int> a, std::pair<int, int> b);

enum class MinimalityOrder { Product, Lex };

struct DDViolation {
    Gamma2Index at{-1, -1, -1};
    std::string what;
    char op = '-';  // 'd' delta-shift, 's' sigma-shift, 'b' base, 'p' presentation
};

struct DDKernelPresentation {
    TowerRef base;
    Derivation base_delta;   // total on K
    Endomorphism base_sigma;  // K -> K, total
    int r = 0, s = 0, n = 0;
    std::string family = "a";
    std::map<Gamma2Index, KernelSlot> slots;
};

class DDKernel {
  public:
    const DDKernelPresentation& presentation() const { return pres_; }
    const TowerRef& tower() const { return tower_; }
    const Derivation& delta_shift() const { return dshift_; }
    const Endomorphism& sigma_shift() const { return sshift_; }
    int length_r() const { return pres_.r; }
    int length_s() const { return pres_.s; }
    int width() const { return pres_.n; }
    const Element& value_at(const Gamma2Index& g) const { return values_.at(g); }
    const KernelSlot& slot_at(const Gamma2Index& g) const { return pres_.slots.at(g); }

    friend std::variant<DDKernel, std::vector<DDViolation>> dd_verify(const DDKernelPresentation& p);

  private:
    DDKernelPresentation pres_;
    TowerRef tower_;
    Derivation dshift_;
    Endomorphism sshift_;
    std::map<Gamma2Index, Element> values_;
};

std::variant<DDKernel, std::vector<DDViolation>> dd_verify(const DDKernelPresentation& p);
DDKernel dd_verify_or_throw(const DDKernelPresentation& p);

/// Leader classifications of a dd-kernel: the plain report on the full index
/// set, and the a-/b-side reports on the sub-kernels L^a (u <= s-1) and L^b
/// (u >= 1). Sub-kernel kinds are only certified when the presented data
/// stays inside the sub-kernel; crossings are reported as caveats.
struct DDLeaderReport {
    std::map<Gamma2Index, LeaderKind> plain;
    std::set<Gamma2Index> plain_minimal;  // product order per column
    std::map<Gamma2Index, LeaderKind> a_side;
    std::set<Gamma2Index> a_minimal;  // linear (lex) order per column
    std::map<Gamma2Index, LeaderKind> b_side;
    std::set<Gamma2Index> b_minimal;
    std::vector<std::string> caveats;

    std::set<Gamma2Index> minimal_of(const std::map<Gamma2Index, LeaderKind>& kinds, int n,
                                     MinimalityOrder order) const;
};

DDLeaderReport dd_classify(const DDKernel& k);

/// Difference tower presentation K(a)_sigma truncated at a finite depth:
/// slots indexed by (u, i), sigma-shift u -> u+1.
struct DiffTowerPresentation {
    TowerRef base;
    Endomorphism base_sigma;
    int depth = 0;  // top sigma-level present
    int n = 0;
    std::string family = "a";
    std::map<GammaIndex, KernelSlot> slots;  // (u, i)
};

struct DifferenceLeaderReport {
    std::map<GammaIndex, LeaderKind> kinds;  // (u, i)
    std::set<GammaIndex> minimal_separable;
    int transcendence_degree = 0;  // count of transcendental tags
    bool extension_separable = true;
    bool bound_met = true;  // every minimal-separable leader at depth <= n
    int bound = 0;          // the n of the Proposition
    std::vector<std::string> violations;  // sigma-shift verification failures
};

DifferenceLeaderReport difference_leader_classify(const DiffTowerPresentation& p);

/// Extends the delta-direction by `steps` under the locality hypotheses for
/// the bound M; requires s = 1 (linearize first for larger s).
DDKernel dd_prolong_delta(const DDKernel& k, int steps, int M);

struct LinearizeResult {
    DDKernel kernel;                          // length (r, 1), width n*s
    std::map<std::string, std::string> to_new;  // old symbol -> new symbol
    std::map<std::string, std::string> to_old;
};

LinearizeResult linearize(const DDKernel& k);

struct DDHypothesisData {
    int M = 0;
    std::set<std::pair<int, int>> I;  // subset of {0..M} x {1..n}
    int t_count = 0;
    int d_count = 0;
    /// enumeration x_1..x_m of {a_i^{xi,u} : (xi,i) in I^c, u <= s-1};
    /// empty means lex order
    std::vector<Gamma2Index> x_enum;
    std::map<Gamma2Index, RatExpr> choices;  // for free case-(ii) slots in realize
};

struct HypothesisVerdict {
    std::string name;
    bool pass = false;
    std::string witness;
};

struct DDHypothesisReport {
    int M = 0;
    std::vector<HypothesisVerdict> verdicts;
    std::vector<std::string> relied_tags;
    int d_counted = 0;
    bool all_pass() const;
    const HypothesisVerdict* find(const std::string& name) const;
};

DDHypothesisReport dd_hypothesis_check(const DDKernel& k, const DDHypothesisData& h);

struct RealizeResult {
    DDKernel kernel;
    std::vector<std::string> assumption_log;
};

/// Extends k to length (R, S) by alternating delta-prolongation with the
/// sigma-direction step of the positive-characteristic realization argument:
/// transported slots where forced, fresh generics where free, caller choices
/// (default 0) at inseparable free slots.
RealizeResult dd_realize(const DDKernel& k, int R, int S, const DDHypothesisData& h);

}  // namespace kolchin

#endif
