#ifndef KOLCHIN_ERRORS_HPP
#define KOLCHIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kolchin {

struct KolchinError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroElement : KolchinError {
    ZeroElement() : KolchinError("inversion of zero element") {}
};

/// The presented minimal polynomial of `generator` is not irreducible; the
/// witness is a nontrivial monic factor (univariate in the generator symbol).
struct ReducibleMinPoly : KolchinError {
    std::string generator;
    std::string factor;
    ReducibleMinPoly(std::string g, std::string f)
        : KolchinError("reducible minimal polynomial of " + g + ", factor " + f),
          generator(std::move(g)),
          factor(std::move(f)) {}
};

struct UnsupportedTower : KolchinError {
    explicit UnsupportedTower(const std::string& why) : KolchinError("unsupported tower: " + why) {}
};

struct NotSeparable : KolchinError {
    std::string generator;
    explicit NotSeparable(std::string g)
        : KolchinError("generator " + g + " is not separably algebraic"), generator(std::move(g)) {}
};

struct InvalidDerivation : KolchinError {
    std::string generator;
    std::string lhs_value;
    InvalidDerivation(std::string g, std::string v)
        : KolchinError("no derivation extends through " + g + " (condition value " + v + ")"),
          generator(std::move(g)),
          lhs_value(std::move(v)) {}
};

struct InvalidEndomorphism : KolchinError {
    std::string generator;
    explicit InvalidEndomorphism(std::string g)
        : KolchinError("no endomorphism extends through " + g), generator(std::move(g)) {}
};

struct PRootMissing : KolchinError {
    std::string element;
    explicit PRootMissing(std::string e)
        : KolchinError("constant " + e + " has no presented p-th root"), element(std::move(e)) {}
};

struct PlanInconsistent : KolchinError {
    int step;
    explicit PlanInconsistent(int n)
        : KolchinError("plan step " + std::to_string(n) + " is inconsistent"), step(n) {}
};

struct NotAConstant : KolchinError {
    std::size_t index;
    explicit NotAConstant(std::size_t i)
        : KolchinError("plan constant #" + std::to_string(i) + " is not a delta-constant"), index(i) {}
};

struct InseparableLeaderTooHigh : KolchinError {
    int xi;
    int var;
    InseparableLeaderTooHigh(int x, int i)
        : KolchinError("inseparable leader at (" + std::to_string(x) + "," + std::to_string(i) +
                       ") blocks prolongation"),
          xi(x),
          var(i) {}
};

struct HypothesisViolation : KolchinError {
    explicit HypothesisViolation(const std::string& what) : KolchinError("hypothesis violation: " + what) {}
};

struct ChoiceRequired : KolchinError {
    std::string slot;
    explicit ChoiceRequired(std::string s)
        : KolchinError("no default-safe value for slot " + s), slot(std::move(s)) {}
};

}  // namespace kolchin

#endif
