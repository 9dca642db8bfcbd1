#include "kolchin/diffops.hpp"

#include <algorithm>

namespace kolchin {

namespace {

// chain rule on a polynomial representative: sum over occurring symbols of
// dP/dv * image(v); prime-field and rational coefficients are constants
Element chain_rule(const MPoly& p, const TowerRef& t, const std::map<std::string, Element>& images) {
    Element acc = t->zero();
    for (const auto& v : *t->ctx()) {
        if (!p.mentions(v)) continue;
        auto it = images.find(v);
        if (it == images.end()) throw std::domain_error("derivation undefined on symbol " + v);
        if (it->second.is_zero()) continue;
        acc = acc + t->elem(RatExpr(p.partial(v))) * it->second;
    }
    return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// Derivation

Element Derivation::apply(const Element& e) const {
    if (!same_tower(e.tower(), owner_)) throw std::invalid_argument("element of a different tower");
    const MPoly& n = e.num();
    const MPoly& d = e.den();
    Element dn = chain_rule(n, owner_, images_);
    Element dd = chain_rule(d, owner_, images_);
    Element den = owner_->elem(RatExpr(d));
    // quotient rule: (n/d)' = (n' d - n d') / d^2
    return (dn * den - owner_->elem(RatExpr(n)) * dd) / (den * den);
}

Element Derivation::minpoly_coeff_delta_at(std::size_t i, const Element& x) const {
    const GenSpec& g = owner_->gens()[i];
    Element acc = owner_->zero();
    for (std::size_t k = g.minpoly.size(); k-- > 0;) {
        Element ck = apply(owner_->elem(g.minpoly[k].in_ctx(owner_->ctx())));
        acc = acc * x + ck;
    }
    return acc;
}

std::variant<Derivation, std::vector<OperatorViolation>> Derivation::try_define(
    const TowerRef& t, std::map<std::string, Element> base_images,
    std::map<std::string, Element> gen_images) {
    std::vector<OperatorViolation> bad;
    Derivation d;
    d.owner_ = t;
    for (const auto& b : t->base_indets()) {
        auto it = base_images.find(b);
        if (it == base_images.end()) {
            bad.push_back({b, "no image for base indeterminate"});
            continue;
        }
        d.images_.emplace(b, t->elem(it->second.value()));
    }
    if (!bad.empty()) return bad;

    // the generators carrying images must form a prefix of the tower
    const auto& gens = t->gens();
    std::size_t k = 0;
    while (k < gens.size() && gen_images.count(gens[k].name)) ++k;
    d.domain_gens_ = k;
    for (std::size_t i = k; i < gens.size(); ++i)
        if (gen_images.count(gens[i].name))
            return std::vector<OperatorViolation>{
                {gens[i].name, "image given but an earlier generator has none"}};

    for (std::size_t i = 0; i < k; ++i) {
        const GenSpec& g = gens[i];
        Element img = t->elem(gen_images.at(g.name).value());
        Element a = t->sym(g.name);
        if (g.transcendental) {
            d.images_.emplace(g.name, img);
            continue;
        }
        Element fdelta = d.minpoly_coeff_delta_at(i, a);
        if (g.separable) {
            Element fprime = t->minpoly_derivative_at(i, a);
            Element lhs = fdelta + fprime * img;
            if (!lhs.is_zero()) {
                bad.push_back({g.name, lhs.to_string()});
                // keep walking with the forced value so later reports stay
                // meaningful
                d.images_.emplace(g.name, -(fdelta / fprime));
            } else {
                d.images_.emplace(g.name, img);
            }
        } else {
            if (!fdelta.is_zero()) {
                bad.push_back({g.name, fdelta.to_string()});
                d.images_.emplace(g.name, t->zero());
            } else {
                d.images_.emplace(g.name, img);  // free choice
            }
        }
    }
    if (!bad.empty()) return bad;
    return d;
}

Derivation Derivation::define(const TowerRef& t, std::map<std::string, Element> base_images,
                              std::map<std::string, Element> gen_images) {
    auto r = try_define(t, std::move(base_images), std::move(gen_images));
    if (auto* v = std::get_if<std::vector<OperatorViolation>>(&r))
        throw InvalidDerivation(v->front().generator, v->front().detail);
    return std::get<Derivation>(std::move(r));
}

Derivation Derivation::extend_forced(const TowerRef& bigger) const {
    if (bigger->gens().size() != owner_->gens().size() + 1 ||
        !bigger->prefix(owner_->gens().size())->same_presentation(*owner_))
        throw std::invalid_argument("tower does not extend the derivation's owner by one generator");
    const GenSpec& g = bigger->gens().back();
    if (g.transcendental || !g.separable) throw NotSeparable(g.name);

    Derivation d;
    d.owner_ = bigger;
    for (const auto& [sym, img] : images_) d.images_.emplace(sym, bigger->elem(img.value()));
    d.domain_gens_ = owner_->gens().size();
    std::size_t i = bigger->gens().size() - 1;
    Element a = bigger->sym(g.name);
    Element fdelta = d.minpoly_coeff_delta_at(i, a);
    Element fprime = bigger->minpoly_derivative_at(i, a);
    d.images_.emplace(g.name, -(fdelta / fprime));
    d.domain_gens_ = bigger->gens().size();
    return d;
}

Derivation Derivation::restricted_to(const TowerRef& t, std::map<std::string, Element> extra) const {
    Derivation d;
    d.owner_ = t;
    for (const auto& [sym, img] : images_)
        if (t->has_symbol(sym)) d.images_.emplace(sym, t->elem(img.value()));
    for (auto& [sym, img] : extra) d.images_.insert_or_assign(sym, t->elem(img.value()));
    std::size_t k = 0;
    const auto& gens = t->gens();
    while (k < gens.size() && d.images_.count(gens[k].name)) ++k;
    d.domain_gens_ = k;
    return d;
}

// ---------------------------------------------------------------------------
// Endomorphism

Element Endomorphism::apply(const Element& e) const {
    if (!same_tower(e.tower(), owner_)) throw std::invalid_argument("element of a different tower");
    auto img = [&](const std::string& v) -> std::optional<RatExpr> {
        auto it = images_.find(v);
        if (it == images_.end()) throw std::domain_error("endomorphism undefined on symbol " + v);
        return it->second.value();
    };
    RatExpr out = substitute(e.value(), img, target_->domain(), target_->ctx());
    return target_->elem(out);
}

std::vector<Element> Endomorphism::transport_minpoly(std::size_t i) const {
    const GenSpec& g = owner_->gens()[i];
    std::vector<Element> out;
    for (const auto& c : g.minpoly) out.push_back(apply(owner_->elem(c.in_ctx(owner_->ctx()))));
    return out;
}

std::variant<Endomorphism, std::vector<OperatorViolation>> Endomorphism::try_define(
    const TowerRef& owner, const TowerRef& target, std::map<std::string, Element> base_images,
    std::map<std::string, Element> gen_images) {
    std::vector<OperatorViolation> bad;
    Endomorphism s;
    s.owner_ = owner;
    s.target_ = target;
    for (const auto& b : owner->base_indets()) {
        auto it = base_images.find(b);
        if (it == base_images.end()) {
            bad.push_back({b, "no image for base indeterminate"});
            continue;
        }
        s.images_.emplace(b, target->elem(it->second.value()));
    }
    if (!bad.empty()) return bad;

    const auto& gens = owner->gens();
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const GenSpec& g = gens[i];
        auto it = gen_images.find(g.name);
        if (it == gen_images.end()) continue;  // outside the domain
        Element img = target->elem(it->second.value());
        if (g.transcendental) {
            s.images_.emplace(g.name, img);
            continue;
        }
        // the transported minimal polynomial must vanish on the image; all
        // coefficient dependencies must already have images
        Element acc = target->zero();
        bool usable = true;
        for (std::size_t k = g.minpoly.size(); k-- > 0;) {
            Element ck;
            try {
                ck = s.apply(owner->elem(g.minpoly[k].in_ctx(owner->ctx())));
            } catch (const std::domain_error& e) {
                bad.push_back({g.name, std::string("minimal polynomial coefficient outside the domain: ") +
                                           e.what()});
                usable = false;
                break;
            }
            acc = acc * img + ck;
        }
        if (!usable) continue;
        if (!acc.is_zero()) {
            bad.push_back({g.name, "transported minimal polynomial does not vanish: " + acc.to_string()});
            continue;
        }
        s.images_.emplace(g.name, img);
    }
    if (!bad.empty()) return bad;
    return s;
}

Endomorphism Endomorphism::define(const TowerRef& owner, const TowerRef& target,
                                  std::map<std::string, Element> base_images,
                                  std::map<std::string, Element> gen_images) {
    auto r = try_define(owner, target, std::move(base_images), std::move(gen_images));
    if (auto* v = std::get_if<std::vector<OperatorViolation>>(&r))
        throw InvalidEndomorphism(v->front().generator);
    return std::get<Endomorphism>(std::move(r));
}

Endomorphism Endomorphism::restricted_to(const TowerRef& owner, const TowerRef& target,
                                         std::map<std::string, Element> extra) const {
    Endomorphism s;
    s.owner_ = owner;
    s.target_ = target;
    for (const auto& [sym, img] : images_)
        if (owner->has_symbol(sym)) s.images_.emplace(sym, target->elem(img.value()));
    for (auto& [sym, img] : extra) s.images_.insert_or_assign(sym, target->elem(img.value()));
    return s;
}

// ---------------------------------------------------------------------------

CommutationResult commutation_check(const Derivation& d, const Endomorphism& s) {
    if (!same_tower(d.owner(), s.owner()) || !same_tower(s.target(), d.owner()))
        throw std::invalid_argument("commutation check needs both operators on one tower");
    CommutationResult res;
    const TowerRef& t = d.owner();
    std::vector<std::string> symbols = t->base_indets();
    for (const auto& g : t->gens()) symbols.push_back(g.name);
    for (const auto& v : symbols) {
        if (!d.defined_on(v) || !s.defined_on(v)) {
            res.skipped.push_back(v);
            continue;
        }
        Element ds, sd;
        try {
            ds = d.apply(s.image(v));
            sd = s.apply(d.image(v));
        } catch (const std::domain_error&) {
            res.skipped.push_back(v);
            continue;
        }
        if (!(ds == sd)) res.violations.push_back({v, ds, sd});
    }
    return res;
}

Element r_map(const Derivation& d, const Element& e) {
    const TowerRef& t = d.owner();
    if (!t->domain().p) throw UnsupportedTower("r-function needs characteristic p > 0");
    if (!d.apply(e).is_zero()) return t->zero();
    auto root = t->is_pth_power(e);
    if (!root) throw PRootMissing(e.to_string());
    return *root;
}

}  // namespace kolchin
