#include "kolchin/kernels.hpp"

namespace kolchin {

std::vector<GammaIndex> gamma_enumerate(int r, int n) {
    std::vector<GammaIndex> out;
    for (int xi = 0; xi <= r; ++xi)
        for (int i = 1; i <= n; ++i) out.emplace_back(xi, i);
    return out;
}

std::string slot_symbol(const std::string& family, int var, int xi) {
    return family + "[" + std::to_string(var) + "][" + std::to_string(xi) + "]";
}

namespace {

// resolves a presentation expression over the tower built so far: real
// generator names stand for themselves, Defined slot names for their values
RatExpr resolve_expr(const RatExpr& e, CoeffDomain dom, const VarCtx& ctx,
                     const std::map<std::string, RatExpr>& defined) {
    auto img = [&](const std::string& v) -> std::optional<RatExpr> {
        auto it = defined.find(v);
        if (it == defined.end()) return std::nullopt;
        return it->second;
    };
    return substitute(e, img, dom, ctx);
}

}  // namespace

std::variant<DiffKernel, std::vector<KernelViolation>> kernel_verify(const DiffKernelPresentation& p) {
    std::vector<KernelViolation> bad;
    if (p.base_delta.domain_gens() != p.base->gens().size())
        return std::vector<KernelViolation>{{0, 0, "base derivation is not total on K"}};

    DiffKernel k;
    k.pres_ = p;
    TowerRef t = p.base;
    std::map<std::string, RatExpr> defined;

    // build the tower in lex order
    for (const auto& g : gamma_enumerate(p.r, p.n)) {
        auto it = p.slots.find(g);
        if (it == p.slots.end()) {
            bad.push_back({g.first, g.second, "missing slot"});
            continue;
        }
        std::string name = slot_symbol(p.family, g.second, g.first);
        try {
            switch (it->second.kind) {
                case KernelSlot::Kind::Trans:
                    t = t->extend_transcendental(name);
                    break;
                case KernelSlot::Kind::Alg: {
                    VarList vl = *t->ctx();
                    vl.push_back(name);
                    auto ctx2 = make_ctx(vl);
                    RatExpr mp = resolve_expr(it->second.minpoly, t->domain(), ctx2, defined);
                    t = t->extend_algebraic(name, mp);
                    break;
                }
                case KernelSlot::Kind::Defined:
                    defined.emplace(name, resolve_expr(it->second.value, t->domain(), t->ctx(), defined));
                    break;
            }
        } catch (const std::exception& e) {
            bad.push_back({g.first, g.second, e.what()});
        }
    }
    if (!bad.empty()) return bad;
    k.tower_ = t;

    for (const auto& g : gamma_enumerate(p.r, p.n)) {
        std::string name = slot_symbol(p.family, g.second, g.first);
        auto it = defined.find(name);
        k.values_.emplace(g, it != defined.end() ? t->elem(it->second) : t->sym(name));
    }

    // shift images: base delta plus a_i^xi -> a_i^{xi+1} for xi <= r-1
    std::map<std::string, Element> base_images, gen_images;
    for (const auto& b : p.base->base_indets())
        base_images.emplace(b, t->elem(p.base_delta.image(b).value()));
    for (const auto& gsp : p.base->gens())
        gen_images.emplace(gsp.name, t->elem(p.base_delta.image(gsp.name).value()));
    for (const auto& [g, slot] : p.slots) {
        if (g.first > p.r - 1) continue;
        if (slot.kind == KernelSlot::Kind::Defined) continue;
        gen_images.emplace(slot_symbol(p.family, g.second, g.first),
                           k.values_.at({g.first + 1, g.second}));
    }
    auto res = Derivation::try_define(t, std::move(base_images), std::move(gen_images));
    if (auto* v = std::get_if<std::vector<OperatorViolation>>(&res)) {
        for (const auto& ov : *v) bad.push_back({-1, -1, ov.generator + ": " + ov.detail});
        return bad;
    }
    k.shift_ = std::get<Derivation>(std::move(res));

    // Defined slots below the top level must be consistent with the shift
    for (const auto& [g, slot] : p.slots) {
        if (slot.kind != KernelSlot::Kind::Defined || g.first > p.r - 1) continue;
        Element lhs = k.shift_.apply(k.values_.at(g));
        const Element& rhs = k.values_.at({g.first + 1, g.second});
        if (!(lhs == rhs))
            bad.push_back({g.first, g.second,
                           "shift of defined value is " + lhs.to_string() + ", presented " +
                               rhs.to_string()});
    }
    if (!bad.empty()) return bad;
    return k;
}

DiffKernel kernel_verify_or_throw(const DiffKernelPresentation& p) {
    auto r = kernel_verify(p);
    if (auto* v = std::get_if<std::vector<KernelViolation>>(&r))
        throw KolchinError("kernel verification failed at (" + std::to_string(v->front().xi) + "," +
                           std::to_string(v->front().var) + "): " + v->front().what);
    return std::get<DiffKernel>(std::move(r));
}

LeaderReport classify_leaders(const DiffKernel& k) {
    LeaderReport rep;
    const auto& p = k.presentation();
    for (const auto& [g, slot] : p.slots) {
        LeaderKind kind = LeaderKind::NonLeader;
        switch (slot.kind) {
            case KernelSlot::Kind::Trans:
                kind = LeaderKind::NonLeader;
                break;
            case KernelSlot::Kind::Defined:
                // rational over its predecessors, hence separably algebraic
                kind = LeaderKind::SeparableLeader;
                break;
            case KernelSlot::Kind::Alg: {
                int gi = k.tower()->gen_index(slot_symbol(p.family, g.second, g.first));
                kind = k.tower()->gens()[static_cast<std::size_t>(gi)].separable
                           ? LeaderKind::SeparableLeader
                           : LeaderKind::InseparableLeader;
                break;
            }
        }
        rep.kinds.emplace(g, kind);
        if (kind == LeaderKind::InseparableLeader) rep.inseparable.insert(g);
    }
    for (int i = 1; i <= p.n; ++i) {
        for (int xi = 0; xi <= p.r; ++xi) {
            if (rep.kinds.at({xi, i}) == LeaderKind::SeparableLeader) {
                rep.minimal_separable.insert({xi, i});
                break;
            }
        }
    }
    return rep;
}

DiffKernel kernel_prolong(const DiffKernel& k, int steps) {
    LeaderReport rep = classify_leaders(k);
    for (const auto& g : rep.inseparable)
        if (g.first > k.length() - 1) throw InseparableLeaderTooHigh(g.first, g.second);

    DiffKernelPresentation p = k.presentation();
    DiffKernel cur = k;
    for (int step = 0; step < steps; ++step) {
        int r = p.r;
        // extend the shift with this level's assignments as we walk i = 1..n
        TowerRef t = cur.tower();
        std::map<std::string, Element> extra;
        for (int i = 1; i <= p.n; ++i) {
            GammaIndex top{r, i};
            const KernelSlot& slot = p.slots.at(top);
            std::string top_name = slot_symbol(p.family, i, r);
            std::string new_name = slot_symbol(p.family, i, r + 1);
            if (slot.kind == KernelSlot::Kind::Trans) {
                // Case 1: not a leader; adjoin a fresh generic
                t = t->extend_transcendental(new_name);
                p.slots.emplace(GammaIndex{r + 1, i}, KernelSlot::trans());
                extra.emplace(top_name, t->sym(new_name));
            } else {
                // Case 2: separable leader; the next value is forced
                Derivation d = cur.shift().restricted_to(t, extra);
                Element forced;
                if (slot.kind == KernelSlot::Kind::Defined) {
                    forced = d.apply(t->elem(cur.value_at(top).value()));
                } else {
                    int gi = t->gen_index(top_name);
                    Element a = t->sym(top_name);
                    Element fd = d.minpoly_coeff_delta_at(static_cast<std::size_t>(gi), a);
                    Element fp = t->minpoly_derivative_at(static_cast<std::size_t>(gi), a);
                    forced = -(fd / fp);
                }
                p.slots.emplace(GammaIndex{r + 1, i}, KernelSlot::defined(forced.value()));
            }
        }
        p.r = r + 1;
        cur = kernel_verify_or_throw(p);
    }
    return cur;
}

FinitenessReport finiteness_probe(const DiffKernel& k, int depth) {
    DiffKernel big = kernel_prolong(k, depth);
    LeaderReport rep = classify_leaders(big);
    FinitenessReport out;
    out.depth = depth;
    const auto& p = big.presentation();
    for (int i = 1; i <= p.n; ++i) {
        FinitenessVarReport v;
        v.var = i;
        for (int xi = 0; xi <= p.r; ++xi) {
            LeaderKind kind = rep.kinds.at({xi, i});
            if (kind == LeaderKind::InseparableLeader) {
                ++v.inseparable_count;
                if (xi > k.length()) out.inseparable_all_in_initial_segment = false;
            }
            if (kind == LeaderKind::SeparableLeader && !v.first_separable_xi) v.first_separable_xi = xi;
            if (v.first_separable_xi && xi > *v.first_separable_xi &&
                p.slots.at({xi, i}).kind != KernelSlot::Kind::Defined)
                v.higher_all_in_predecessor_field = false;
        }
        out.inseparable_total += v.inseparable_count;
        out.per_var.push_back(v);
    }
    return out;
}

}  // namespace kolchin
