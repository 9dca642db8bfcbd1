#include "kolchin/mpoly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace kolchin {

VarCtx make_ctx(VarList vars) { return std::make_shared<const VarList>(std::move(vars)); }

bool GrlexDesc::operator()(const Expvec& a, const Expvec& b) const {
    std::uint64_t da = std::accumulate(a.begin(), a.end(), std::uint64_t(0));
    std::uint64_t db = std::accumulate(b.begin(), b.end(), std::uint64_t(0));
    if (da != db) return da > db;
    return a > b;  // lexicographic on the declared order
}

MPoly MPoly::constant(CoeffDomain d, VarCtx ctx, const Coeff& c) {
    MPoly r(d, std::move(ctx));
    r.add_term(Expvec(r.ctx_->size(), 0), c);
    return r;
}

MPoly MPoly::variable(CoeffDomain d, VarCtx ctx, const std::string& name) {
    MPoly r(d, std::move(ctx));
    auto it = std::find(r.ctx_->begin(), r.ctx_->end(), name);
    if (it == r.ctx_->end()) throw std::invalid_argument("unknown variable " + name);
    Expvec e(r.ctx_->size(), 0);
    e[static_cast<std::size_t>(it - r.ctx_->begin())] = 1;
    r.add_term(e, Coeff::one(d));
    return r;
}

bool MPoly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const Expvec& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](std::uint32_t x) { return x == 0; });
}

Coeff MPoly::constant_value() const {
    if (terms_.empty()) return Coeff::zero(dom_);
    if (!is_constant()) throw std::logic_error("constant_value on non-constant");
    return terms_.begin()->second;
}

void MPoly::add_term(const Expvec& e, const Coeff& c) {
    if (c.is_zero()) return;
    if (e.size() != ctx_->size()) throw std::invalid_argument("exponent arity mismatch");
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

int MPoly::var_index(const std::string& name) const {
    auto it = std::find(ctx_->begin(), ctx_->end(), name);
    return it == ctx_->end() ? -1 : static_cast<int>(it - ctx_->begin());
}

std::uint32_t MPoly::degree_in(const std::string& name) const {
    int i = var_index(name);
    if (i < 0) return 0;
    std::uint32_t d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[static_cast<std::size_t>(i)]);
    return d;
}

bool MPoly::mentions(const std::string& name) const {
    int i = var_index(name);
    if (i < 0) return false;
    for (const auto& [e, c] : terms_)
        if (e[static_cast<std::size_t>(i)] != 0) return true;
    return false;
}

MPoly MPoly::in_ctx(const VarCtx& c2) const {
    if (ctx_ == c2 || (ctx_ && c2 && *ctx_ == *c2)) {
        MPoly r(dom_, c2);
        r.terms_ = terms_;
        return r;
    }
    MPoly r(dom_, c2);
    std::vector<int> remap(ctx_->size());
    for (std::size_t i = 0; i < ctx_->size(); ++i) {
        auto it = std::find(c2->begin(), c2->end(), (*ctx_)[i]);
        remap[i] = it == c2->end() ? -1 : static_cast<int>(it - c2->begin());
    }
    for (const auto& [e, c] : terms_) {
        Expvec e2(c2->size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (remap[i] < 0)
                throw std::invalid_argument("variable " + (*ctx_)[i] + " missing from target context");
            e2[static_cast<std::size_t>(remap[i])] = e[i];
        }
        r.add_term(e2, c);
    }
    return r;
}

std::pair<MPoly, MPoly> unify(const MPoly& a, const MPoly& b) {
    if (a.ctx() == b.ctx() || *a.ctx() == *b.ctx()) return {a, b.in_ctx(a.ctx())};
    VarList merged = *a.ctx();
    for (const auto& v : *b.ctx())
        if (std::find(merged.begin(), merged.end(), v) == merged.end()) merged.push_back(v);
    VarCtx ctx = make_ctx(std::move(merged));
    return {a.in_ctx(ctx), b.in_ctx(ctx)};
}

MPoly MPoly::operator+(const MPoly& o) const {
    auto [a, b] = unify(*this, o);
    for (const auto& [e, c] : b.terms_) a.add_term(e, c);
    return a;
}

MPoly MPoly::operator-() const {
    MPoly r(dom_, ctx_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

MPoly MPoly::operator-(const MPoly& o) const { return *this + (-o); }

MPoly MPoly::operator*(const MPoly& o) const {
    auto [a, b] = unify(*this, o);
    MPoly r(a.dom_, a.ctx_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            Expvec e(ea);
            for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

MPoly MPoly::scaled(const Coeff& c) const {
    MPoly r(dom_, ctx_);
    if (c.is_zero()) return r;
    for (const auto& [e, tc] : terms_) r.add_term(e, tc * c);
    return r;
}

MPoly MPoly::pow(std::uint32_t k) const {
    MPoly r = constant(dom_, ctx_, Coeff::one(dom_));
    MPoly base = *this;
    while (k) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

bool MPoly::operator==(const MPoly& o) const {
    if (dom_ != o.dom_) return false;
    auto [a, b] = unify(*this, o);
    return a.terms_ == b.terms_;
}

std::map<std::uint32_t, MPoly> MPoly::univariate_view(const std::string& name) const {
    int i = var_index(name);
    std::map<std::uint32_t, MPoly> out;
    for (const auto& [e, c] : terms_) {
        std::uint32_t k = i < 0 ? 0 : e[static_cast<std::size_t>(i)];
        Expvec e2(e);
        if (i >= 0) e2[static_cast<std::size_t>(i)] = 0;
        auto [it, fresh] = out.emplace(k, MPoly(dom_, ctx_));
        it->second.add_term(e2, c);
    }
    return out;
}

MPoly MPoly::partial(const std::string& name) const {
    int i = var_index(name);
    if (i < 0) throw std::invalid_argument("unknown variable " + name);
    MPoly r(dom_, ctx_);
    for (const auto& [e, c] : terms_) {
        std::uint32_t k = e[static_cast<std::size_t>(i)];
        if (k == 0) continue;
        Coeff c2 = c.times_int(Int(k));
        if (c2.is_zero()) continue;  // p | exponent
        Expvec e2(e);
        e2[static_cast<std::size_t>(i)] = k - 1;
        r.add_term(e2, c2);
    }
    return r;
}

std::string MPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        std::string cs = c.to_string();
        bool neg = !cs.empty() && cs[0] == '-';
        if (first) {
            if (neg) os << "-", cs = cs.substr(1);
        } else {
            os << (neg ? " - " : " + ");
            if (neg) cs = cs.substr(1);
        }
        first = false;
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += (*ctx_)[i];
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        if (mono.empty())
            os << cs;
        else if (cs == "1")
            os << mono;
        else
            os << cs << "*" << mono;
    }
    return os.str();
}

}  // namespace kolchin
