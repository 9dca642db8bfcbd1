#include "kolchin/tower.hpp"

#include <algorithm>
#include <sstream>

namespace kolchin {

GenSpec GenSpec::trans(std::string name) {
    GenSpec g;
    g.name = std::move(name);
    return g;
}

// ---------------------------------------------------------------------------
// Tower construction

TowerRef Tower::make(CoeffDomain dom, VarList base_indets) {
    auto t = std::shared_ptr<Tower>(new Tower());
    t->dom_ = dom;
    t->base_ = std::move(base_indets);
    t->ctx_ = make_ctx(t->base_);
    return t;
}

TowerRef Tower::extend(const GenSpec& g) const {
    if (has_symbol(g.name)) throw std::invalid_argument("symbol " + g.name + " already in tower");
    auto t = std::shared_ptr<Tower>(new Tower());
    t->dom_ = dom_;
    t->base_ = base_;
    t->gens_ = gens_;

    GenSpec spec = g;
    if (!g.transcendental) {
        if (g.minpoly.size() < 2) throw std::invalid_argument("minimal polynomial of degree < 1");
        // canonicalize coefficients over the prefix (this tower); rejects
        // references to unknown or later symbols
        spec.minpoly.clear();
        for (const auto& c : g.minpoly) spec.minpoly.push_back(normal_form(c.in_ctx(ctx_)));
        const RatExpr& lead = spec.minpoly.back();
        if (!(lead.num() == lead.den())) throw std::invalid_argument("minimal polynomial not monic");
        // separability: formal derivative nonzero
        spec.separable = false;
        for (std::size_t k = 1; k < spec.minpoly.size(); ++k) {
            if (dom_.p && k % dom_.p == 0) continue;
            if (!spec.minpoly[k].is_zero()) {
                spec.separable = true;
                break;
            }
        }
    }
    t->gens_.push_back(std::move(spec));

    VarList vars = base_;
    for (const auto& gs : t->gens_) vars.push_back(gs.name);
    t->ctx_ = make_ctx(std::move(vars));
    return t;
}

TowerRef Tower::extend_algebraic(const std::string& name, const RatExpr& poly_in_name) const {
    if (!poly_in_name.den().is_constant())
        throw std::invalid_argument("minimal polynomial must be polynomial in " + name);
    MPoly num = poly_in_name.num();
    Coeff dc = poly_in_name.den().constant_value();
    GenSpec g;
    g.name = name;
    g.transcendental = false;
    auto view = num.univariate_view(name);
    std::uint32_t d = num.degree_in(name);
    if (d == 0) throw std::invalid_argument("minimal polynomial constant in " + name);
    for (std::uint32_t k = 0; k <= d; ++k) {
        auto it = view.find(k);
        MPoly ck = it == view.end() ? MPoly(dom_, ctx_) : it->second;
        g.minpoly.push_back(RatExpr(ck, MPoly::constant(num.domain(), num.ctx(), dc)));
    }
    return extend(g);
}

TowerRef Tower::extend_transcendental(const std::string& name) const {
    return extend(GenSpec::trans(name));
}

TowerRef Tower::prefix(std::size_t ngens) const {
    auto t = std::shared_ptr<Tower>(new Tower());
    t->dom_ = dom_;
    t->base_ = base_;
    t->gens_.assign(gens_.begin(), gens_.begin() + static_cast<std::ptrdiff_t>(ngens));
    VarList vars = base_;
    for (const auto& gs : t->gens_) vars.push_back(gs.name);
    t->ctx_ = make_ctx(std::move(vars));
    return t;
}

int Tower::gen_index(const std::string& name) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name) return static_cast<int>(i);
    return -1;
}

bool Tower::has_symbol(const std::string& name) const {
    return std::find(ctx_->begin(), ctx_->end(), name) != ctx_->end();
}

bool Tower::same_presentation(const Tower& o) const {
    if (dom_ != o.dom_ || base_ != o.base_ || gens_.size() != o.gens_.size()) return false;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        const GenSpec &a = gens_[i], &b = o.gens_[i];
        if (a.name != b.name || a.transcendental != b.transcendental) return false;
        if (a.minpoly.size() != b.minpoly.size()) return false;
        for (std::size_t k = 0; k < a.minpoly.size(); ++k)
            if (!a.minpoly[k].same_value(b.minpoly[k])) return false;
    }
    return true;
}

bool same_tower(const TowerRef& a, const TowerRef& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->same_presentation(*b);
}

std::string Tower::to_string() const {
    std::ostringstream os;
    os << dom_.to_string() << "(";
    for (std::size_t i = 0; i < base_.size(); ++i) os << (i ? "," : "") << base_[i];
    os << ")";
    for (const auto& g : gens_) {
        os << "(" << g.name;
        if (!g.transcendental) os << " alg";
        os << ")";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Triangular reduction

// Reduces powers of generator i in p using its minimal polynomial; the
// accumulated denominator stays free of algebraic generators because stored
// minpoly coefficients are canonical.
MPoly Tower::reduce_in_gen(const MPoly& p, std::size_t i, MPoly& den_acc) const {
    const GenSpec& g = gens_[i];
    std::uint32_t d = g.degree();
    std::uint32_t dp = p.degree_in(g.name);
    if (dp < d) return p;

    MPoly one = MPoly::constant(dom_, ctx_, Coeff::one(dom_));
    // substitution g^d = -(c_0 + ... + c_{d-1} g^{d-1}) over a common denominator
    MPoly snum(dom_, ctx_), sden = one;
    for (std::uint32_t k = 0; k < d; ++k) sden = sden * g.minpoly[k].den().in_ctx(ctx_);
    MPoly gpow = MPoly::variable(dom_, ctx_, g.name);
    for (std::uint32_t k = 0; k < d; ++k) {
        MPoly part = -g.minpoly[k].num().in_ctx(ctx_);
        for (std::uint32_t j = 0; j < d; ++j)
            if (j != k) part = part * g.minpoly[j].den().in_ctx(ctx_);
        snum = snum + part * gpow.pow(k);
    }

    // power table for g^k, k = d..dp, each (num of degree < d, alg-free den)
    std::vector<std::pair<MPoly, MPoly>> pw;
    pw.emplace_back(snum, sden);
    for (std::uint32_t k = d; k < dp; ++k) {
        MPoly raised = pw.back().first * gpow;
        auto view = raised.univariate_view(g.name);
        MPoly head(dom_, ctx_), top(dom_, ctx_);
        for (const auto& [e, coeffp] : view) {
            if (e == d)
                top = coeffp;
            else
                head = head + coeffp * gpow.pow(e);
        }
        pw.emplace_back(head * sden + top * snum, pw.back().second * sden);
    }

    auto view = p.univariate_view(g.name);
    MPoly low(dom_, ctx_);
    MPoly acc_num(dom_, ctx_), acc_den = one;
    for (const auto& [e, coeffp] : view) {
        if (e < d) {
            low = low + coeffp * gpow.pow(e);
        } else {
            const auto& [pn, pd] = pw[e - d];
            acc_num = acc_num * pd + coeffp * pn * acc_den;
            acc_den = acc_den * pd;
        }
    }
    den_acc = den_acc * acc_den;
    return low * acc_den + acc_num;
}

RatExpr Tower::reduce_poly(const MPoly& p) const {
    MPoly num = p.in_ctx(ctx_);
    MPoly den = MPoly::constant(dom_, ctx_, Coeff::one(dom_));
    for (std::size_t i = gens_.size(); i-- > 0;) {
        if (gens_[i].transcendental) continue;
        num = reduce_in_gen(num, i, den);
    }
    return RatExpr(num, den);
}

RatExpr Tower::normal_form(const RatExpr& v) const {
    RatExpr rn = reduce_poly(v.num());
    RatExpr rd = reduce_poly(v.den());
    if (rd.num().is_zero()) throw std::domain_error("denominator is zero in the tower");
    RatExpr inv = invert_reduced(rd.num());
    RatExpr rp = reduce_poly(rn.num() * rd.den() * inv.num());
    return RatExpr(rp.num(), rp.den() * rn.den() * inv.den());
}

// ---------------------------------------------------------------------------
// Univariate polynomials over tower elements

int UPolyE::deg() const {
    for (std::size_t i = c.size(); i-- > 0;)
        if (!c[i].is_zero()) return static_cast<int>(i);
    return -1;
}

void UPolyE::trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

Element UPolyE::eval(const Element& x) const {
    Element acc = x.tower()->zero();
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

UPolyE UPolyE::derivative() const {
    UPolyE r;
    for (std::size_t k = 1; k < c.size(); ++k) {
        Element f = c[k].tower()->from_int(Int(k));
        r.c.push_back(c[k] * f);
    }
    r.trim();
    return r;
}

std::string UPolyE::to_string(const std::string& var) const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c.size(); i-- > 0;) {
        if (c[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << c[i].to_string() << ")";
        if (i == 1) os << "*" << var;
        if (i > 1) os << "*" << var << "^" << i;
    }
    if (first) os << "0";
    return os.str();
}

UPolyE upoly_sub(const UPolyE& a, const UPolyE& b) {
    UPolyE r = a;
    if (b.c.size() > r.c.size()) {
        const Element* any = nullptr;
        for (const auto& e : b.c)
            if (e.tower()) {
                any = &e;
                break;
            }
        r.c.resize(b.c.size(), any ? any->tower()->zero() : Element());
    }
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = r.c[i] - b.c[i];
    r.trim();
    return r;
}

UPolyE upoly_scale(const UPolyE& a, const Element& s) {
    UPolyE r;
    for (const auto& e : a.c) r.c.push_back(e * s);
    r.trim();
    return r;
}

UPolyE upoly_shift_mul(const UPolyE& a, const Element& s, std::size_t k) {
    UPolyE r;
    if (a.c.empty()) return r;
    r.c.assign(k, a.c[0].tower()->zero());
    for (const auto& e : a.c) r.c.push_back(e * s);
    r.trim();
    return r;
}

UPolyE upoly_mul(const UPolyE& a, const UPolyE& b) {
    UPolyE r;
    if (a.c.empty() || b.c.empty()) return r;
    Element z = a.c[0].tower()->zero();
    r.c.assign(a.c.size() + b.c.size() - 1, z);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    r.trim();
    return r;
}

std::pair<UPolyE, UPolyE> upoly_divrem(const UPolyE& a, const UPolyE& b) {
    int db = b.deg();
    if (db < 0) throw std::domain_error("division by zero polynomial");
    Element linv = b.c[static_cast<std::size_t>(db)].inv();
    UPolyE q, r = a;
    r.trim();
    Element z = b.c[static_cast<std::size_t>(db)].tower()->zero();
    int da = r.deg();
    if (da >= db) q.c.assign(static_cast<std::size_t>(da - db) + 1, z);
    while (r.deg() >= db) {
        int dr = r.deg();
        Element f = r.c[static_cast<std::size_t>(dr)] * linv;
        q.c[static_cast<std::size_t>(dr - db)] = q.c[static_cast<std::size_t>(dr - db)] + f;
        r = upoly_sub(r, upoly_shift_mul(b, f, static_cast<std::size_t>(dr - db)));
    }
    q.trim();
    return {q, r};
}

// ---------------------------------------------------------------------------
// Inversion (dynamic evaluation)

RatExpr Tower::invert_reduced(const MPoly& p) const {
    if (p.is_zero()) throw ZeroElement();
    int top = -1;
    for (std::size_t i = gens_.size(); i-- > 0;) {
        if (!gens_[i].transcendental && p.mentions(gens_[i].name)) {
            top = static_cast<int>(i);
            break;
        }
    }
    if (top < 0) {
        // polynomial in base indeterminates and transcendental generators:
        // flip the fraction
        return RatExpr(MPoly::constant(dom_, ctx_, Coeff::one(dom_)), p);
    }
    const GenSpec& g = gens_[static_cast<std::size_t>(top)];

    // coefficient field: the prefix below g plus the transcendental
    // generators above it
    TowerRef ct;
    {
        TowerRef acc = prefix(static_cast<std::size_t>(top));
        for (std::size_t i = static_cast<std::size_t>(top) + 1; i < gens_.size(); ++i)
            if (gens_[i].transcendental) acc = acc->extend_transcendental(gens_[i].name);
        ct = acc;
    }

    auto lift_to = [&](const MPoly& m) { return ct->elem(RatExpr(m.in_ctx(ct->ctx()))); };

    UPolyE u;
    {
        auto view = p.univariate_view(g.name);
        u.c.assign(p.degree_in(g.name) + 1, ct->zero());
        for (const auto& [e, coeffp] : view) u.c[e] = lift_to(coeffp);
        u.trim();
    }
    UPolyE m;
    for (const auto& c : g.minpoly) m.c.push_back(ct->elem(c.in_ctx(ct->ctx())));

    // extended Euclid tracking the u-side Bezout coefficient
    UPolyE r0 = m, r1 = u;
    UPolyE b0, b1;
    b0.c = {ct->zero()};
    b1.c = {ct->one()};
    while (r1.deg() > 0) {
        auto [q, r2] = upoly_divrem(r0, r1);
        UPolyE b2 = upoly_sub(b0, upoly_mul(q, b1));
        r0 = r1;
        r1 = r2;
        b0 = b1;
        b1 = b2;
    }
    if (r1.deg() < 0) {
        // gcd = r0 strictly divides the minimal polynomial
        Element lead = r0.c[static_cast<std::size_t>(r0.deg())];
        UPolyE monic = upoly_scale(r0, lead.inv());
        throw ReducibleMinPoly(g.name, monic.to_string(g.name));
    }
    Element scale = r1.c[0].inv();
    UPolyE binv = upoly_scale(b1, scale);

    // assemble sum binv[k] * g^k as a fraction over the full tower
    MPoly gpow = MPoly::variable(dom_, ctx_, g.name);
    MPoly accn(dom_, ctx_);
    MPoly accd = MPoly::constant(dom_, ctx_, Coeff::one(dom_));
    for (std::size_t k = 0; k < binv.c.size(); ++k) {
        const RatExpr& v = binv.c[k].value();
        MPoly n = v.num().in_ctx(ctx_), d = v.den().in_ctx(ctx_);
        accn = accn * d + n * accd * gpow.pow(static_cast<std::uint32_t>(k));
        accd = accd * d;
    }
    return RatExpr(accn, accd);
}

// ---------------------------------------------------------------------------
// Elements

Element Tower::elem(const RatExpr& v) const {
    return Element(shared_from_this(), normal_form(v.in_ctx(ctx_)));
}

Element Tower::minpoly_at(std::size_t i, const Element& x) const {
    const GenSpec& g = gens_[i];
    Element acc = x.tower()->zero();
    for (std::size_t k = g.minpoly.size(); k-- > 0;)
        acc = acc * x + x.tower()->elem(g.minpoly[k].in_ctx(x.tower()->ctx()));
    return acc;
}

Element Tower::minpoly_derivative_at(std::size_t i, const Element& x) const {
    const GenSpec& g = gens_[i];
    Element acc = x.tower()->zero();
    for (std::size_t k = g.minpoly.size(); k-- > 1;) {
        Element ck = x.tower()->elem(g.minpoly[k].in_ctx(x.tower()->ctx()));
        acc = acc * x + ck * x.tower()->from_int(Int(k));
    }
    return acc;
}

static void require_same_tower(const Element& a, const Element& b) {
    if (!same_tower(a.tower(), b.tower())) throw std::invalid_argument("elements of different towers");
}

bool Element::is_one() const { return (*this - tower_->one()).is_zero(); }

Element Element::operator+(const Element& o) const {
    require_same_tower(*this, o);
    return tower_->elem(val_ + o.val_);
}
Element Element::operator-(const Element& o) const {
    require_same_tower(*this, o);
    return tower_->elem(val_ - o.val_);
}
Element Element::operator*(const Element& o) const {
    require_same_tower(*this, o);
    return tower_->elem(val_ * o.val_);
}
Element Element::operator/(const Element& o) const { return *this * o.inv(); }

Element Element::operator-() const { return Element(tower_, -val_); }

Element Element::pow(std::uint32_t k) const {
    Element r = tower_->one();
    Element base = *this;
    while (k) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

Element Element::inv() const {
    if (is_zero()) throw ZeroElement();
    return tower_->elem(RatExpr(val_.den(), val_.num()));
}

bool Element::operator==(const Element& o) const {
    if (!same_tower(tower_, o.tower())) return false;
    return (*this - o).is_zero();
}

// ---------------------------------------------------------------------------
// p-th powers

namespace {

// component decomposition of a polynomial over the monomial basis T^beta of
// F_p(T) over F_p(T^p): exponents are split e = p*floor(e/p) + beta
std::map<Expvec, MPoly> beta_decompose(const MPoly& f, std::uint64_t p) {
    std::map<Expvec, MPoly> out;
    for (const auto& [e, c] : f.terms()) {
        Expvec beta(e.size()), main(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            beta[i] = e[i] % static_cast<std::uint32_t>(p);
            main[i] = e[i] - beta[i];
        }
        auto [it, fresh] = out.emplace(beta, MPoly(f.domain(), f.ctx()));
        it->second.add_term(main, c);
    }
    return out;
}

MPoly unfrobenius(const MPoly& f, std::uint64_t p) {
    MPoly r(f.domain(), f.ctx());
    for (const auto& [e, c] : f.terms()) {
        Expvec e2(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] % p != 0) throw std::logic_error("unfrobenius: exponent not divisible by p");
            e2[i] = e[i] / static_cast<std::uint32_t>(p);
        }
        r.add_term(e2, c);  // Frobenius is the identity on F_p coefficients
    }
    return r;
}

// plain Gaussian elimination over the rational function field; returns a
// particular solution (free variables set to 0) or nullopt if inconsistent
std::optional<std::vector<RatExpr>> solve_linear(std::vector<std::vector<RatExpr>> aug, std::size_t nvars,
                                                 CoeffDomain dom, const VarCtx& ctx) {
    std::size_t rows = aug.size();
    std::vector<int> pivot_col(rows, -1);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < nvars && rank < rows; ++col) {
        std::size_t sel = rows;
        for (std::size_t r = rank; r < rows; ++r) {
            if (!aug[r][col].is_zero()) {
                sel = r;
                break;
            }
        }
        if (sel == rows) continue;
        std::swap(aug[rank], aug[sel]);
        RatExpr inv = RatExpr::from_int(dom, ctx, 1) / aug[rank][col];
        for (std::size_t c = col; c <= nvars; ++c) aug[rank][c] = aug[rank][c] * inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || aug[r][col].is_zero()) continue;
            RatExpr f = aug[r][col];
            for (std::size_t c = col; c <= nvars; ++c) aug[r][c] = aug[r][c] - f * aug[rank][c];
        }
        pivot_col[rank] = static_cast<int>(col);
        ++rank;
    }
    for (std::size_t r = rank; r < rows; ++r)
        if (!aug[r][nvars].is_zero()) return std::nullopt;
    std::vector<RatExpr> sol(nvars, RatExpr(MPoly(dom, ctx)));
    for (std::size_t r = 0; r < rank; ++r) sol[static_cast<std::size_t>(pivot_col[r])] = aug[r][nvars];
    return sol;
}

}  // namespace

std::optional<Element> Tower::is_pth_power(const Element& e) const {
    std::uint64_t p = dom_.p;
    if (!p) throw UnsupportedTower("p-th power query in characteristic zero");
    if (e.is_zero()) return zero();

    // supported pattern: every algebraic generator has minpoly x^p - c with c
    // free of algebraic generators
    std::vector<std::size_t> alg;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        const GenSpec& g = gens_[i];
        if (g.transcendental) continue;
        if (g.degree() != p) throw UnsupportedTower("generator " + g.name + " not a p-th root adjunction");
        for (std::size_t k = 1; k < p; ++k)
            if (!g.minpoly[k].is_zero())
                throw UnsupportedTower("generator " + g.name + " not a p-th root adjunction");
        for (std::size_t j = 0; j < gens_.size(); ++j) {
            if (gens_[j].transcendental) continue;
            if (g.minpoly[0].num().mentions(gens_[j].name) || g.minpoly[0].den().mentions(gens_[j].name))
                throw UnsupportedTower("nested p-th root at generator " + g.name);
        }
        alg.push_back(i);
    }
    double count = 1;
    for (std::size_t j = 0; j < alg.size(); ++j) {
        count *= static_cast<double>(p);
        if (count > 4096) throw UnsupportedTower("too many p-th root generators");
    }

    // tower^p lies in the algebraic-generator-free part, so the (canonical)
    // numerator of a p-th power cannot mention the algebraic generators
    const MPoly& n = e.num();
    for (std::size_t i : alg)
        if (n.mentions(gens_[i].name)) return std::nullopt;

    std::size_t a = alg.size();
    std::size_t nunk = 1;
    for (std::size_t j = 0; j < a; ++j) nunk *= static_cast<std::size_t>(p);

    // c^alpha as fractions (alg-free)
    std::vector<RatExpr> calpha(nunk);
    std::vector<Expvec> alphas(nunk, Expvec(a, 0));
    for (std::size_t idx = 0; idx < nunk; ++idx) {
        std::size_t t = idx;
        RatExpr prod = RatExpr::from_int(dom_, ctx_, 1);
        for (std::size_t j = 0; j < a; ++j) {
            std::uint32_t aj = static_cast<std::uint32_t>(t % p);
            t /= p;
            alphas[idx][j] = aj;
            if (aj) {
                RatExpr c = -gens_[alg[j]].minpoly[0].in_ctx(ctx_);
                prod = prod * c.pow(aj);
            }
        }
        calpha[idx] = prod;
    }

    // clear denominators: Q = n * prod(B); P_idx = A_idx * den(e) * prod(B)/B_idx
    MPoly prodB = MPoly::constant(dom_, ctx_, Coeff::one(dom_));
    for (const auto& cr : calpha) prodB = prodB * cr.den();
    MPoly Q = n.in_ctx(ctx_) * prodB;
    std::vector<MPoly> P;
    for (std::size_t idx = 0; idx < nunk; ++idx) {
        MPoly others = e.den().in_ctx(ctx_);
        for (std::size_t j = 0; j < nunk; ++j)
            if (j != idx) others = others * calpha[j].den();
        P.push_back(calpha[idx].num() * others);
    }

    // assemble the linear system per beta component and un-Frobenius it
    auto qcomp = beta_decompose(Q, p);
    std::vector<std::map<Expvec, MPoly>> pcomp;
    std::map<Expvec, bool> betas;
    for (const auto& [b, f] : qcomp) betas[b] = true;
    for (const auto& f : P) {
        pcomp.push_back(beta_decompose(f, p));
        for (const auto& [b, g] : pcomp.back()) betas[b] = true;
    }
    std::vector<std::vector<RatExpr>> aug;
    for (const auto& [b, used] : betas) {
        std::vector<RatExpr> row;
        for (std::size_t idx = 0; idx < nunk; ++idx) {
            auto it = pcomp[idx].find(b);
            MPoly comp = it == pcomp[idx].end() ? MPoly(dom_, ctx_) : it->second;
            row.push_back(RatExpr(unfrobenius(comp, p)));
        }
        auto itq = qcomp.find(b);
        MPoly qc = itq == qcomp.end() ? MPoly(dom_, ctx_) : itq->second;
        row.push_back(RatExpr(unfrobenius(qc, p)));
        aug.push_back(std::move(row));
    }
    auto sol = solve_linear(std::move(aug), nunk, dom_, ctx_);
    if (!sol) return std::nullopt;

    RatExpr acc(MPoly(dom_, ctx_));
    for (std::size_t idx = 0; idx < nunk; ++idx) {
        if ((*sol)[idx].is_zero()) continue;
        MPoly mono = MPoly::constant(dom_, ctx_, Coeff::one(dom_));
        for (std::size_t j = 0; j < a; ++j)
            if (alphas[idx][j])
                mono = mono * MPoly::variable(dom_, ctx_, gens_[alg[j]].name).pow(alphas[idx][j]);
        acc = acc + (*sol)[idx] * RatExpr(mono);
    }
    Element root = elem(acc);
    if (!(root.pow(static_cast<std::uint32_t>(p)) == e)) return std::nullopt;
    return root;
}

}  // namespace kolchin
