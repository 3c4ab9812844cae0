#include "vcoh/eproduct.hpp"

#include <random>
#include <set>

namespace vcoh {

void ExclusionList::validate(int k, int n) const
{
    if (t < 0) throw Error(ErrorKind::InvalidInput, "shared operator count t must be >= 0");
    std::set<int> xs, ys;
    for (auto [i, j] : pairs) {
        if (i < 1 || i > k || j < 1 || j > n) throw Error(ErrorKind::InvalidInput, "exclusion pair out of range");
        if (!xs.insert(i).second || !ys.insert(j).second)
            throw Error(ErrorKind::InvalidInput, "exclusion pairs must be disjoint per coordinate");
    }
}

namespace {

void require_usable(const Cochain& c, const char* what)
{
    if (c.flags().any_failed())
        throw Error(ErrorKind::ValidationFailure, std::string(what) + ": a membership flag is Failed");
    if (c.params() != 0) throw Error(ErrorKind::InvalidInput, std::string(what) + ": factors must not carry parameters");
}

// <w', Y_WV(F(..), zeta) u> = sum_j zeta^j/j! <(L(-1)^dagger)^j w', Y(u, -zeta) F(..)>.
// With t = -zeta the second pairing is the left composition at z_1 = t.
RatFunc factor(const Cochain& left, const FockState& wp, const FockState& u, const std::vector<FockState>& rest,
               const std::vector<int>& map, int N)
{
    const VertexAlgebra& va = left.algebra();
    const Q& lam2 = left.engine().lam2();
    int tvar = map[0];
    RatFunc out(N);
    ModuleVector bra(wp);
    Q scale = 1;
    std::vector<FockState> args{u};
    args.insert(args.end(), rest.begin(), rest.end());
    for (int j = 0; !bra.is_zero(); ++j) {
        if (j > 0) {
            bra = va.virasoro(1, bra) * (Q(-1) / lam2);
            scale /= -j;   // (-t)^j / j!
        }
        Exps e(N, 0);
        e[tvar] = j;
        Poly tj = Poly::monomial(N, e, scale);
        for (auto& [x, cx] : bra.components()) {
            RatFunc f = left.pair(x, args);
            if (!f.is_zero()) out += f.embed(N, map) * tj * cx;
        }
    }
    return out;
}

class EpsImpl : public CochainImpl {
public:
    EpsImpl(const Cochain& phi, const Cochain& psi, const ExclusionList& ex, int l, const Matrix* change)
        : CochainImpl(phi.degree() + psi.degree() - ex.r(), 2, phi.engine()),
          phi_(phi), psi_(psi), lphi_(left_compose(phi)), lpsi_(left_compose(psi)), ex_(ex), l_(l)
    {
        const VertexAlgebra& va = algebra();
        const Q& lam2 = engine().lam2();
        int d = static_cast<int>(va.basis(l).size());
        P_ = change ? *change : Matrix::identity(d);
        if (P_.rows != d || P_.cols != d) throw Error(ErrorKind::InvalidInput, "basis change has the wrong size");
        // u'_b = sum_c P(c,b) u_c, Gram P^T G P, dual matrix its inverse
        Dp_ = inverse(P_.transpose() * va.gram(l, lam2) * P_);
    }
    std::string kind() const override
    {
        return "[" + phi_.kind() + "] ._eps^" + std::to_string(l_) + " [" + psi_.kind() + "]";
    }
    bool is_zero() const override { return phi_.is_zero_kind() || psi_.is_zero_kind(); }
    int ket_weight() const override
    {
        return std::max({l_, phi_.impl().ket_weight(), psi_.impl().ket_weight()});
    }
    int axis_bound(const FockState& v) const override { return v.weight() + std::max(ket_weight(), 0); }
    int param_bound(const FockState& v, int) const override { return v.weight() + l_; }

protected:
    RatFunc compute(const FockState& wp, const std::vector<FockState>& in) const override
    {
        int N = nvars();
        if (is_zero()) return RatFunc(N);
        int k = phi_.degree(), n = psi_.degree();
        int F = k + n + 2;
        std::vector<FockState> xin(in.begin(), in.begin() + k), yin(n);
        std::vector<int> excluded(n, 0);
        for (auto [i, j] : ex_.pairs) {
            yin[j - 1] = in[i - 1];
            excluded[j - 1] = 1;
        }
        int next = k;
        for (int j = 0; j < n; ++j)
            if (!excluded[j]) yin[j] = in[next++];

        std::vector<int> m1(k + 1), m2(n + 1);
        m1[0] = k + n;
        for (int i = 0; i < k; ++i) m1[i + 1] = i;
        m2[0] = k + n + 1;
        for (int j = 0; j < n; ++j) m2[j + 1] = k + j;

        const auto& B = algebra().basis(l_);
        int d = static_cast<int>(B.size());
        std::vector<RatFunc> f1, f2;
        for (auto& u : B) {
            f1.push_back(factor(lphi_, wp, u, xin, m1, F));
            f2.push_back(factor(lpsi_, wp, u, yin, m2, F));
        }
        // values on the changed basis
        auto change = [&](const std::vector<RatFunc>& f) {
            std::vector<RatFunc> g(d, RatFunc(F));
            for (int b = 0; b < d; ++b)
                for (int c = 0; c < d; ++c)
                    if (P_(c, b) != 0 && !f[c].is_zero()) g[b] += f[c] * P_(c, b);
            return g;
        };
        std::vector<RatFunc> g1 = change(f1), g2 = change(f2);
        // ubar'_b = sum_a D'(a,b) u'_a
        RatFunc sum(F);
        for (int b = 0; b < d; ++b) {
            if (g1[b].is_zero()) continue;
            RatFunc bar(F);
            for (int a = 0; a < d; ++a)
                if (Dp_(a, b) != 0 && !g2[a].is_zero()) bar += g2[a] * Dp_(a, b);
            if (!bar.is_zero()) sum += g1[b] * bar;
        }
        return identify_and_exclude(sum, k, ex_.pairs);
    }

private:
    Cochain phi_, psi_, lphi_, lpsi_;
    ExclusionList ex_;
    int l_;
    Matrix P_, Dp_;
};

class LiftImpl : public CochainImpl {
public:
    explicit LiftImpl(const Cochain& c) : CochainImpl(c.degree(), 2, c.engine()), c_(c) {}
    std::string kind() const override { return c_.kind(); }
    bool is_zero() const override { return c_.is_zero_kind(); }
    int ket_weight() const override { return c_.impl().ket_weight(); }
    int axis_bound(const FockState& v) const override { return c_.impl().axis_bound(v); }
    int diff_bound(const FockState& a, const FockState& b) const override { return c_.impl().diff_bound(a, b); }

protected:
    RatFunc compute(const FockState& wp, const std::vector<FockState>& in) const override
    {
        std::vector<int> map(degree());
        for (int i = 0; i < degree(); ++i) map[i] = i;
        return c_.pair(wp, in).embed(nvars(), map);
    }

private:
    Cochain c_;
};

}  // namespace

EpsSeries constant_series(const Cochain& c, int L)
{
    if (c.params() != 0) throw Error(ErrorKind::InvalidInput, "only parameter-free cochains lift to a series");
    EpsSeries s;
    s.order = L;
    s.degree = c.degree();
    s.m = c.m();
    auto p = std::make_shared<LiftImpl>(c);
    p->K = c.cutoff();
    p->m = c.m();
    s.coeffs.emplace(0, Cochain(p));
    for (int l = 1; l <= L; ++l) s.coeffs.emplace(l, zero_cochain(c.degree(), c.m(), c.engine(), 2));
    return s;
}

const Cochain& EpsSeries::at(int l) const
{
    auto it = coeffs.find(l);
    if (it == coeffs.end()) throw Error(ErrorKind::CutoffExceeded, "epsilon order beyond the truncation");
    return it->second;
}

namespace {

EpsSeries combine(const EpsSeries& a, const EpsSeries& b, const Q& cb)
{
    if (a.degree != b.degree || a.order != b.order)
        throw Error(ErrorKind::InvalidInput, "epsilon series of different shape");
    EpsSeries s = a;
    s.m = std::min(a.m, b.m);
    for (auto& [l, c] : b.coeffs) {
        auto it = s.coeffs.find(l);
        if (it == s.coeffs.end())
            s.coeffs.emplace(l, c * cb);
        else
            it->second = linear_combination({{1, it->second}, {cb, c}}).with_slot(s.m);
    }
    return s;
}

}  // namespace

EpsSeries EpsSeries::operator-(const EpsSeries& o) const { return combine(*this, o, -1); }
EpsSeries EpsSeries::operator+(const EpsSeries& o) const { return combine(*this, o, 1); }

EpsSeries EpsSeries::operator*(const Q& c) const
{
    EpsSeries s = *this;
    for (auto& [l, f] : s.coeffs) f = (f * c).with_slot(m);
    return s;
}

Q EpsSeries::value(const FockState& wp, const std::vector<FockState>& in, const std::vector<Q>& point,
                   const Q& eps) const
{
    std::vector<Q> pt = point;
    if (policy == ZetaPolicy::Pinched) {
        if (static_cast<int>(pt.size()) != nvars() - 1) throw Error(ErrorKind::InvalidInput, "pinched point size");
        if (pt.back() == 0) throw Error(ErrorKind::DomainViolation, "zeta_1 = 0 under the pinch");
        pt.push_back(eps / pt.back());
    }
    if (static_cast<int>(pt.size()) != nvars()) throw Error(ErrorKind::InvalidInput, "point size");
    Q s = 0, e = 1;
    for (int l = 0; l <= order; ++l, e *= eps) {
        auto it = coeffs.find(l);
        if (it != coeffs.end()) s += it->second.pair(wp, in).eval(pt) * e;
    }
    return s;
}

nlohmann::json EpsSeries::to_json(const std::vector<FockState>& in, int dual_cutoff) const
{
    nlohmann::json c = nlohmann::json::object();
    std::vector<ModuleVector> mv(in.begin(), in.end());
    for (auto& [l, f] : coeffs) c[std::to_string(l)] = f.evaluate(mv, dual_cutoff).to_json();
    std::vector<std::string> ins;
    for (auto& v : in) ins.push_back(v.str());
    return {{"order", order},
            {"zeta_policy", policy == ZetaPolicy::Independent ? "independent" : "pinched"},
            {"variables", "x.., y.. (excluded removed), t1 = -zeta1, t2 = -zeta2"},
            {"slot", {{"n", degree}, {"m", m}}},
            {"inputs", ins},
            {"coefficients", c}};
}

EpsSeries eps_product(const Cochain& phi, const Cochain& psi, const ExclusionList& excl, int L,
                      const std::map<int, Matrix>& basis_change)
{
    require_usable(phi, "eps_product");
    require_usable(psi, "eps_product");
    if (&phi.engine() != &psi.engine()) throw Error(ErrorKind::InvalidInput, "factors over different instances");
    if (L < 0) throw Error(ErrorKind::InvalidInput, "negative truncation order");
    excl.validate(phi.degree(), psi.degree());
    int slot_m = phi.m() + psi.m() - excl.t;
    if (slot_m < 0) throw Error(ErrorKind::DomainViolation, "more shared operators than the factors carry");
    EpsSeries s;
    s.order = L;
    s.degree = phi.degree() + psi.degree() - excl.r();
    s.m = slot_m;
    for (int l = 0; l <= L; ++l) {
        auto it = basis_change.find(l);
        auto p = std::make_shared<EpsImpl>(phi, psi, excl, l, it == basis_change.end() ? nullptr : &it->second);
        p->K = std::min(phi.cutoff(), psi.cutoff());
        p->m = slot_m;
        s.coeffs.emplace(l, Cochain(p));
    }
    return s;
}

std::map<int, Matrix> random_basis_change(const VertexAlgebra& va, int L, std::uint64_t seed)
{
    std::mt19937_64 g(seed);
    std::uniform_int_distribution<int> c(-2, 2);
    std::map<int, Matrix> out;
    for (int l = 0; l <= L; ++l) {
        int d = static_cast<int>(va.basis(l).size());
        Matrix P(d, d);
        do {
            for (auto& x : P.a) x = c(g);
        } while (determinant(P) == 0);
        out.emplace(l, P);
    }
    return out;
}

CheckReport check_equal(const EpsSeries& a, const EpsSeries& b, const Scope& sc)
{
    return check_zero(a - b, sc);
}

CheckReport check_basis_independence(const Cochain& phi, const Cochain& psi, const ExclusionList& excl, int L,
                                     std::uint64_t seed, const Scope& sc)
{
    EpsSeries a = eps_product(phi, psi, excl, L);
    EpsSeries b = eps_product(phi, psi, excl, L, random_basis_change(phi.algebra(), L, seed));
    CheckReport r = check_equal(a, b, sc);
    if (!r.ok) r.witness = "basis dependence: " + r.witness;
    return r;
}

EpsSeries sigma_act_product(const Permutation& sigma, const EpsSeries& s)
{
    if (sigma.size() != s.degree) throw Error(ErrorKind::InvalidInput, "permutation size does not match the product");
    EpsSeries out = s;
    for (auto& [l, f] : out.coeffs) f = sigma_act(sigma, f);
    return out;
}

EpsSeries commutator(const Cochain& phi, const Cochain& psi, const ExclusionList& excl, int L)
{
    ExclusionList swapped = excl;
    for (auto& [i, j] : swapped.pairs) std::swap(i, j);
    return eps_product(phi, psi, excl, L) - eps_product(psi, phi, swapped, L);
}

CheckReport check_zero(const EpsSeries& s, const Scope& sc)
{
    CheckReport rep;
    for (auto& [l, f] : s.coeffs) {
        CheckReport r = check_zero(f, sc);
        rep.checked += r.checked;
        rep.skipped += r.skipped;
        if (!r.ok && rep.ok) rep.fail("eps^" + std::to_string(l) + ": " + r.witness);
    }
    return rep;
}

nlohmann::json LeibnizReport::to_json() const
{
    return {{"k", k}, {"n", n}, {"r", r}, {"sign", sign},
            {"slot", {{"n", slot_n}, {"m", slot_m}}}, {"result", result.to_json()}};
}

LeibnizReport check_leibniz(const Cochain& phi, const Cochain& psi, const ExclusionList& excl, int L,
                            const Scope& sc)
{
    LeibnizReport rep;
    rep.k = phi.degree();
    rep.n = psi.degree();
    rep.r = excl.r();
    rep.sign = rep.k % 2 ? -1 : 1;
    EpsSeries prod = eps_product(phi, psi, excl, L);
    rep.slot_n = prod.degree;
    rep.slot_m = prod.m;
    if (phi.m() < 1 || psi.m() < 1 || prod.m < 1)
        throw Error(ErrorKind::DomainViolation, "the Leibniz law needs m >= 1 on both factors and the product");
    // the pairs keep their positions in the coboundaries of the factors
    EpsSeries right1 = eps_product(delta(phi), psi, excl, L);
    EpsSeries right2 = eps_product(phi, delta(psi), excl, L);
    for (int l = 0; l <= L; ++l) {
        Cochain lhs = delta(prod.at(l));
        Cochain rhs = linear_combination({{1, right1.at(l)}, {Q(rep.sign), right2.at(l)}});
        CheckReport r = check_zero(lhs - rhs, sc);
        rep.result.checked += r.checked;
        rep.result.skipped += r.skipped;
        if (!r.ok && rep.result.ok) rep.result.fail("eps^" + std::to_string(l) + ": " + r.witness);
    }
    return rep;
}

}  // namespace vcoh
