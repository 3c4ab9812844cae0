#include "vcoh/cochains.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace vcoh {

std::string flag_str(Flag f)
{
    switch (f) {
        case Flag::Verified: return "verified";
        case Flag::Failed: return "failed";
        default: return "unchecked";
    }
}

Flag flag_parse(const std::string& s)
{
    if (s == "verified") return Flag::Verified;
    if (s == "failed") return Flag::Failed;
    if (s == "unchecked") return Flag::Unchecked;
    throw Error(ErrorKind::Parse, "unknown flag '" + s + "'");
}

bool Flags::any_failed() const
{
    return lder == Flag::Failed || l0 == Flag::Failed || shuffle == Flag::Failed || composable == Flag::Failed;
}

void CheckReport::fail(const std::string& w)
{
    if (ok) witness = w;
    ok = false;
}

nlohmann::json CheckReport::to_json() const
{
    nlohmann::json j = {{"ok", ok}, {"checked", checked}, {"skipped", skipped}};
    if (!ok) j["witness"] = witness;
    return j;
}

std::vector<FockState> states_up_to(const VertexAlgebra& va, int max_weight)
{
    std::vector<FockState> out;
    for (int l = 0; l <= max_weight; ++l)
        for (auto& s : va.basis(l)) out.push_back(s);
    return out;
}

std::vector<std::vector<FockState>> input_tuples(const VertexAlgebra& va, int n, const Scope& sc)
{
    std::vector<FockState> st = states_up_to(va, sc.input_cutoff);
    std::vector<std::vector<FockState>> out;
    auto fits = [&](const std::vector<FockState>& t) {
        if (sc.max_total < 0) return true;
        int w = 0;
        for (auto& v : t) w += v.weight();
        return w <= sc.max_total;
    };
    double total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<double>(st.size());
    if (sc.sample <= 0 || total <= 4096) {
        std::vector<size_t> idx(n, 0);
        while (true) {
            std::vector<FockState> t;
            for (int i = 0; i < n; ++i) t.push_back(st[idx[i]]);
            if (fits(t)) out.push_back(t);
            int k = n - 1;
            while (k >= 0 && ++idx[k] == st.size()) idx[k--] = 0;
            if (k < 0) break;
        }
        if (sc.sample > 0 && static_cast<int>(out.size()) > sc.sample) {
            std::mt19937_64 g(sc.seed);
            std::shuffle(out.begin(), out.end(), g);
            out.resize(sc.sample);
        }
        return out;
    }
    std::mt19937_64 g(sc.seed);
    std::uniform_int_distribution<size_t> d(0, st.size() - 1);
    for (int k = 0, tries = 0; k < sc.sample && tries < 1000 * sc.sample; ++tries) {
        std::vector<FockState> t;
        for (int i = 0; i < n; ++i) t.push_back(st[d(g)]);
        if (!fits(t)) continue;
        out.push_back(t);
        ++k;
    }
    return out;
}

const Correlators& default_correlators()
{
    static Correlators c(default_instance(), 1);
    return c;
}

namespace {

std::string tuple_str(const FockState& wp, const std::vector<FockState>& in)
{
    std::string s = "w'=" + wp.str() + " (";
    for (size_t i = 0; i < in.size(); ++i) s += (i ? ", " : "") + in[i].str();
    return s + ")";
}

Permutation extend(const Permutation& s, int total)
{
    std::vector<int> img = s.img;
    for (int i = s.size(); i < total; ++i) img.push_back(i);
    return Permutation(img);
}

Q ipow(const Q& b, int e)
{
    Q r = 1;
    for (int i = 0; i < std::abs(e); ++i) r *= b;
    return e < 0 ? Q(1 / r) : r;
}

// oscillator-number power N^p on a basis state
Q number_power(const FockState& s, int p)
{
    return ipow(Q(s.length()), p);
}

}  // namespace

RatFunc CochainImpl::pair(const FockState& wp, const std::vector<FockState>& in) const
{
    if (static_cast<int>(in.size()) != degree_)
        throw Error(ErrorKind::InvalidInput, kind() + " expects " + std::to_string(degree_) + " inputs");
    int il = input_limit(), dl = dual_limit();
    for (auto& v : in)
        if (il >= 0 && v.weight() > il)
            throw Error(ErrorKind::CutoffExceeded, "input " + v.str() + " above the table cutoff " + std::to_string(il));
    if (dl >= 0 && wp.weight() > dl)
        throw Error(ErrorKind::CutoffExceeded, "dual state " + wp.str() + " above the table cutoff " + std::to_string(dl));
    std::vector<FockState> key;
    key.reserve(in.size() + 1);
    key.push_back(wp);
    key.insert(key.end(), in.begin(), in.end());
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    RatFunc r = compute(wp, in);
    std::lock_guard<std::mutex> lk(mu_);
    memo_.emplace(key, r);
    return r;
}

int CochainImpl::axis_bound(const FockState& v) const
{
    int k = ket_weight();
    return k < 0 ? 0 : v.weight() + k;
}

int CochainImpl::diff_bound(const FockState& a, const FockState& b) const
{
    return algebra().pole_bound(a, b);
}

int CochainImpl::param_bound(const FockState&, int) const
{
    return 0;
}

namespace {

class ZeroImpl : public CochainImpl {
public:
    using CochainImpl::CochainImpl;
    std::string kind() const override { return "zero"; }
    bool is_zero() const override { return true; }

protected:
    RatFunc compute(const FockState&, const std::vector<FockState>&) const override { return RatFunc(nvars()); }
};

class VectorImpl : public CochainImpl {
public:
    VectorImpl(const ModuleVector& w, const Correlators& eng) : CochainImpl(0, 0, eng), w_(w) {}
    std::string kind() const override { return "vector " + w_.str(); }
    bool is_zero() const override { return w_.is_zero(); }
    int ket_weight() const override { return w_.max_weight() <= 0 ? -1 : w_.max_weight(); }

protected:
    RatFunc compute(const FockState& wp, const std::vector<FockState>&) const override
    {
        return RatFunc::constant(0, algebra().bilinear_form(ModuleVector(wp), w_, engine().lam2()));
    }

private:
    ModuleVector w_;
};

class EBuiltImpl : public CochainImpl {
public:
    EBuiltImpl(std::vector<int> p, int q, const ModuleVector& w, const Correlators& eng)
        : CochainImpl(static_cast<int>(p.size()), 0, eng), p_(std::move(p)), q_(q), w_(w)
    {
    }
    std::string kind() const override
    {
        std::string s = "E(" + std::to_string(degree()) + ";" + w_.str() + ")";
        bool dec = q_ != 0;
        for (int x : p_) dec = dec || x != 0;
        if (dec) {
            s += " N^" + std::to_string(q_) + " [";
            for (size_t i = 0; i < p_.size(); ++i) s += (i ? "," : "") + std::to_string(p_[i]);
            s += "]";
        }
        return s;
    }
    bool is_zero() const override { return w_.is_zero(); }
    int ket_weight() const override { return w_.max_weight() <= 0 ? -1 : w_.max_weight(); }

protected:
    RatFunc compute(const FockState& wp, const std::vector<FockState>& in) const override
    {
        Q c = number_power(wp, q_);
        for (size_t i = 0; i < in.size(); ++i) c *= number_power(in[i], p_[i]);
        if (c == 0) return RatFunc(nvars());
        std::vector<ModuleVector> vs;
        for (auto& v : in) vs.emplace_back(v);
        return engine().matrix_element(ModuleVector(wp), vs, w_) * c;
    }

private:
    std::vector<int> p_;
    int q_;
    ModuleVector w_;
};

class CombImpl : public CochainImpl {
public:
    CombImpl(std::vector<std::pair<Q, Cochain>> t, int degree, int params, const Correlators& eng)
        : CochainImpl(degree, params, eng), t_(std::move(t))
    {
    }
    std::string kind() const override
    {
        if (t_.size() == 1 && t_[0].first == 1) return t_[0].second.kind();
        std::string s;
        for (size_t i = 0; i < t_.size() && i < 4; ++i) s += (i ? " + " : "") + q_str(t_[i].first) + "*[" + t_[i].second.kind() + "]";
        if (t_.size() > 4) s += " + ...";
        return s.empty() ? "zero" : s;
    }
    bool is_zero() const override
    {
        for (auto& [c, f] : t_)
            if (c != 0 && !f.is_zero_kind()) return false;
        return true;
    }
    int ket_weight() const override
    {
        int k = -1;
        for (auto& [c, f] : t_) k = std::max(k, f.impl().ket_weight());
        return k;
    }
    int axis_bound(const FockState& v) const override
    {
        int k = 0;
        for (auto& [c, f] : t_) k = std::max(k, f.impl().axis_bound(v));
        return k;
    }
    int diff_bound(const FockState& a, const FockState& b) const override
    {
        int k = 0;
        for (auto& [c, f] : t_) k = std::max(k, f.impl().diff_bound(a, b));
        return k;
    }
    int param_bound(const FockState& v, int p) const override
    {
        int k = 0;
        for (auto& [c, f] : t_) k = std::max(k, f.impl().param_bound(v, p));
        return k;
    }
    int input_limit() const override
    {
        int k = -1;
        for (auto& [c, f] : t_) {
            int l = f.impl().input_limit();
            if (l >= 0) k = k < 0 ? l : std::min(k, l);
        }
        return k;
    }
    int dual_limit() const override
    {
        int k = -1;
        for (auto& [c, f] : t_) {
            int l = f.impl().dual_limit();
            if (l >= 0) k = k < 0 ? l : std::min(k, l);
        }
        return k;
    }

protected:
    RatFunc compute(const FockState& wp, const std::vector<FockState>& in) const override
    {
        RatFunc r(nvars());
        for (auto& [c, f] : t_)
            if (c != 0) r += f.pair(wp, in) * c;
        return r;
    }

private:
    std::vector<std::pair<Q, Cochain>> t_;
};

class SigmaImpl : public CochainImpl {
public:
    SigmaImpl(const Permutation& s, const Cochain& phi)
        : CochainImpl(phi.degree(), phi.params(), phi.engine()), s_(s), phi_(phi), ext_(extend(s, phi.nvars()))
    {
    }
    std::string kind() const override { return s_.str() + "[" + phi_.kind() + "]"; }
    bool is_zero() const override { return phi_.is_zero_kind(); }
    int ket_weight() const override { return phi_.impl().ket_weight(); }
    int axis_bound(const FockState& v) const override { return phi_.impl().axis_bound(v); }
    int diff_bound(const FockState& a, const FockState& b) const override { return phi_.impl().diff_bound(a, b); }
    int param_bound(const FockState& v, int p) const override { return phi_.impl().param_bound(v, p); }
    int input_limit() const override { return phi_.impl().input_limit(); }
    int dual_limit() const override { return phi_.impl().dual_limit(); }

protected:
    RatFunc compute(const FockState& wp, const std::vector<FockState>& in) const override
    {
        std::vector<FockState> moved(in.size());
        for (size_t k = 0; k < in.size(); ++k) moved[k] = in[s_(static_cast<int>(k))];
        return phi_.pair(wp, moved).permute(ext_);
    }

private:
    Permutation s_;
    Cochain phi_;
    Permutation ext_;
};

class TableImpl : public CochainImpl {
public:
    TableImpl(int degree, int params, int K, int dual, int ket, const Correlators& eng)
        : CochainImpl(degree, params, eng), K_(K), dual_(dual), ket_(ket)
    {
    }
    std::string kind() const override { return "table"; }
    int ket_weight() const override { return ket_; }
    int input_limit() const override { return K_; }
    int dual_limit() const override { return dual_; }

    std::map<std::vector<FockState>, RatFunc> entries;

protected:
    RatFunc compute(const FockState& wp, const std::vector<FockState>& in) const override
    {
        std::vector<FockState> key{wp};
        key.insert(key.end(), in.begin(), in.end());
        auto it = entries.find(key);
        return it == entries.end() ? RatFunc(nvars()) : it->second;
    }

private:
    int K_, dual_, ket_;
};

// <w', Y(v_0, z_1) Phi(v_1..v_n)(z_2..)> reconstructed from its expansion at z_1 = infinity
class LeftImpl : public CochainImpl {
public:
    explicit LeftImpl(const Cochain& phi) : CochainImpl(phi.degree() + 1, phi.params(), phi.engine()), phi_(phi) {}
    std::string kind() const override { return "Y o [" + phi_.kind() + "]"; }
    bool is_zero() const override { return phi_.is_zero_kind(); }
    int ket_weight() const override { return phi_.impl().ket_weight(); }
    int axis_bound(const FockState& v) const override { return phi_.impl().axis_bound(v); }
    int diff_bound(const FockState& a, const FockState& b) const override { return phi_.impl().diff_bound(a, b); }
    int param_bound(const FockState& v, int p) const override { return phi_.impl().param_bound(v, p); }

protected:
    RatFunc compute(const FockState& wp, const std::vector<FockState>& in) const override
    {
        int N = nvars();
        if (phi_.is_zero_kind()) return RatFunc(N);
        const FockState& v0 = in[0];
        std::vector<FockState> rest(in.begin() + 1, in.end());
        const CochainImpl& P = phi_.impl();
        std::vector<int> d(N, 0);
        for (size_t j = 0; j < rest.size(); ++j) d[j + 1] = P.diff_bound(v0, rest[j]);
        for (int p = 0; p < params(); ++p) d[degree() + p] = P.param_bound(v0, p);
        int a = P.axis_bound(v0);
        int top = wp.weight() - v0.weight();
        int lo = lowest_needed_at_infinity(a, d, top);
        std::vector<int> shift(phi_.nvars());
        for (int j = 0; j < phi_.nvars(); ++j) shift[j] = j + 1;
        std::map<int, RatFunc> coeffs;
        for (int s = 0; s <= top - lo; ++s) {
            const auto& x = engine().dual_expansion(wp, v0, s);
            RatFunc g(N);
            for (auto& [b, c] : x) {
                RatFunc f = phi_.pair(b, rest);
                if (!f.is_zero()) g += f.embed(N, shift) * c;
            }
            if (!g.is_zero()) coeffs.emplace(top - s, g);
        }
        return reconstruct_at_infinity(0, coeffs, a, d, top, N);
    }

private:
    Cochain phi_;
};

ModuleVector lder_apply(const VertexAlgebra& va, ModuleVector v, int times)
{
    for (int i = 0; i < times; ++i) v = va.virasoro(-1, v);
    return v;
}

// Phi(.., Y(v_i, z_i - z_{i+1}) v_{i+1}, ..) reconstructed around z_i = z_{i+1}
class PointImpl : public CochainImpl {
public:
    PointImpl(const Cochain& phi, int i, int lp, int sp)
        : CochainImpl(phi.degree() + 1, phi.params(), phi.engine()), phi_(phi), i_(i), lp_(lp), sp_(sp)
    {
        if (i < 0 || i >= phi.degree()) throw Error(ErrorKind::InvalidInput, "composition slot out of range");
    }
    std::string kind() const override { return "[" + phi_.kind() + "] o_" + std::to_string(i_ + 1) + " Y"; }
    bool is_zero() const override { return phi_.is_zero_kind(); }
    int ket_weight() const override { return phi_.impl().ket_weight(); }
    int axis_bound(const FockState& v) const override { return phi_.impl().axis_bound(v); }
    int diff_bound(const FockState& a, const FockState& b) const override { return phi_.impl().diff_bound(a, b); }
    int param_bound(const FockState& v, int p) const override { return phi_.impl().param_bound(v, p); }

protected:
    RatFunc compute(const FockState& wp, const std::vector<FockState>& in) const override
    {
        int N = nvars();
        if (phi_.is_zero_kind()) return RatFunc(N);
        const CochainImpl& P = phi_.impl();
        const FockState& a = in[i_];
        const FockState& b = in[i_ + 1];
        std::vector<int> d(N, 0);
        for (int j = 0; j < degree(); ++j)
            if (j != i_) d[j] = P.diff_bound(a, in[j]) + lp_ + sp_;   // derivatives raise the other poles
        d[i_ + 1] = algebra().pole_bound(a, b);
        for (int p = 0; p < params(); ++p) d[degree() + p] = P.param_bound(a, p) + lp_ + sp_;
        int ax = P.axis_bound(a);
        if (ax > 0) ax += lp_ + sp_;
        int top = wp.weight() - a.weight();
        int hi = highest_needed_at_point(ax, d, top);
        // variables of Phi: slot j < i -> z_j, slot i -> z_{i+1}, slot j > i -> z_{j+1}
        std::vector<int> map(phi_.nvars());
        for (int j = 0; j < phi_.nvars(); ++j) map[j] = j < i_ ? j : j + 1;
        std::vector<ModuleVector> args;
        for (int j = 0; j < degree(); ++j)
            if (j != i_ && j != i_ + 1) args.emplace_back(in[j]);
        std::map<int, RatFunc> coeffs;
        int kmax = a.weight() + b.weight() - 1;
        for (int k = kmax; -k - 1 <= hi; --k) {
            ModuleVector st = lder_apply(algebra(), algebra().vertex_mode(ModuleVector(a), k, ModuleVector(b)), lp_);
            if (st.is_zero()) continue;
            std::vector<ModuleVector> full = args;
            full.insert(full.begin() + i_, st);
            RatFunc f = phi_.pair(ModuleVector(wp), full);
            for (int t = 0; t < sp_; ++t) f = f.derivative(i_);
            if (!f.is_zero()) coeffs.emplace(-k - 1, f.embed(N, map));
        }
        return reconstruct_at_point(i_, i_ + 1, coeffs, ax, d, top, N);
    }

private:
    Cochain phi_;
    int i_, lp_, sp_;
};

std::shared_ptr<CochainImpl> stamp(std::shared_ptr<CochainImpl> p, int m, bool half = false)
{
    p->m = m;
    p->half = half;
    return p;
}

}  // namespace

std::string Cochain::slot_str() const
{
    return "(" + std::to_string(degree()) + "," + (half() ? std::string("1/2") : std::to_string(m())) + ")";
}

Cochain Cochain::with_slot(int m, bool half) const
{
    auto p = std::make_shared<CombImpl>(std::vector<std::pair<Q, Cochain>>{{1, *this}}, degree(), params(), engine());
    p->K = cutoff();
    p->flags = flags();
    return Cochain(stamp(p, m, half));
}

RatFunc Cochain::pair(const ModuleVector& wp, const std::vector<ModuleVector>& in) const
{
    int n = degree();
    if (static_cast<int>(in.size()) != n) throw Error(ErrorKind::InvalidInput, "wrong number of inputs");
    RatFunc total(nvars());
    std::vector<FockState> cur(n);
    std::function<void(int, const Q&)> rec = [&](int i, const Q& coef) {
        if (i == n) {
            for (auto& [b, cb] : wp.components()) total += pair(b, cur) * (coef * cb);
            return;
        }
        for (auto& [s, c] : in[i].components()) {
            cur[i] = s;
            rec(i + 1, coef * c);
        }
    };
    rec(0, 1);
    return total;
}

RationalSection Cochain::evaluate(const std::vector<ModuleVector>& in, int dual_cutoff) const
{
    RationalSection s;
    s.nvars = nvars();
    s.dual_cutoff = dual_cutoff;
    for (auto& v : in) {
        int t = v.max_weight();
        if (t > cutoff())
            throw Error(ErrorKind::CutoffExceeded, "input " + v.str() + " above the cutoff K=" + std::to_string(cutoff()));
        s.tags.push_back(v.project_weight(t) == v ? t : -1);
    }
    for (auto& b : states_up_to(algebra(), dual_cutoff)) {
        RatFunc f = pair(ModuleVector(b), in);
        if (!f.is_zero()) s.entries.emplace(b, f);
    }
    return s;
}

Cochain linear_combination(const std::vector<std::pair<Q, Cochain>>& terms)
{
    if (terms.empty()) throw Error(ErrorKind::InvalidInput, "empty combination");
    const Cochain& f = terms[0].second;
    for (auto& [c, g] : terms)
        if (g.degree() != f.degree() || g.params() != f.params())
            throw Error(ErrorKind::InvalidInput, "combination of cochains of different degree");
    auto p = std::make_shared<CombImpl>(terms, f.degree(), f.params(), f.engine());
    p->K = f.cutoff();
    return Cochain(stamp(p, f.m(), f.half()));
}

Cochain Cochain::operator+(const Cochain& o) const { return linear_combination({{1, *this}, {1, o}}); }
Cochain Cochain::operator-(const Cochain& o) const { return linear_combination({{1, *this}, {-1, o}}); }
Cochain Cochain::operator*(const Q& c) const { return linear_combination({{c, *this}}); }

Cochain left_compose(const Cochain& phi)
{
    auto p = std::make_shared<LeftImpl>(phi);
    p->K = phi.cutoff();
    return Cochain(stamp(p, std::max(0, phi.m() - 1)));
}

Cochain point_compose(const Cochain& phi, int i, int lder_power, int shift_power)
{
    auto p = std::make_shared<PointImpl>(phi, i, lder_power, shift_power);
    p->K = phi.cutoff();
    return Cochain(stamp(p, std::max(0, phi.m() - 1)));
}

Cochain sigma_act(const Permutation& sigma, const Cochain& phi)
{
    if (sigma.size() != phi.degree())
        throw Error(ErrorKind::InvalidInput, "permutation on " + std::to_string(sigma.size()) + " letters acting on a " +
                                                 std::to_string(phi.degree()) + "-cochain");
    auto p = std::make_shared<SigmaImpl>(sigma, phi);
    p->K = phi.cutoff();
    return Cochain(stamp(p, phi.m(), phi.half()));
}

Cochain zero_cochain(int n, int m, const Correlators& eng, int params)
{
    auto p = std::make_shared<ZeroImpl>(n, params, eng);
    Cochain c(stamp(p, m));
    c.flags() = {Flag::Verified, Flag::Verified, Flag::Verified, Flag::Verified};
    return c;
}

Cochain from_module_vector(const ModuleVector& w, int m, const Correlators& eng)
{
    Cochain c(stamp(std::make_shared<VectorImpl>(w, eng), m));
    // C^0_m = W: no membership conditions beyond being a vector
    c.flags() = {Flag::Verified, Flag::Verified, Flag::Verified, Flag::Verified};
    return c;
}

Cochain e_built(const std::vector<int>& input_powers, int output_power, const ModuleVector& w, int m,
                const Correlators& eng)
{
    return Cochain(stamp(std::make_shared<EBuiltImpl>(input_powers, output_power, w, eng), m));
}

namespace {

Scope construction_scope()
{
    Scope sc;
    sc.input_cutoff = 2;
    sc.dual_cutoff = 2;
    return sc;
}

}  // namespace

Cochain from_YW(const ModuleVector& w, int m, const Correlators& eng)
{
    Cochain c = e_built({0}, 0, w, m, eng);
    require_members(c, construction_scope(), "E^(1)(.;" + w.str() + ")");
    return c;
}

Cochain from_E(int n, const ModuleVector& w, int m, const Correlators& eng)
{
    if (n == 0) return from_module_vector(w, m, eng);
    Cochain c = e_built(std::vector<int>(n, 0), 0, w, m, eng);
    require_members(c, construction_scope(), "E^(" + std::to_string(n) + ")(.;" + w.str() + ")");
    return c;
}

std::vector<std::vector<Q>> shuffle_kernel(int n)
{
    auto perms = all_permutations(n);
    int N = static_cast<int>(perms.size());
    std::map<Permutation, int> index;
    for (int i = 0; i < N; ++i) index[perms[i]] = i;
    std::vector<std::vector<Q>> rows;
    for (int s = 1; s < n; ++s) {
        // A_s = sum_{sigma in J^{-1}} sign(sigma) sigma; (A_s d)_rho = sum_sigma sign(sigma) d_{sigma^{-1} rho}
        std::vector<Permutation> J;
        for (auto& p : shuffles(n, s)) J.push_back(p.inverse());
        for (int r = 0; r < N; ++r) {
            std::vector<Q> row(N, 0);
            for (auto& sg : J) row[index[sg.inverse() * perms[r]]] += sg.sign();
            rows.push_back(row);
        }
    }
    if (rows.empty()) {
        std::vector<std::vector<Q>> all;
        for (int i = 0; i < N; ++i) {
            std::vector<Q> e(N, 0);
            e[i] = 1;
            all.push_back(e);
        }
        return all;
    }
    Matrix A(static_cast<int>(rows.size()), N);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < N; ++j) A(i, j) = rows[i][j];
    return nullspace(A);
}

Cochain group_algebra_act(const std::vector<Q>& d, const Cochain& phi)
{
    auto perms = all_permutations(phi.degree());
    std::vector<std::pair<Q, Cochain>> terms;
    for (size_t i = 0; i < perms.size(); ++i)
        if (d[i] != 0) terms.emplace_back(d[i], sigma_act(perms[i], phi));
    if (terms.empty()) return zero_cochain(phi.degree(), phi.m(), phi.engine(), phi.params());
    Cochain r = linear_combination(terms);
    return r;
}

Cochain random_valid(int n, int m, std::uint64_t seed, const Correlators& eng)
{
    std::mt19937_64 g(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(n * 131 + m));
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3), pw(0, 2), nterms(1, 2);
    auto coef = [&] {
        Q c(num(g), den(g));
        c.canonicalize();
        return c == 0 ? Q(1) : c;
    };
    if (n == 0) {
        ModuleVector w(FockState::vacuum(), coef());
        for (int l = 1; l <= 2; ++l)
            for (auto& s : eng.algebra().basis(l)) w.add(s, Q(num(g)));
        return from_module_vector(w, m, eng);
    }
    auto kernel = shuffle_kernel(n);
    std::vector<std::pair<Q, Cochain>> terms;
    int T = nterms(g);
    for (int t = 0; t < T; ++t) {
        std::vector<int> p(n);
        // distinct input powers keep the shuffle projection nonzero on generic tuples
        std::vector<int> pool{0, 1, 2, 3};
        std::shuffle(pool.begin(), pool.end(), g);
        for (int i = 0; i < n; ++i) p[i] = pool[i % pool.size()];
        Cochain raw = e_built(p, pw(g), ModuleVector(FockState::vacuum()), m, eng);
        std::vector<Q> d(kernel.empty() ? 0 : kernel[0].size(), 0);
        for (auto& k : kernel) {
            Q c = Q(num(g));
            for (size_t i = 0; i < d.size(); ++i) d[i] += c * k[i];
        }
        bool nonzero = false;
        for (auto& x : d) nonzero = nonzero || x != 0;
        if (!nonzero && !kernel.empty()) d = kernel[0];
        terms.emplace_back(coef(), n == 1 ? raw : group_algebra_act(d, raw));
    }
    Cochain c = linear_combination(terms);
    c = c.with_slot(m);
    c.flags() = {Flag::Verified, Flag::Verified, Flag::Verified, Flag::Unchecked};
    Scope sc = construction_scope();
    sc.input_cutoff = 1;
    sc.dual_cutoff = 1;
    require_members(c, sc, "random_valid");
    return c;
}

Cochain tabulate(const Cochain& phi, int cutoff_K, int dual_cutoff)
{
    auto t = std::make_shared<TableImpl>(phi.degree(), phi.params(), cutoff_K, dual_cutoff, phi.impl().ket_weight(),
                                         phi.engine());
    Scope sc;
    sc.input_cutoff = cutoff_K;
    auto duals = states_up_to(phi.algebra(), dual_cutoff);
    for (auto& tup : input_tuples(phi.algebra(), phi.degree(), sc))
        for (auto& b : duals) {
            RatFunc f = phi.pair(b, tup);
            if (f.is_zero()) continue;
            std::vector<FockState> key{b};
            key.insert(key.end(), tup.begin(), tup.end());
            t->entries.emplace(key, f);
        }
    t->K = cutoff_K;
    t->flags = phi.flags();
    return Cochain(stamp(t, phi.m(), phi.half()));
}

Cochain edited_table(const Cochain& table, const std::vector<TableEdit>& edits)
{
    auto src = dynamic_cast<const TableImpl*>(&table.impl());
    if (!src) throw Error(ErrorKind::InvalidInput, "only tables can be edited");
    auto t = std::make_shared<TableImpl>(src->degree(), src->params(), src->input_limit(), src->dual_limit(),
                                         src->ket_weight(), src->engine());
    t->K = src->K;
    t->entries = src->entries;
    for (auto& e : edits) {
        std::vector<FockState> key{e.wprime};
        key.insert(key.end(), e.inputs.begin(), e.inputs.end());
        t->entries[key] = e.value;
    }
    t->flags = Flags{};
    return Cochain(stamp(t, table.m(), table.half()));
}

nlohmann::json cochain_to_json(const Cochain& phi, int cutoff_K, int dual_cutoff)
{
    Cochain t = dynamic_cast<const TableImpl*>(&phi.impl()) ? phi : tabulate(phi, cutoff_K, dual_cutoff);
    auto& T = dynamic_cast<const TableImpl&>(t.impl());
    auto names = default_names(phi.nvars());
    nlohmann::json entries = nlohmann::json::array();
    for (auto& [key, f] : T.entries) {
        nlohmann::json tup = nlohmann::json::array();
        for (size_t i = 1; i < key.size(); ++i) tup.push_back(key[i].str());
        entries.push_back({{"wprime", key[0].str()}, {"inputs", tup}, {"value", f.to_json(names)}});
    }
    const Flags& fl = phi.flags();
    return {{"degree", phi.degree()},
            {"m", phi.m()},
            {"half", phi.half()},
            {"params", phi.params()},
            {"K", T.input_limit()},
            {"dual_cutoff", T.dual_limit()},
            {"ket_weight", T.ket_weight()},
            {"pole_bounds", "wt(u)+wt(v)"},
            {"flags",
             {{"lder", flag_str(fl.lder)},
              {"l0", flag_str(fl.l0)},
              {"shuffle", flag_str(fl.shuffle)},
              {"composable", flag_str(fl.composable)}}},
            {"entries", entries}};
}

Cochain cochain_from_json(const nlohmann::json& j, const Correlators& eng)
{
    try {
        int n = j.at("degree").get<int>();
        int params = j.at("params").get<int>();
        auto t = std::make_shared<TableImpl>(n, params, j.at("K").get<int>(), j.at("dual_cutoff").get<int>(),
                                             j.at("ket_weight").get<int>(), eng);
        t->K = j.at("K").get<int>();
        auto names = default_names(n + params);
        for (auto& e : j.at("entries")) {
            std::vector<FockState> key{FockState::parse(e.at("wprime").get<std::string>())};
            for (auto& s : e.at("inputs")) key.push_back(FockState::parse(s.get<std::string>()));
            if (static_cast<int>(key.size()) != n + 1) throw Error(ErrorKind::Parse, "entry with the wrong number of inputs");
            t->entries.emplace(key, RatFunc::from_json(e.at("value"), names));
        }
        auto& f = j.at("flags");
        t->flags.lder = flag_parse(f.at("lder").get<std::string>());
        t->flags.l0 = flag_parse(f.at("l0").get<std::string>());
        t->flags.shuffle = flag_parse(f.at("shuffle").get<std::string>());
        t->flags.composable = flag_parse(f.at("composable").get<std::string>());
        return Cochain(stamp(t, j.at("m").get<int>(), j.at("half").get<bool>()));
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorKind::Parse, std::string("cochain: ") + ex.what());
    }
}

// ---- validators ----

namespace {

bool within(const Cochain& phi, const FockState& wp, const std::vector<ModuleVector>& in)
{
    int il = phi.impl().input_limit(), dl = phi.impl().dual_limit();
    if (dl >= 0 && wp.weight() > dl) return false;
    if (il >= 0)
        for (auto& v : in)
            if (v.max_weight() > il) return false;
    return true;
}

}  // namespace

CheckReport validate_L_minus1(const Cochain& phi, const Scope& sc)
{
    CheckReport rep;
    const VertexAlgebra& va = phi.algebra();
    Q inv = 1 / Q(-phi.engine().lam2());   // L(-1)^dagger = (-lambda^2)^{-1} L(1)
    int n = phi.degree();
    auto duals = states_up_to(va, sc.dual_cutoff);
    if (n == 0) {
        // (ii) reduces to <w', L(-1) w> = <L(-1)^dagger w', w>, both sides from the pairings of w
        for (auto& wp : duals) {
            if (wp.weight() == 0) continue;
            int l = wp.weight() - 1;
            const auto& B = va.basis(l);
            const Matrix& D = va.dual_matrix(l, phi.engine().lam2());
            Q lhs = 0;
            for (size_t c = 0; c < B.size(); ++c) {
                Q coef = va.bilinear_form(ModuleVector(wp), va.virasoro(-1, ModuleVector(B[c])), phi.engine().lam2());
                if (coef == 0) continue;
                for (size_t a = 0; a < B.size(); ++a) {
                    const Q& d = D(static_cast<int>(a), static_cast<int>(c));
                    if (d != 0) lhs += coef * d * phi.pair(B[a], {}).num().eval({});
                }
            }
            RatFunc r = phi.pair(va.virasoro(1, ModuleVector(wp)), {}) * inv;
            ++rep.checked;
            if (RatFunc::constant(0, lhs) != r) rep.fail("L(-1) pairing identity fails at w'=" + wp.str());
        }
        phi.flags().lder = rep.ok ? Flag::Verified : Flag::Failed;
        return rep;
    }
    for (auto& tup : input_tuples(va, n, sc)) {
        std::vector<ModuleVector> in;
        for (auto& v : tup) in.emplace_back(v);
        for (auto& wp : duals) {
            if (!within(phi, wp, in)) continue;
            RatFunc f = phi.pair(wp, tup);
            RatFunc sum(phi.nvars());
            for (int i = 0; i < n; ++i) {
                RatFunc df = f.derivative(i);
                sum += df;
                auto moved = in;
                moved[i] = va.virasoro(-1, in[i]);
                if (!within(phi, wp, moved)) continue;
                ++rep.checked;
                RatFunc g = phi.pair(ModuleVector(wp), moved);
                if (df != g) {
                    rep.fail("d/dz" + std::to_string(i + 1) + " differs from the L(-1) insertion at " + tuple_str(wp, tup) +
                             ": " + df.to_json().dump() + " vs " + g.to_json().dump());
                }
            }
            ModuleVector l1 = va.virasoro(1, ModuleVector(wp));
            if (l1.max_weight() >= 0 && !within(phi, l1.components().begin()->first, in)) continue;
            ++rep.checked;
            RatFunc rhs = phi.pair(l1, in) * inv;
            if (sum != rhs)
                rep.fail("sum of derivatives differs from L(-1).Phi at " + tuple_str(wp, tup) + ": " + sum.to_json().dump() +
                         " vs " + rhs.to_json().dump());
        }
    }
    phi.flags().lder = rep.ok ? Flag::Verified : Flag::Failed;
    return rep;
}

CheckReport validate_L0(const Cochain& phi, const Scope& sc)
{
    CheckReport rep;
    int n = phi.degree();
    if (n == 0) {
        phi.flags().l0 = Flag::Verified;
        return rep;
    }
    const VertexAlgebra& va = phi.algebra();
    auto duals = states_up_to(va, sc.dual_cutoff);
    for (auto& tup : input_tuples(va, n, sc)) {
        int wsum = 0;
        for (auto& v : tup) wsum += v.weight();
        for (auto& wp : duals) {
            RatFunc f = phi.pair(wp, tup);
            for (int lam : {2, 3, -1}) {
                ++rep.checked;
                // z^{L(0)} Phi(v; z_i) = Phi(z^{L(0)} v; z z_i), paired with w'
                RatFunc lhs = f * ipow(Q(lam), wp.weight());
                RatFunc rhs = f.scale_vars(Q(lam)) * ipow(Q(lam), wsum);
                if (lhs != rhs) {
                    rep.fail("L(0) conjugation fails at z=" + std::to_string(lam) + " for " + tuple_str(wp, tup) + ": " +
                             f.to_json().dump());
                    break;
                }
            }
        }
    }
    phi.flags().l0 = rep.ok ? Flag::Verified : Flag::Failed;
    return rep;
}

CheckReport validate_shuffle(const Cochain& phi, const Scope& sc)
{
    CheckReport rep;
    int n = phi.degree();
    if (n <= 1) {
        phi.flags().shuffle = Flag::Verified;
        return rep;
    }
    const VertexAlgebra& va = phi.algebra();
    auto duals = states_up_to(va, sc.dual_cutoff);
    std::vector<std::vector<Permutation>> sets;
    for (int s = 1; s < n; ++s) {
        std::vector<Permutation> J;
        for (auto& p : shuffles(n, s)) J.push_back(p.inverse());
        sets.push_back(J);
    }
    for (auto& tup : input_tuples(va, n, sc))
        for (auto& wp : duals)
            for (size_t si = 0; si < sets.size(); ++si) {
                RatFunc total(phi.nvars());
                for (auto& sg : sets[si]) {
                    std::vector<FockState> moved(n);
                    for (int k = 0; k < n; ++k) moved[k] = tup[sg(k)];
                    total += phi.pair(wp, moved).permute(extend(sg, phi.nvars())) * Q(sg.sign());
                }
                ++rep.checked;
                if (!total.is_zero())
                    rep.fail("shuffle sum for s=" + std::to_string(si + 1) + " is " + total.to_json().dump() + " at " +
                             tuple_str(wp, tup));
            }
    phi.flags().shuffle = rep.ok ? Flag::Verified : Flag::Failed;
    return rep;
}

void require_members(const Cochain& phi, const Scope& sc, const std::string& what)
{
    CheckReport a = validate_L_minus1(phi, sc);
    if (!a.ok) throw Error(ErrorKind::ValidationFailure, what + ": L(-1)-derivative property: " + a.witness);
    CheckReport b = validate_L0(phi, sc);
    if (!b.ok) throw Error(ErrorKind::ValidationFailure, what + ": L(0)-conjugation property: " + b.witness);
    CheckReport c = validate_shuffle(phi, sc);
    if (!c.ok) throw Error(ErrorKind::ValidationFailure, what + ": shuffle condition: " + c.witness);
}

// ---- composability ----

namespace {

void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (parts == 0) {
        if (total == 0) out.push_back(cur);
        return;
    }
    for (int l = 1; l <= total - (parts - 1); ++l) {
        cur.push_back(l);
        compositions(total - l, parts - 1, cur, out);
        cur.pop_back();
    }
}

bool poles_within(const RatFunc& f, const std::vector<FockState>& in, const VertexAlgebra& va, std::string& why)
{
    int n = static_cast<int>(in.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (f.diff(i, j) > va.pole_bound(in[i], in[j])) {
                why = "pole of order " + std::to_string(f.diff(i, j)) + " at z" + std::to_string(i + 1) + "=z" +
                      std::to_string(j + 1);
                return false;
            }
    return true;
}

}  // namespace

CheckReport check_composability(const Cochain& phi, int m, const ComposabilityScope& sc)
{
    CheckReport rep;
    const VertexAlgebra& va = phi.algebra();
    int n = phi.degree();
    std::vector<FockState> extra;
    for (int l = 1; l <= sc.extra_cutoff; ++l)
        for (auto& s : va.basis(l)) extra.push_back(s);
    auto duals = states_up_to(va, sc.base.dual_cutoff);
    auto base = input_tuples(va, n, sc.base);
    auto run = [&](const std::string& what, auto&& body) {
        try {
            body();
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::CutoffExceeded)
                ++rep.skipped;
            else
                rep.fail(what + ": " + e.what());
        }
    };
    // the extra states attached to a base tuple cycle through `extra`
    auto extras_for = [&](size_t t, int count) {
        std::vector<FockState> u;
        for (int k = 0; k < count; ++k) u.push_back(extra[(t + k) % extra.size()]);
        return u;
    };
    if (m > 0 && extra.empty()) {
        rep.fail("no states for the extra vertex operators");
        phi.flags().composable = Flag::Failed;
        return rep;
    }
    // left composition with m vertex operators
    Cochain left = phi;
    for (int k = 0; k < m; ++k) left = left_compose(left);
    for (size_t t = 0; t < base.size() && m > 0; ++t) {
        std::vector<FockState> in = extras_for(t, m);
        in.insert(in.end(), base[t].begin(), base[t].end());
        for (auto& wp : duals)
            run("E^(" + std::to_string(m) + ") o Phi at " + tuple_str(wp, in), [&] {
                RatFunc f = left.pair(wp, in);
                ++rep.checked;
                std::string why;
                if (!poles_within(f, in, va, why)) rep.fail("E^(m) o Phi at " + tuple_str(wp, in) + ": " + why);
            });
    }
    // right compositions Phi o (E^(l_1) (x) ... (x) E^(l_n))
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    if (n > 0) compositions(m + n, n, cur, comps);
    for (auto& l : comps) {
        Cochain c = phi;
        // absorb from the last slot backwards so earlier slot positions stay put
        int extra_count = 0;
        for (int i = n - 1; i >= 0; --i) {
            int pos = 0;
            for (int j = 0; j < i; ++j) pos += 1;
            for (int r = 1; r < l[i]; ++r) c = point_compose(c, pos);
            extra_count += l[i] - 1;
        }
        std::string lname;
        for (size_t i = 0; i < l.size(); ++i) lname += (i ? "," : "") + std::to_string(l[i]);
        for (size_t t = 0; t < base.size(); ++t) {
            // block i is (u..., v_i) with l_i - 1 extra states in front of the original input
            std::vector<FockState> in;
            std::vector<FockState> u = extras_for(t, extra_count);
            size_t used = 0;
            for (int i = 0; i < n; ++i) {
                for (int r = 1; r < l[i]; ++r) in.push_back(u[used++]);
                in.push_back(base[t][i]);
            }
            for (auto& wp : duals)
                run("Phi o (" + lname + ") at " + tuple_str(wp, in), [&] {
                    RatFunc f = c.pair(wp, in);
                    ++rep.checked;
                    std::string why;
                    if (!poles_within(f, in, va, why)) rep.fail("Phi o (" + lname + ") at " + tuple_str(wp, in) + ": " + why);
                });
        }
    }
    // independence of the expansion point: with zeta shifted by t the t^1 and t^2
    // coefficients of the composed series must vanish
    if (m > 0)
        for (int i = 0; i < n; ++i) {
            Cochain d10 = point_compose(phi, i, 0, 1), d01 = point_compose(phi, i, 1, 0);
            Cochain d20 = point_compose(phi, i, 0, 2), d11 = point_compose(phi, i, 1, 1), d02 = point_compose(phi, i, 2, 0);
            for (size_t t = 0; t < base.size(); ++t) {
                std::vector<FockState> in = base[t];
                in.insert(in.begin() + i, extras_for(t, 1)[0]);
                for (auto& wp : duals)
                    run("shift test at slot " + std::to_string(i + 1) + " " + tuple_str(wp, in), [&] {
                        ++rep.checked;
                        RatFunc first = d10.pair(wp, in) - d01.pair(wp, in);
                        RatFunc second = d20.pair(wp, in) * Q(1, 2) - d11.pair(wp, in) + d02.pair(wp, in) * Q(1, 2);
                        if (!first.is_zero() || !second.is_zero())
                            rep.fail("composition depends on the expansion point at slot " + std::to_string(i + 1) + " " +
                                     tuple_str(wp, in));
                    });
            }
        }
    phi.flags().composable = rep.ok ? Flag::Verified : Flag::Failed;
    return rep;
}

}  // namespace vcoh
