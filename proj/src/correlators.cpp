#include "vcoh/correlators.hpp"

#include <functional>

namespace vcoh {

RatFunc RationalSection::pair(const FockState& b) const
{
    if (b.weight() > dual_cutoff)
        throw Error(ErrorKind::CutoffExceeded, "dual state " + b.str() + " above the section cutoff");
    auto it = entries.find(b);
    return it == entries.end() ? RatFunc(nvars) : it->second;
}

nlohmann::json RationalSection::to_json() const
{
    nlohmann::json e = nlohmann::json::array();
    for (auto& [b, f] : entries) e.push_back({b.str(), f.to_json()});
    return {{"nvars", nvars}, {"dual_cutoff", dual_cutoff}, {"tags", tags}, {"entries", e}};
}

RationalSection RationalSection::from_json(const nlohmann::json& j)
{
    RationalSection s;
    try {
        s.nvars = j.at("nvars").get<int>();
        s.dual_cutoff = j.at("dual_cutoff").get<int>();
        s.tags = j.at("tags").get<std::vector<int>>();
        for (auto& e : j.at("entries")) {
            FockState b = FockState::parse(e.at(0).get<std::string>());
            s.entries.emplace(b, RatFunc::from_json(e.at(1), s.nvars));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorKind::Parse, std::string("section: ") + ex.what());
    }
    return s;
}

PoleAnsatz Correlators::default_ansatz(const std::vector<FockState>& vs, const FockState& w) const
{
    int n = static_cast<int>(vs.size());
    PoleAnsatz a = PoleAnsatz::zero(n);
    for (int i = 0; i < n; ++i) {
        a.axis[i] = w.is_vacuum() ? 0 : va_.pole_bound(vs[i], w);
        for (int j = i + 1; j < n; ++j) a.set_b(i, j, va_.pole_bound(vs[i], vs[j]));
    }
    return a;
}

RatFunc Correlators::matrix_element(const FockState& wp, const std::vector<FockState>& vs, const FockState& w) const
{
    std::vector<FockState> key;
    key.reserve(vs.size() + 2);
    key.push_back(wp);
    key.insert(key.end(), vs.begin(), vs.end());
    key.push_back(w);
    {
        std::lock_guard<std::recursive_mutex> lk(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    RatFunc r = compute(wp, vs, w, nullptr);
    std::lock_guard<std::recursive_mutex> lk(mu_);
    cache_.emplace(key, r);
    return r;
}

RatFunc Correlators::compute(const FockState& wp, const std::vector<FockState>& vs, const FockState& w,
                             const PoleAnsatz* ans) const
{
    int n = static_cast<int>(vs.size());
    if (n == 0) return RatFunc::constant(0, va_.form(wp, w, lam2_));
    const FockState& v1 = vs[0];
    int sp = wp.weight(), h1 = v1.weight();
    if (n == 1) {
        int k = h1 + w.weight() - sp - 1;
        Q c = va_.bilinear_form(ModuleVector(wp), va_.vertex_mode(v1, k, w), lam2_);
        return RatFunc::from_poly(Poly::monomial(1, {-k - 1}, c));
    }
    PoleAnsatz full = ans ? *ans : default_ansatz(vs, w);
    std::vector<int> d(n, 0);
    for (int j = 1; j < n; ++j) d[j] = full.b(0, j);
    int a1 = full.axis[0];
    int top = sp - h1;
    int lo = lowest_needed_at_infinity(a1, d, top);
    PoleAnsatz inner = PoleAnsatz::zero(n - 1);
    for (int i = 1; i < n; ++i) {
        inner.axis[i - 1] = full.axis[i];
        for (int j = i + 1; j < n; ++j) inner.set_b(i - 1, j - 1, full.b(i, j));
    }
    std::vector<FockState> rest(vs.begin() + 1, vs.end());
    std::vector<int> shift(n - 1);
    for (int i = 0; i < n - 1; ++i) shift[i] = i + 1;

    std::map<int, RatFunc> coeffs;
    for (int s = 0; s <= top - lo; ++s) {
        int e = top - s;
        const auto& x = dual_expansion(wp, v1, s);
        if (x.empty()) continue;
        RatFunc g(n);
        for (auto& [b, db] : x) {
            RatFunc f = ans ? compute(b, rest, w, &inner) : matrix_element(b, rest, w);
            g += f.embed(n, shift) * db;
        }
        if (!g.is_zero()) coeffs.emplace(e, g);
    }
    return reconstruct_at_infinity(0, coeffs, a1, d, top, n);
}

const std::vector<std::pair<FockState, Q>>& Correlators::dual_expansion(const FockState& wp, const FockState& v,
                                                                       int s) const
{
    auto key = std::make_tuple(wp, v, s);
    std::lock_guard<std::recursive_mutex> lk(mu_);
    auto it = expansion_cache_.find(key);
    if (it != expansion_cache_.end()) return it->second;
    int k = v.weight() + s - wp.weight() - 1;
    std::vector<std::pair<FockState, Q>> x;
    if (s >= 0) {
        ModuleVector y = va_.adjoint_mode(v, k, ModuleVector(wp), lam2_);
        for (auto& [b, c] : y.components()) x.emplace_back(b, c);
    }
    return expansion_cache_.emplace(key, std::move(x)).first->second;
}

RatFunc Correlators::matrix_element(const ModuleVector& wp, const std::vector<ModuleVector>& vs,
                                    const ModuleVector& w) const
{
    int n = static_cast<int>(vs.size());
    RatFunc total(n);
    std::vector<FockState> cur(n);
    std::function<void(int, const Q&)> rec = [&](int i, const Q& coef) {
        if (i == n) {
            for (auto& [a, ca] : wp.components())
                for (auto& [b, cb] : w.components()) total += matrix_element(a, cur, b) * (coef * ca * cb);
            return;
        }
        for (auto& [s, c] : vs[i].components()) {
            cur[i] = s;
            rec(i + 1, coef * c);
        }
    };
    rec(0, 1);
    return total;
}

RatFunc Correlators::matrix_element(const CorrelatorRequest& req) const
{
    if (!req.ansatz) return matrix_element(req.wprime, req.insertions, req.ket);
    int n = static_cast<int>(req.insertions.size());
    RatFunc total(n);
    std::vector<FockState> cur(n);
    std::function<void(int, const Q&)> rec = [&](int i, const Q& coef) {
        if (i == n) {
            for (auto& [a, ca] : req.wprime.components())
                for (auto& [b, cb] : req.ket.components()) total += compute(a, cur, b, &*req.ansatz) * (coef * ca * cb);
            return;
        }
        for (auto& [s, c] : req.insertions[i].components()) {
            cur[i] = s;
            rec(i + 1, coef * c);
        }
    };
    rec(0, 1);
    return total;
}

RatFunc Correlators::matrix_element_in_region(const FockState& wp, const std::vector<FockState>& vs,
                                              const FockState& w, const std::vector<int>& order) const
{
    int n = static_cast<int>(vs.size());
    Permutation pi(order);
    if (pi.size() != n) throw Error(ErrorKind::InvalidRegion, "region must order every insertion");
    std::vector<FockState> moved(n);
    for (int k = 0; k < n; ++k) moved[k] = vs[pi(k)];
    // variable k of the reordered correlator is z_{pi(k)}
    return matrix_element(wp, moved, w).permute(pi);
}

RationalSection Correlators::E(const std::vector<ModuleVector>& vs, const ModuleVector& w, int dual_cutoff) const
{
    RationalSection s;
    s.nvars = static_cast<int>(vs.size());
    s.dual_cutoff = dual_cutoff;
    for (auto& v : vs) {
        int t = v.max_weight();
        s.tags.push_back(v.project_weight(t) == v ? t : -1);
    }
    for (int l = 0; l <= dual_cutoff; ++l)
        for (auto& b : va_.basis(l)) {
            RatFunc f = matrix_element(ModuleVector(b), vs, w);
            if (!f.is_zero()) s.entries.emplace(b, f);
        }
    return s;
}

RatFunc Correlators::intertwiner_pair(const FockState& wp, const ModuleVector& w, const ModuleVector& v) const
{
    // sum_j z^j/j! <(L(-1)^dagger)^j w', Y(v,-z) w>, L(-1)^dagger = (-lambda^2)^{-1} L(1)
    RatFunc out(1);
    ModuleVector bra(wp);
    Q scale = 1;
    for (int j = 0; !bra.is_zero(); ++j) {
        if (j > 0) {
            bra = va_.virasoro(1, bra) * (Q(-1) / lam2_);
            scale /= j;
        }
        for (auto& [x, cx] : bra.components())
            for (auto& [a, ca] : v.components())
                for (auto& [b, cb] : w.components()) {
                    int k = a.weight() + b.weight() - x.weight() - 1;
                    Q c = va_.bilinear_form(ModuleVector(x), va_.vertex_mode(a, k, b), lam2_) * cx * ca * cb * scale;
                    if (c == 0) continue;
                    // (-z)^{-k-1} z^j
                    if ((k + 1) % 2) c = -c;
                    out += RatFunc::from_poly(Poly::monomial(1, {j - k - 1}, c));
                }
    }
    return out;
}

RationalSection Correlators::intertwiner(const ModuleVector& w, const ModuleVector& v, int dual_cutoff) const
{
    RationalSection s;
    s.nvars = 1;
    s.dual_cutoff = dual_cutoff;
    s.tags = {v.max_weight()};
    for (int l = 0; l <= dual_cutoff; ++l)
        for (auto& b : va_.basis(l)) {
            RatFunc f = intertwiner_pair(b, w, v);
            if (!f.is_zero()) s.entries.emplace(b, f);
        }
    return s;
}

size_t Correlators::cache_size() const
{
    std::lock_guard<std::recursive_mutex> lk(mu_);
    return cache_.size();
}

RatFunc wick_matrix_element(const FockState& wp, int n, const FockState& w, const Q& lam2)
{
    enum Kind { Bra, Field, Ket };
    struct Op {
        Kind kind;
        int p;
    };
    std::vector<Op> ops;
    Q pref = 1;
    // <a(-p)x, y> = <x, a^dagger(-p) y> and a^dagger(-p) = -(-lambda^2)^{-p} a(p)
    for (int p : wp.parts) {
        ops.push_back({Bra, p});
        Q f = -1;
        for (int i = 0; i < p; ++i) f /= -lam2;
        pref *= f;
    }
    for (int i = 0; i < n; ++i) ops.push_back({Field, i});
    for (int q : w.parts) ops.push_back({Ket, q});

    auto contract = [&](const Op& x, const Op& y) -> RatFunc {
        if (x.kind == Bra && y.kind == Field) return RatFunc::from_poly(Poly::monomial(n, [&] {
                Exps e(n, 0);
                e[y.p] = x.p - 1;
                return e;
            }(), Q(x.p)));
        if (x.kind == Bra && y.kind == Ket) return x.p == y.p ? RatFunc::constant(n, x.p) : RatFunc(n);
        if (x.kind == Field && y.kind == Field) return RatFunc::diff_pole(n, x.p, y.p, 2);
        if (x.kind == Field && y.kind == Ket) return RatFunc::from_poly(Poly::monomial(n, [&] {
                Exps e(n, 0);
                e[x.p] = -y.p - 1;
                return e;
            }(), Q(y.p)));
        return RatFunc(n);
    };
    std::vector<bool> used(ops.size(), false);
    std::function<RatFunc()> rec = [&]() -> RatFunc {
        size_t i = 0;
        while (i < ops.size() && used[i]) ++i;
        if (i == ops.size()) return RatFunc::constant(n, 1);
        used[i] = true;
        RatFunc total(n);
        for (size_t j = i + 1; j < ops.size(); ++j) {
            if (used[j]) continue;
            RatFunc c = contract(ops[i], ops[j]);
            if (c.is_zero()) continue;
            used[j] = true;
            total += c * rec();
            used[j] = false;
        }
        used[i] = false;
        return total;
    };
    if (ops.size() % 2) return RatFunc(n);
    return rec() * pref;
}

}  // namespace vcoh
