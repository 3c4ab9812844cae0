#include "vcoh/laurent.hpp"

#include <algorithm>
#include <climits>
#include <set>

namespace vcoh {

namespace {

std::vector<int> ranks_of(const std::vector<int>& region, int n)
{
    if (static_cast<int>(region.size()) != n) throw Error(ErrorKind::InvalidRegion, "region must order every variable");
    std::vector<int> rank(n, -1);
    for (int k = 0; k < n; ++k) {
        int v = region[k];
        if (v < 0 || v >= n || rank[v] != -1) throw Error(ErrorKind::InvalidRegion, "region is not a total order");
        rank[v] = k;
    }
    return rank;
}

int mu(const Exps& e, const std::vector<int>& rank)
{
    int m = 0;
    for (size_t i = 0; i < e.size(); ++i) m += rank[i] * e[i];
    return m;
}

Poly ansatz_denominator(int n, const PoleAnsatz& ans)
{
    Exps e(n, 0);
    for (int i = 0; i < n; ++i) e[i] = ans.axis[i];
    Poly d = Poly::monomial(n, e, 1);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (ans.b(i, j)) d = d * Poly::diff_power(n, i, j, ans.b(i, j));
    return d;
}

RatFunc ansatz_inverse(int n, const PoleAnsatz& ans)
{
    std::vector<int> diff(n * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) diff[i * n + j] = ans.b(i, j);
    return RatFunc::make(Poly::constant(n, 1), ans.axis, diff);
}

int mu_min_of_denominator(const std::vector<int>& rank, const PoleAnsatz& ans)
{
    int n = static_cast<int>(rank.size());
    int m = 0;
    for (int i = 0; i < n; ++i) m += ans.axis[i] * rank[i];
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m += ans.b(i, j) * std::min(rank[i], rank[j]);
    return m;
}

}  // namespace

int TruncatedSeries::weighted_degree(const Exps& e) const
{
    return mu(e, ranks_of(region, nvars));
}

PoleAnsatz PoleAnsatz::zero(int n)
{
    PoleAnsatz a;
    a.axis.assign(n, 0);
    a.diff.assign(n * n, 0);
    return a;
}

PoleAnsatz PoleAnsatz::of(const RatFunc& f)
{
    int n = f.nvars();
    PoleAnsatz a = zero(n);
    for (int i = 0; i < n; ++i) a.axis[i] = f.axis(i);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) a.set_b(i, j, f.diff(i, j));
    return a;
}

void PoleAnsatz::set_b(int i, int j, int v)
{
    int n = static_cast<int>(axis.size());
    diff[i * n + j] = v;
    diff[j * n + i] = v;
}

TruncatedSeries expand_region(const RatFunc& f, int order, const std::vector<int>& region)
{
    int n = f.nvars();
    std::vector<int> rank = ranks_of(region, n);
    TruncatedSeries s;
    s.nvars = n;
    s.region = region;
    s.order = order;
    s.terms = Poly(n);
    if (f.is_zero()) return s;

    Exps e(n, 0);
    for (int i = 0; i < n; ++i) e[i] = -f.axis(i);
    Poly cur = f.num() * Poly::monomial(n, e, 1);
    struct Factor { int large, small, b; };
    std::vector<Factor> factors;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            int b = f.diff(i, j);
            if (!b) continue;
            int L = rank[i] < rank[j] ? i : j;
            int S = L == i ? j : i;
            // (z_i - z_j)^{-b} = (+-1)^b z_L^{-b} (1 - z_S/z_L)^{-b}
            Exps g(n, 0);
            g[L] = -b;
            Q sign = (L == j && b % 2) ? -1 : 1;
            cur = cur * Poly::monomial(n, g, sign);
            factors.push_back({L, S, b});
        }
    auto trim = [&](const Poly& p) {
        Poly r(n);
        for (auto& [x, c] : p.terms())
            if (mu(x, rank) <= order) r.add_term(x, c);
        return r;
    };
    cur = trim(cur);
    for (auto& fc : factors) {
        int step = rank[fc.small] - rank[fc.large];
        Poly next(n);
        for (auto& [x, c] : cur.terms()) {
            int room = order - mu(x, rank);
            Exps y = x;
            for (int k = 0; k * step <= room; ++k) {
                next.add_term(y, c * binomial(fc.b + k - 1, k));
                y[fc.small] += 1;
                y[fc.large] -= 1;
            }
        }
        cur = next;
    }
    s.terms = cur;
    return s;
}

int required_order(const std::vector<int>& region, int deg, const PoleAnsatz& ans)
{
    int nvars = static_cast<int>(region.size());
    std::vector<int> rank = ranks_of(region, nvars);
    int degD = 0;
    for (int a : ans.axis) degD += a;
    for (int i = 0; i < nvars; ++i)
        for (int j = i + 1; j < nvars; ++j) degD += ans.b(i, j);
    int dN = deg + degD;
    return std::max(0, dN) * (nvars - 1) + 2 - mu_min_of_denominator(rank, ans);
}

RatFunc reconstruct(const TruncatedSeries& s, const PoleAnsatz& ans)
{
    int n = s.nvars;
    std::vector<int> rank = ranks_of(s.region, n);
    if (static_cast<int>(ans.axis.size()) != n) throw Error(ErrorKind::InvalidInput, "ansatz size mismatch");
    std::map<int, Poly> by_degree;
    for (auto& [e, c] : s.terms.terms()) {
        int d = 0;
        for (int x : e) d += x;
        auto it = by_degree.find(d);
        if (it == by_degree.end()) it = by_degree.emplace(d, Poly(n)).first;
        it->second.add_term(e, c);
    }
    Poly D = ansatz_denominator(n, ans);
    int degD = 0;
    D.homogeneous(degD);
    int limit = s.order + mu_min_of_denominator(rank, ans);
    RatFunc inv = ansatz_inverse(n, ans);
    RatFunc out(n);
    for (auto& [h, part] : by_degree) {
        Poly P = D * part;
        Poly N(n);
        for (auto& [e, c] : P.terms()) {
            if (mu(e, rank) > limit) continue;
            bool neg = false;
            for (int x : e) neg = neg || x < 0;
            if (neg)
                throw Error(ErrorKind::NonStabilization,
                            "residual term outside the pole ansatz at degree " + std::to_string(h));
            N.add_term(e, c);
        }
        int dN = h + degD;
        if (dN < 0)
            throw Error(ErrorKind::NonStabilization, "component of degree " + std::to_string(h) + " exceeds the ansatz");
        if (limit < dN * (n - 1) + 2)
            throw Error(ErrorKind::TruncationInsufficient,
                        "series order " + std::to_string(s.order) + " too low for degree " + std::to_string(h));
        out += inv * N;
    }
    return out;
}

RatFunc identify_and_exclude(const RatFunc& f, int nx, const std::vector<std::pair<int, int>>& pairs)
{
    int n = f.nvars();
    int ny = n - nx;
    if (nx < 0 || ny < 0) throw Error(ErrorKind::InvalidInput, "bad x/y split");
    std::set<int> xs, ys;
    std::vector<int> map(n, -1);
    for (int i = 0; i < nx; ++i) map[i] = i;
    std::vector<int> axis(n), diff(n * n, 0);
    for (int i = 0; i < n; ++i) axis[i] = f.axis(i);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) diff[i * n + j] = f.diff(i, j);
    for (auto [i, j] : pairs) {
        if (i < 1 || i > nx || j < 1 || j > ny) throw Error(ErrorKind::InvalidInput, "pair index out of range");
        if (!xs.insert(i).second || !ys.insert(j).second)
            throw Error(ErrorKind::InvalidInput, "renumbering collision: pairs must be disjoint");
        int xi = i - 1, yj = nx + j - 1;
        map[yj] = xi;
        diff[xi * n + yj] = 0;   // the excluded monomial factor
    }
    int next = nx;
    for (int j = 0; j < ny; ++j)
        if (map[nx + j] < 0) map[nx + j] = next++;
    RatFunc g = RatFunc::make(f.num(), axis, diff);
    // the numerator may have gained a (x_i - y_j) factor back only if f had none in its denominator
    return g.embed(next, map);
}

int lowest_needed_at_infinity(int axis, const std::vector<int>& diff, int top)
{
    (void)top;
    int degD = axis;
    for (int b : diff) degD += b;
    return -2 - degD;
}

RatFunc reconstruct_at_infinity(int var, const std::map<int, RatFunc>& coeffs, int axis,
                                const std::vector<int>& diff, int top, int nvars)
{
    int n = nvars;
    Poly D = Poly::monomial(n, [&] { Exps e(n, 0); e[var] = axis; return e; }(), 1);
    RatFunc inv = RatFunc::axis_pole(n, var, axis);
    for (int k = 0; k < n; ++k) {
        if (k == var || !diff[k]) continue;
        D = D * Poly::diff_power(n, var, k, diff[k]);
        inv = inv * RatFunc::diff_pole(n, var, k, diff[k]);
    }
    std::map<int, Poly> Dq = D.collect(var);
    int degD = Dq.empty() ? 0 : Dq.rbegin()->first;
    for (auto& [e, g] : coeffs)
        if (e > top && !g.is_zero())
            throw Error(ErrorKind::NonStabilization, "series exceeds the degree bound at infinity");
    RatFunc numer(n);
    for (int p = -2; p <= top + degD; ++p) {
        RatFunc Pp(n);
        for (auto& [q, dq] : Dq) {
            auto it = coeffs.find(p - q);
            if (it == coeffs.end()) continue;
            Pp += it->second * dq;
        }
        if (p < 0) {
            if (!Pp.is_zero())
                throw Error(ErrorKind::NonStabilization, "residual at order " + std::to_string(p) + " in z" + std::to_string(var + 1));
            continue;
        }
        if (Pp.is_zero()) continue;
        Exps e(n, 0);
        e[var] = p;
        numer += Pp * Poly::monomial(n, e, 1);
    }
    return numer * inv;
}

int highest_needed_at_point(int axis, const std::vector<int>& diff, int top)
{
    int degD = axis;
    for (int b : diff) degD += b;
    return top + degD + 2;
}

RatFunc reconstruct_at_point(int var, int base, const std::map<int, RatFunc>& coeffs, int axis,
                             const std::vector<int>& diff, int top, int nvars)
{
    int n = nvars;
    // D(zeta) with zeta carried as extra variable n
    int m = n + 1;
    Poly zeta = Poly::var(m, n);
    Poly D = Poly::constant(m, 1);
    RatFunc inv = RatFunc::axis_pole(n, var, axis);
    if (axis) D = D * (zeta + Poly::var(m, base)).pow(axis);
    for (int k = 0; k < n; ++k) {
        if (k == var || !diff[k]) continue;
        Poly f = k == base ? zeta : zeta + Poly::var(m, base) - Poly::var(m, k);
        D = D * f.pow(diff[k]);
        inv = inv * RatFunc::diff_pole(n, var, k, diff[k]);
    }
    std::map<int, Poly> Dq;
    for (auto& [q, c] : D.collect(n)) {
        Poly p(n);
        for (auto& [e, x] : c.terms()) p.add_term(Exps(e.begin(), e.begin() + n), x);
        Dq.emplace(q, p);
    }
    int degD = Dq.empty() ? 0 : Dq.rbegin()->first;
    int hi = top + degD + 2;
    int lo = coeffs.empty() ? 0 : coeffs.begin()->first;
    Poly shift = Poly::var(n, var) - Poly::var(n, base);
    RatFunc numer(n);
    Poly power = Poly::constant(n, 1);
    for (int p = std::min(lo, 0); p <= hi; ++p) {
        RatFunc Pp(n);
        for (auto& [q, dq] : Dq) {
            auto it = coeffs.find(p - q);
            if (it == coeffs.end()) continue;
            Pp += it->second * dq;
        }
        if (p < 0 || p > top + degD) {
            if (!Pp.is_zero())
                throw Error(ErrorKind::NonStabilization, "residual at order " + std::to_string(p) + " around z" +
                                                             std::to_string(var + 1) + "=z" + std::to_string(base + 1));
            continue;
        }
        if (!Pp.is_zero()) numer += Pp * power;
        power = power * shift;
    }
    return numer * inv;
}

}  // namespace vcoh
