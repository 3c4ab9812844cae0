#include "vcoh/ratfunc.hpp"

#include <algorithm>

namespace vcoh {

std::vector<std::string> default_names(int n, const std::string& stem)
{
    std::vector<std::string> v;
    for (int i = 0; i < n; ++i) v.push_back(stem + std::to_string(i + 1));
    return v;
}

RatFunc::RatFunc(int n) : n_(n), num_(n), axis_(n, 0), diff_(n * n, 0) {}

RatFunc RatFunc::from_poly(const Poly& p)
{
    RatFunc r(p.nvars());
    r.num_ = p;
    r.canonicalize();
    return r;
}

RatFunc RatFunc::constant(int n, const Q& c) { return from_poly(Poly::constant(n, c)); }

RatFunc RatFunc::make(const Poly& num, std::vector<int> axis, std::vector<int> diff)
{
    RatFunc r(num.nvars());
    r.num_ = num;
    r.axis_ = std::move(axis);
    r.diff_ = std::move(diff);
    r.canonicalize();
    return r;
}

RatFunc RatFunc::axis_pole(int n, int i, int k)
{
    RatFunc r = constant(n, 1);
    r.axis_[i] = k;
    return r;
}

RatFunc RatFunc::diff_pole(int n, int i, int j, int k)
{
    if (i == j) throw Error(ErrorKind::InvalidInput, "diff pole needs distinct variables");
    RatFunc r = constant(n, (i > j && k % 2) ? -1 : 1);
    r.diff_[r.idx(std::min(i, j), std::max(i, j))] = k;
    return r;
}

int RatFunc::diff(int i, int j) const
{
    return diff_[idx(std::min(i, j), std::max(i, j))];
}

Poly RatFunc::denominator() const
{
    Exps e(n_, 0);
    for (int i = 0; i < n_; ++i) e[i] = axis_[i];
    Poly d = Poly::monomial(n_, e, 1);
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (diff_[idx(i, j)]) d = d * Poly::diff_power(n_, i, j, diff_[idx(i, j)]);
    return d;
}

int RatFunc::den_degree() const
{
    int d = 0;
    for (int x : axis_) d += x;
    for (int x : diff_) d += x;
    return d;
}

bool RatFunc::homogeneous(int& deg) const
{
    int d;
    if (!num_.homogeneous(d)) return false;
    deg = d - den_degree();
    return true;
}

void RatFunc::canonicalize()
{
    if (num_.is_zero()) {
        std::fill(axis_.begin(), axis_.end(), 0);
        std::fill(diff_.begin(), diff_.end(), 0);
        return;
    }
    for (int i = 0; i < n_; ++i) {
        int m = num_.min_exp(i);
        if (m < 0) {
            Exps e(n_, 0);
            e[i] = -m;
            num_ = num_ * Poly::monomial(n_, e, 1);
            axis_[i] += -m;
        }
    }
    Poly q(n_);
    for (int i = 0; i < n_; ++i)
        while (axis_[i] > 0 && num_.divide_var(i, q)) {
            num_ = q;
            --axis_[i];
        }
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            while (diff_[idx(i, j)] > 0 && num_.divide_diff(i, j, q)) {
                num_ = q;
                --diff_[idx(i, j)];
            }
}

RatFunc& RatFunc::operator+=(const RatFunc& o)
{
    *this = *this + o;
    return *this;
}

RatFunc RatFunc::operator+(const RatFunc& o) const
{
    if (n_ != o.n_) throw Error(ErrorKind::InvalidInput, "variable count mismatch");
    if (o.is_zero()) return *this;
    if (is_zero()) return o;
    RatFunc r(n_);
    auto lift = [&](const RatFunc& f) {
        Exps e(n_, 0);
        for (int i = 0; i < n_; ++i) e[i] = r.axis_[i] - f.axis_[i];
        Poly p = f.num_ * Poly::monomial(n_, e, 1);
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j) {
                int k = r.diff_[idx(i, j)] - f.diff_[idx(i, j)];
                if (k) p = p * Poly::diff_power(n_, i, j, k);
            }
        return p;
    };
    for (int i = 0; i < n_; ++i) r.axis_[i] = std::max(axis_[i], o.axis_[i]);
    for (size_t k = 0; k < diff_.size(); ++k) r.diff_[k] = std::max(diff_[k], o.diff_[k]);
    r.num_ = lift(*this) + lift(o);
    r.canonicalize();
    return r;
}

RatFunc RatFunc::operator-() const
{
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator*(const RatFunc& o) const
{
    if (n_ != o.n_) throw Error(ErrorKind::InvalidInput, "variable count mismatch");
    if (is_zero() || o.is_zero()) return RatFunc(n_);
    RatFunc r(n_);
    r.num_ = num_ * o.num_;
    for (int i = 0; i < n_; ++i) r.axis_[i] = axis_[i] + o.axis_[i];
    for (size_t k = 0; k < diff_.size(); ++k) r.diff_[k] = diff_[k] + o.diff_[k];
    r.canonicalize();
    return r;
}

RatFunc RatFunc::operator*(const Q& c) const
{
    if (c == 0) return RatFunc(n_);
    RatFunc r = *this;
    r.num_ = r.num_ * c;
    return r;
}

RatFunc RatFunc::operator*(const Poly& p) const { return *this * from_poly(p); }

bool RatFunc::operator==(const RatFunc& o) const
{
    return n_ == o.n_ && num_ == o.num_ && axis_ == o.axis_ && diff_ == o.diff_;
}

RatFunc RatFunc::derivative(int i) const
{
    if (is_zero()) return *this;
    // d(N/D) = N'/D - N * (dD/D) / D
    RatFunc r = make(num_.derivative(i), axis_, diff_);
    if (axis_[i]) {
        std::vector<int> a = axis_;
        a[i] += 1;
        r += make(num_ * Q(-axis_[i]), a, diff_);
    }
    for (int j = 0; j < n_; ++j) {
        if (j == i) continue;
        int b = diff(i, j);
        if (!b) continue;
        std::vector<int> d = diff_;
        d[idx(std::min(i, j), std::max(i, j))] += 1;
        // d/dz_i (z_i - z_j)^{-b} = -b (z_i - z_j)^{-b-1}; sign flips when the pair is stored as (z_j - z_i)
        Q c = i < j ? Q(-b) : Q(b);
        r += make(num_ * c, axis_, d);
    }
    return r;
}

RatFunc RatFunc::permute(const Permutation& sigma) const
{
    RatFunc r(n_);
    r.num_ = num_.permute(sigma);
    for (int i = 0; i < n_; ++i) r.axis_[sigma(i)] = axis_[i];
    Q sign = 1;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
            int b = diff_[idx(i, j)];
            if (!b) continue;
            int a = sigma(i), c = sigma(j);
            if (a > c && b % 2) sign = -sign;
            r.diff_[idx(std::min(a, c), std::max(a, c))] = b;
        }
    r.num_ = r.num_ * sign;
    return r;
}

RatFunc RatFunc::embed(int n_new, const std::vector<int>& map) const
{
    RatFunc r(n_new);
    r.num_ = num_.embed(n_new, map);
    Q sign = 1;
    for (int i = 0; i < n_; ++i) r.axis_[map[i]] += axis_[i];
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
            int b = diff_[idx(i, j)];
            if (!b) continue;
            int a = map[i], c = map[j];
            if (a == c) throw Error(ErrorKind::InvalidInput, "embedding identifies a pole pair");
            if (a > c && b % 2) sign = -sign;
            r.diff_[std::min(a, c) * n_new + std::max(a, c)] += b;
        }
    r.num_ = r.num_ * sign;
    r.canonicalize();
    return r;
}

RatFunc RatFunc::shift_substitute(int i, int j) const
{
    if (i == j) throw Error(ErrorKind::InvalidInput, "shift by the same variable");
    for (int k = 0; k < n_; ++k)
        if (k != i && diff(i, k))
            throw Error(ErrorKind::DomainViolation, "shift would create a pole outside the allowed locus");
    Poly sub = Poly::var(n_, i) - Poly::var(n_, j);
    RatFunc r = from_poly(num_.substitute(i, sub));
    std::vector<int> a = axis_;
    a[i] = 0;
    r = r * make(Poly::constant(n_, 1), a, diff_);
    if (axis_[i]) r = r * diff_pole(n_, i, j, axis_[i]);
    return r;
}

RatFunc RatFunc::scale_vars(const Q& lambda) const
{
    if (lambda == 0) throw Error(ErrorKind::InvalidInput, "zero scaling");
    RatFunc r = *this;
    r.num_ = num_.scale_vars(lambda);
    int d = den_degree();
    Q f = 1;
    for (int k = 0; k < d; ++k) f /= lambda;
    r.num_ = r.num_ * f;
    return r;
}

bool RatFunc::depends_on(int i) const
{
    if (axis_[i] || num_.depends_on(i)) return true;
    for (int j = 0; j < n_; ++j)
        if (j != i && diff(i, j)) return true;
    return false;
}

Q RatFunc::eval(const std::vector<Q>& pt) const
{
    Q d = denominator().eval(pt);
    if (d == 0) throw Error(ErrorKind::Singular, "evaluation at a pole");
    return num_.eval(pt) / d;
}

std::string RatFunc::num_str(const std::vector<std::string>& names) const { return num_.str(names); }

nlohmann::json RatFunc::to_json(const std::vector<std::string>& names) const
{
    nlohmann::json den = nlohmann::json::array();
    for (int i = 0; i < n_; ++i)
        if (axis_[i]) den.push_back({names[i], axis_[i]});
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (diff_[idx(i, j)]) den.push_back({names[i] + "-" + names[j], diff_[idx(i, j)]});
    return {{"num", num_.str(names)}, {"den", den}};
}

RatFunc RatFunc::from_json(const nlohmann::json& j, const std::vector<std::string>& names)
{
    int n = static_cast<int>(names.size());
    if (!j.is_object() || !j.contains("num") || !j["num"].is_string())
        throw Error(ErrorKind::Parse, "rational function needs a string 'num'");
    Poly num = parse_poly(j["num"].get<std::string>(), names);
    if (!num.is_polynomial()) throw Error(ErrorKind::Parse, "numerator has negative exponents");
    RatFunc r = from_poly(num);
    if (!j.contains("den")) return r;
    if (!j["den"].is_array()) throw Error(ErrorKind::Parse, "'den' must be a list");
    auto find = [&](const std::string& s) {
        auto it = std::find(names.begin(), names.end(), s);
        if (it == names.end()) throw Error(ErrorKind::Parse, "unknown variable '" + s + "'");
        return static_cast<int>(it - names.begin());
    };
    for (auto& f : j["den"]) {
        if (!f.is_array() || f.size() != 2 || !f[0].is_string() || !f[1].is_number_integer())
            throw Error(ErrorKind::Parse, "bad denominator factor");
        std::string s = f[0].get<std::string>();
        int k = f[1].get<int>();
        if (k < 0) throw Error(ErrorKind::Parse, "negative pole order");
        auto dash = s.find('-');
        if (dash == std::string::npos) {
            r = r * axis_pole(n, find(s), k);
        } else {
            int a = find(s.substr(0, dash)), b = find(s.substr(dash + 1));
            if (a == b) throw Error(ErrorKind::Parse, "degenerate difference factor");
            r = r * diff_pole(n, a, b, k);
        }
    }
    return r;
}

}  // namespace vcoh
