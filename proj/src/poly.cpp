#include "vcoh/poly.hpp"

#include <algorithm>
#include <cctype>

namespace vcoh {

Poly Poly::constant(int n, const Q& c)
{
    Poly p(n);
    p.add_term(Exps(n, 0), c);
    return p;
}

Poly Poly::var(int n, int i)
{
    Exps e(n, 0);
    e[i] = 1;
    return monomial(n, e, 1);
}

Poly Poly::monomial(int n, const Exps& e, const Q& c)
{
    Poly p(n);
    p.add_term(e, c);
    return p;
}

Poly Poly::diff_power(int n, int i, int j, int k)
{
    // binomial expansion of (z_i - z_j)^k
    Poly p(n);
    Q c = 1;
    for (int r = 0; r <= k; ++r) {
        Exps e(n, 0);
        e[i] += k - r;
        e[j] += r;
        p.add_term(e, (r % 2 ? -c : c));
        c = c * (k - r) / (r + 1);
    }
    return p;
}

void Poly::add_term(const Exps& e, const Q& c)
{
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& o)
{
    for (auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Poly Poly::operator+(const Poly& o) const
{
    Poly r = *this;
    r += o;
    return r;
}

Poly Poly::operator-() const
{
    Poly r = *this;
    for (auto& kv : r.terms_) kv.second = -kv.second;
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Q& c) const
{
    if (c == 0) return Poly(n_);
    Poly r = *this;
    for (auto& kv : r.terms_) kv.second *= c;
    return r;
}

Poly Poly::operator*(const Poly& o) const
{
    Poly r(n_);
    Exps e(n_);
    for (auto& [a, ca] : terms_)
        for (auto& [b, cb] : o.terms_) {
            for (int i = 0; i < n_; ++i) e[i] = a[i] + b[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

Poly Poly::pow(int k) const
{
    Poly r = constant(n_, 1);
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
}

bool Poly::is_polynomial() const
{
    for (auto& kv : terms_)
        for (int x : kv.first)
            if (x < 0) return false;
    return true;
}

int Poly::min_exp(int i) const
{
    if (terms_.empty()) return 0;
    int m = terms_.begin()->first[i];
    for (auto& kv : terms_) m = std::min(m, kv.first[i]);
    return m;
}

int Poly::max_exp(int i) const
{
    if (terms_.empty()) return 0;
    int m = terms_.begin()->first[i];
    for (auto& kv : terms_) m = std::max(m, kv.first[i]);
    return m;
}

bool Poly::homogeneous(int& deg) const
{
    bool first = true;
    for (auto& kv : terms_) {
        int d = 0;
        for (int x : kv.first) d += x;
        if (first) {
            deg = d;
            first = false;
        } else if (d != deg) {
            return false;
        }
    }
    if (first) deg = 0;
    return true;
}

bool Poly::depends_on(int i) const
{
    for (auto& kv : terms_)
        if (kv.first[i] != 0) return true;
    return false;
}

Poly Poly::derivative(int i) const
{
    Poly r(n_);
    for (auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Exps f = e;
        f[i] -= 1;
        r.add_term(f, c * e[i]);
    }
    return r;
}

Poly Poly::permute(const Permutation& sigma) const
{
    Poly r(n_);
    Exps f(n_);
    for (auto& [e, c] : terms_) {
        for (int i = 0; i < n_; ++i) f[sigma(i)] = e[i];
        r.add_term(f, c);
    }
    return r;
}

Poly Poly::embed(int n_new, const std::vector<int>& map) const
{
    Poly r(n_new);
    for (auto& [e, c] : terms_) {
        Exps f(n_new, 0);
        for (int i = 0; i < n_; ++i) f[map[i]] += e[i];
        r.add_term(f, c);
    }
    return r;
}

Poly Poly::substitute(int i, const Poly& p) const
{
    std::map<int, Poly> cols = collect(i);
    Poly r(n_);
    std::vector<Poly> powers{constant(n_, 1)};
    for (auto& [k, coef] : cols) {
        if (k < 0) throw Error(ErrorKind::InvalidInput, "substitute into negative power");
        while (static_cast<int>(powers.size()) <= k) powers.push_back(powers.back() * p);
        r += coef * powers[k];
    }
    return r;
}

Poly Poly::scale_vars(const Q& lambda) const
{
    Poly r(n_);
    for (auto& [e, c] : terms_) {
        int d = 0;
        for (int x : e) d += x;
        Q f = 1;
        Q base = d >= 0 ? lambda : Q(1) / lambda;
        for (int k = 0; k < std::abs(d); ++k) f *= base;
        r.add_term(e, c * f);
    }
    return r;
}

Q Poly::eval(const std::vector<Q>& pt) const
{
    Q s = 0;
    for (auto& [e, c] : terms_) {
        Q t = c;
        for (int i = 0; i < n_; ++i) {
            if (e[i] >= 0) {
                for (int k = 0; k < e[i]; ++k) t *= pt[i];
            } else {
                for (int k = 0; k < -e[i]; ++k) t /= pt[i];
            }
        }
        s += t;
    }
    return s;
}

std::map<int, Poly> Poly::collect(int i) const
{
    std::map<int, Poly> out;
    for (auto& [e, c] : terms_) {
        Exps f = e;
        f[i] = 0;
        auto it = out.find(e[i]);
        if (it == out.end()) it = out.emplace(e[i], Poly(n_)).first;
        it->second.add_term(f, c);
    }
    return out;
}

bool Poly::divide_var(int i, Poly& q) const
{
    Poly r(n_);
    for (auto& [e, c] : terms_) {
        if (e[i] < 1) return false;
        Exps f = e;
        f[i] -= 1;
        r.add_term(f, c);
    }
    q = r;
    return true;
}

bool Poly::divide_diff(int i, int j, Poly& q) const
{
    // z_i^e = (z_i - z_j) sum_{k<e} z_i^{e-1-k} z_j^k + z_j^e
    Poly quo(n_), rem(n_);
    for (auto& [e, c] : terms_) {
        if (e[i] < 0 || e[j] < 0) return false;
        Exps r = e;
        r[j] += r[i];
        r[i] = 0;
        rem.add_term(r, c);
        for (int k = 0; k < e[i]; ++k) {
            Exps f = e;
            f[i] = e[i] - 1 - k;
            f[j] = e[j] + k;
            quo.add_term(f, c);
        }
    }
    if (!rem.is_zero()) return false;
    q = quo;
    return true;
}

std::string Poly::str(const std::vector<std::string>& names) const
{
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    // highest total degree first, then lexicographically larger exponents
    std::vector<std::pair<Exps, Q>> ts(terms_.rbegin(), terms_.rend());
    std::stable_sort(ts.begin(), ts.end(), [](auto& a, auto& b) {
        int da = 0, db = 0;
        for (int x : a.first) da += x;
        for (int x : b.first) db += x;
        return da > db;
    });
    for (auto& [e, c] : ts) {
        Q a = c;
        if (first) {
            if (a < 0) {
                s += "-";
                a = -a;
            }
        } else {
            s += a < 0 ? " - " : " + ";
            if (a < 0) a = -a;
        }
        first = false;
        s += q_str(a);
        for (int i = 0; i < n_; ++i) {
            if (e[i] == 0) continue;
            s += "*" + names[i];
            if (e[i] != 1) s += "^" + std::to_string(e[i]);
        }
    }
    return s;
}

namespace {

struct PolyParser {
    const std::string& s;
    const std::vector<std::string>& names;
    size_t pos = 0;
    int n;

    void skip()
    {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    [[noreturn]] void fail(const std::string& what)
    {
        throw Error(ErrorKind::Parse, what + " at offset " + std::to_string(pos) + " in '" + s + "'");
    }
    long integer()
    {
        skip();
        bool neg = false;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) neg = s[pos++] == '-';
        size_t st = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (st == pos) fail("expected integer");
        long v = std::stol(s.substr(st, pos - st));
        return neg ? -v : v;
    }
    // one factor: rational number or variable with optional exponent
    void factor(Q& coef, Exps& e)
    {
        skip();
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            size_t st = pos;
            while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/')) ++pos;
            coef *= q_parse(s.substr(st, pos - st));
            return;
        }
        size_t st = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
        std::string name = s.substr(st, pos - st);
        auto it = std::find(names.begin(), names.end(), name);
        if (name.empty() || it == names.end()) fail("unknown variable '" + name + "'");
        int k = 1;
        skip();
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            k = static_cast<int>(integer());
        }
        e[it - names.begin()] += k;
    }
    Poly parse()
    {
        Poly p(n);
        skip();
        if (s.substr(pos) == "0") return p;
        bool first = true;
        while (true) {
            skip();
            if (pos >= s.size()) break;
            Q sign = 1;
            if (s[pos] == '+' || s[pos] == '-') {
                if (s[pos] == '-') sign = -1;
                ++pos;
            } else if (!first) {
                fail("expected + or -");
            }
            first = false;
            Q coef = sign;
            Exps e(n, 0);
            factor(coef, e);
            skip();
            while (pos < s.size() && s[pos] == '*') {
                ++pos;
                factor(coef, e);
                skip();
            }
            p.add_term(e, coef);
        }
        if (first) fail("empty polynomial");
        return p;
    }
};

}  // namespace

Poly parse_poly(const std::string& s, const std::vector<std::string>& names)
{
    PolyParser pp{s, names, 0, static_cast<int>(names.size())};
    return pp.parse();
}

}  // namespace vcoh
