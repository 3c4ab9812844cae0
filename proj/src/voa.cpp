#include "vcoh/voa.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace vcoh {

FockState::FockState(std::vector<int> p) : parts(std::move(p))
{
    for (int x : parts)
        if (x < 1) throw Error(ErrorKind::InvalidInput, "partition parts must be positive");
    std::sort(parts.begin(), parts.end(), std::greater<int>());
}

int FockState::weight() const
{
    int w = 0;
    for (int x : parts) w += x;
    return w;
}

std::string FockState::str() const
{
    std::string s;
    size_t i = 0;
    while (i < parts.size()) {
        size_t j = i;
        while (j < parts.size() && parts[j] == parts[i]) ++j;
        s += "a(-" + std::to_string(parts[i]) + ")";
        if (j - i > 1) s += "^" + std::to_string(j - i);
        i = j;
    }
    return s + "|0>";
}

FockState FockState::parse(const std::string& text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    std::vector<int> parts;
    size_t pos = 0;
    auto fail = [&] { throw Error(ErrorKind::Parse, "bad Fock state '" + text + "'"); };
    auto number = [&] {
        size_t st = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (st == pos || pos - st > 6) fail();
        return std::stoi(s.substr(st, pos - st));
    };
    while (pos < s.size() && s.compare(pos, 3, "|0>") != 0) {
        if (s.compare(pos, 3, "a(-") != 0) fail();
        pos += 3;
        int n = number();
        if (pos >= s.size() || s[pos] != ')' || n < 1) fail();
        ++pos;
        int k = 1;
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            k = number();
            if (k < 1) fail();
        }
        for (int i = 0; i < k; ++i) parts.push_back(n);
    }
    if (s.compare(pos, 3, "|0>") != 0 || pos + 3 != s.size()) fail();
    return FockState(parts);
}

Q ModuleVector::coeff(const FockState& s) const
{
    auto it = c_.find(s);
    return it == c_.end() ? Q(0) : it->second;
}

void ModuleVector::add(const FockState& s, const Q& c)
{
    if (c == 0) return;
    auto it = c_.find(s);
    if (it == c_.end()) {
        c_.emplace(s, c);
    } else {
        it->second += c;
        if (it->second == 0) c_.erase(it);
    }
}

ModuleVector& ModuleVector::operator+=(const ModuleVector& o)
{
    for (auto& [s, c] : o.c_) add(s, c);
    return *this;
}

ModuleVector ModuleVector::operator+(const ModuleVector& o) const
{
    ModuleVector r = *this;
    r += o;
    return r;
}

ModuleVector ModuleVector::operator*(const Q& c) const
{
    ModuleVector r;
    if (c == 0) return r;
    for (auto& [s, x] : c_) r.c_.emplace(s, x * c);
    return r;
}

ModuleVector ModuleVector::operator-(const ModuleVector& o) const { return *this + o * Q(-1); }

ModuleVector ModuleVector::project_weight(int m) const
{
    ModuleVector r;
    for (auto& [s, c] : c_)
        if (s.weight() == m) r.c_.emplace(s, c);
    return r;
}

int ModuleVector::max_weight() const
{
    int m = -1;
    for (auto& kv : c_) m = std::max(m, kv.first.weight());
    return m;
}

std::string ModuleVector::str() const
{
    if (c_.empty()) return "0";
    std::string s;
    for (auto& [st, c] : c_) {
        if (!s.empty()) s += " + ";
        s += q_str(c) + "*" + st.str();
    }
    return s;
}

nlohmann::json ModuleVector::to_json() const
{
    nlohmann::json j = nlohmann::json::array();
    for (auto& [s, c] : c_) j.push_back({s.str(), q_str(c)});
    return j;
}

ModuleVector ModuleVector::from_json(const nlohmann::json& j)
{
    if (!j.is_array()) throw Error(ErrorKind::Parse, "module vector must be a list of pairs");
    ModuleVector v;
    for (auto& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw Error(ErrorKind::Parse, "module vector entry must be [state, \"p/q\"]");
        v.add(FockState::parse(e[0].get<std::string>()), q_parse(e[1].get<std::string>()));
    }
    return v;
}

std::vector<FockState> partitions_of(int n)
{
    std::vector<FockState> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int left, int maxp) {
        if (left == 0) {
            out.emplace_back(cur);
            return;
        }
        for (int p = std::min(left, maxp); p >= 1; --p) {
            cur.push_back(p);
            rec(left - p, p);
            cur.pop_back();
        }
    };
    if (n >= 0) rec(n, n);
    return out;
}

void VertexAlgebra::check_weight(int w) const
{
    if (w > hard_limit_)
        throw Error(ErrorKind::CutoffExceeded,
                    "weight " + std::to_string(w) + " exceeds the limit " + std::to_string(hard_limit_));
}

ModuleVector VertexAlgebra::vertex_mode(const ModuleVector& v, int n, const ModuleVector& w) const
{
    ModuleVector r;
    for (auto& [a, ca] : v.components())
        for (auto& [b, cb] : w.components()) r += vertex_mode(a, n, b) * (ca * cb);
    return r;
}

ModuleVector VertexAlgebra::adjoint_mode(const FockState& u, int n, const ModuleVector& b, const Q& lam2) const
{
    ModuleVector r;
    std::map<int, ModuleVector> by_weight;
    for (auto& [s, c] : b.components()) by_weight[s.weight()].add(s, c);
    for (auto& [wb, part] : by_weight) {
        int l = wb - u.weight() + n + 1;
        if (l < 0) continue;
        const auto& B = basis(l);
        const Matrix& D = dual_matrix(l, lam2);
        for (size_t a = 0; a < B.size(); ++a) {
            Q c = bilinear_form(vertex_mode(u, n, B[a]), part, lam2);
            if (c == 0) continue;
            for (size_t x = 0; x < B.size(); ++x) {
                const Q& d = D(static_cast<int>(x), static_cast<int>(a));
                if (d != 0) r.add(B[x], c * d);
            }
        }
    }
    return r;
}

Q VertexAlgebra::bilinear_form(const ModuleVector& a, const ModuleVector& b, const Q& lam2) const
{
    Q s = 0;
    for (auto& [x, cx] : a.components())
        for (auto& [y, cy] : b.components())
            if (x.weight() == y.weight()) s += cx * cy * form(x, y, lam2);
    return s;
}

Matrix VertexAlgebra::gram(int l, const Q& lam2) const
{
    const auto& B = basis(l);
    int d = static_cast<int>(B.size());
    Matrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = form(B[i], B[j], lam2);
    return g;
}

const Matrix& VertexAlgebra::dual_matrix(int l, const Q& lam2) const
{
    auto key = std::make_pair(l, q_str(lam2));
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = dual_cache_.find(key);
        if (it != dual_cache_.end()) return it->second;
    }
    Matrix inv = inverse(gram(l, lam2));
    std::lock_guard<std::mutex> lk(mu_);
    return dual_cache_.emplace(key, inv).first->second;
}

std::pair<std::vector<ModuleVector>, std::vector<ModuleVector>> VertexAlgebra::dual_basis(int l, const Q& lam2) const
{
    const auto& B = basis(l);
    const Matrix& D = dual_matrix(l, lam2);
    std::vector<ModuleVector> u, ubar;
    for (auto& s : B) u.emplace_back(s);
    for (size_t b = 0; b < B.size(); ++b) {
        ModuleVector v;
        for (size_t a = 0; a < B.size(); ++a) v.add(B[a], D(static_cast<int>(a), static_cast<int>(b)));
        ubar.push_back(v);
    }
    return {u, ubar};
}

const std::vector<FockState>& Heisenberg::basis(int l) const
{
    check_weight(l);
    std::lock_guard<std::recursive_mutex> lk(rmu_);
    auto it = basis_cache_.find(l);
    if (it != basis_cache_.end()) return it->second;
    return basis_cache_.emplace(l, partitions_of(l)).first->second;
}

ModuleVector Heisenberg::mode(int m, const FockState& s) const
{
    ModuleVector r;
    if (m == 0) return r;
    if (m < 0) {
        std::vector<int> p = s.parts;
        p.push_back(-m);
        r.add(FockState(p), 1);
        return r;
    }
    std::vector<int> p = s.parts;
    auto it = std::find(p.begin(), p.end(), m);
    if (it == p.end()) return r;
    int mult = static_cast<int>(std::count(p.begin(), p.end(), m));
    p.erase(it);
    r.add(FockState(p), Q(m * mult));
    return r;
}

ModuleVector Heisenberg::mode(int m, const ModuleVector& v) const
{
    ModuleVector r;
    for (auto& [s, c] : v.components()) r += mode(m, s) * c;
    return r;
}

const ModuleVector& Heisenberg::vertex_mode(const FockState& v, int k, const FockState& y) const
{
    std::lock_guard<std::recursive_mutex> lk(rmu_);
    auto key = std::make_tuple(v, k, y);
    auto it = mode_cache_.find(key);
    if (it != mode_cache_.end()) return it->second;

    ModuleVector r;
    int target = v.weight() + y.weight() - k - 1;
    check_weight(std::max(target, std::max(v.weight(), y.weight())));
    if (v.is_vacuum()) {
        if (k == -1) r.add(y, 1);
    } else if (target >= 0) {
        // Y(a(-n)x, z) = (d^{(n-1)}a)(z)_- Y(x,z) + Y(x,z) (d^{(n-1)}a)(z)_+
        int n = v.parts[0];
        FockState x(std::vector<int>(v.parts.begin() + 1, v.parts.end()));
        int wx = x.weight(), wy = y.weight();
        for (int m = k - n + 1 - wx - wy; m <= -n; ++m) {
            Q c = binomial(-m - 1, n - 1);
            if (c == 0) continue;
            const ModuleVector& inner = vertex_mode(x, k - m - n, y);
            r += mode(m, inner) * c;
        }
        for (int m = 1; m <= wy; ++m) {
            Q c = binomial(-m - 1, n - 1);
            ModuleVector ay = mode(m, y);
            for (auto& [s, cs] : ay.components()) r += vertex_mode(x, k - m - n, s) * (c * cs);
        }
    }
    return mode_cache_.emplace(key, std::move(r)).first->second;
}

ModuleVector Heisenberg::virasoro(int k, const ModuleVector& v) const
{
    ModuleVector r;
    int top = std::max(0, v.max_weight()) + 2;
    switch (k) {
        case 0:
            for (int m = 1; m <= top; ++m) r += mode(-m, mode(m, v));
            break;
        case -1:
            for (int m = 1; m <= top; ++m) r += mode(-1 - m, mode(m, v));
            break;
        case 1:
            for (int m = 2; m <= top; ++m) r += mode(1 - m, mode(m, v));
            break;
        default:
            throw Error(ErrorKind::InvalidInput, "only L(-1), L(0), L(1) are provided");
    }
    return r;
}

ModuleVector Heisenberg::adjoint_mode(const FockState& u, int n, const ModuleVector& b, const Q& lam2) const
{
    // Y^dagger(u,z) = Y(exp(-z lambda^{-2} L(1)) (-z/lambda)^{-2L(0)} u, -lambda^2/z)
    int h = u.weight();
    ModuleVector r;
    ModuleVector l1u(u);
    Q jfact = 1;
    for (int j = 0; j <= h && !l1u.is_zero(); ++j) {
        if (j > 0) {
            l1u = virasoro(1, l1u);
            jfact *= j;
        }
        int k = 2 * h - j - n - 2;
        Q c = (j % 2 ? Q(-1) : Q(1)) / jfact;
        for (int i = 0; i < h - j; ++i) c *= lam2;
        // (-lambda^2)^{-k-1}
        Q base = -lam2;
        int e = -k - 1;
        for (int i = 0; i < std::abs(e); ++i) c = e > 0 ? Q(c * base) : Q(c / base);
        r += vertex_mode(l1u, k, b) * c;
    }
    return r;
}

Q Heisenberg::form(const FockState& a, const FockState& b, const Q& lam2) const
{
    if (a != b) return 0;
    Q v = 1;
    const auto& p = a.parts;
    for (size_t i = 0; i < p.size(); ++i) {
        int n = p[i];
        Q base = -lam2;
        Q f = -n;
        for (int k = 0; k < n; ++k) f /= base;
        // repeated parts contribute their multiplicity factorial
        size_t run = 1;
        while (i >= run && p[i - run] == n) ++run;
        v *= f * Q(static_cast<long>(run));
    }
    return v;
}

Q Heisenberg::form_by_adjoint(const FockState& a, const FockState& b, const Q& lam2) const
{
    if (a.weight() != b.weight()) return 0;
    if (a.is_vacuum()) return 1;
    std::lock_guard<std::recursive_mutex> lk(rmu_);
    auto key = std::make_tuple(a, b, lam2);
    auto it = form_cache_.find(key);
    if (it != form_cache_.end()) return it->second;
    // <a(-n) x, b> = <x, a^dagger(-n) b>
    int n = a.parts[0];
    FockState x(std::vector<int>(a.parts.begin() + 1, a.parts.end()));
    ModuleVector moved = adjoint_mode(FockState({1}), -n, ModuleVector(b), lam2);
    Q s = 0;
    for (auto& [y, c] : moved.components()) s += c * form_by_adjoint(x, y, lam2);
    form_cache_.emplace(key, s);
    return s;
}

MobiusConjugator MobiusConjugator::rational(const Q& l)
{
    if (l == 0) throw Error(ErrorKind::InvalidInput, "lambda must be nonzero");
    MobiusConjugator m;
    m.lambda = l;
    return m;
}

MobiusConjugator MobiusConjugator::from_eps(const Q& eps, int xi_sign)
{
    if (eps == 0) throw Error(ErrorKind::InvalidInput, "epsilon must be nonzero");
    if (xi_sign != 1 && xi_sign != -1) throw Error(ErrorKind::InvalidInput, "xi must be +i or -i");
    MobiusConjugator m;
    m.symbolic = true;
    m.eps = eps;
    m.xi_sign = xi_sign;
    return m;
}

Q MobiusConjugator::lambda_squared() const
{
    // (-xi sqrt(eps))^2 = xi^2 eps = -eps
    return symbolic ? Q(-eps) : Q(lambda * lambda);
}

std::string MobiusConjugator::str() const
{
    if (!symbolic) return q_str(lambda);
    return std::string(xi_sign > 0 ? "-i" : "i") + "*sqrt(" + q_str(eps) + ")";
}

const Heisenberg& default_instance()
{
    static Heisenberg h;
    return h;
}

}  // namespace vcoh
