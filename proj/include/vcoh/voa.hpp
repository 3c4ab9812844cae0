#ifndef VCOH_VOA_HPP
#define VCOH_VOA_HPP

#include "vcoh/linalg.hpp"
#include "vcoh/rational.hpp"

#include "json.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

namespace vcoh {

// a(-n_1)...a(-n_k)1 with n_1 >= ... >= n_k >= 1
struct FockState {
    std::vector<int> parts;

    FockState() = default;
    explicit FockState(std::vector<int> p);
    static FockState vacuum() { return FockState(); }
    int weight() const;
    int length() const { return static_cast<int>(parts.size()); }
    bool is_vacuum() const { return parts.empty(); }
    std::string str() const;   // "a(-2)a(-1)^2|0>"
    static FockState parse(const std::string& s);
    bool operator<(const FockState& o) const { return parts < o.parts; }
    bool operator==(const FockState& o) const { return parts == o.parts; }
    bool operator!=(const FockState& o) const { return parts != o.parts; }
};

class ModuleVector {
public:
    ModuleVector() = default;
    ModuleVector(const FockState& s, const Q& c = 1) { add(s, c); }

    const std::map<FockState, Q>& components() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    Q coeff(const FockState& s) const;
    void add(const FockState& s, const Q& c);

    ModuleVector operator+(const ModuleVector& o) const;
    ModuleVector operator-(const ModuleVector& o) const;
    ModuleVector operator*(const Q& c) const;
    ModuleVector& operator+=(const ModuleVector& o);
    bool operator==(const ModuleVector& o) const { return c_ == o.c_; }
    bool operator!=(const ModuleVector& o) const { return c_ != o.c_; }

    ModuleVector project_weight(int m) const;
    int max_weight() const;   // -1 for zero
    std::string str() const;
    nlohmann::json to_json() const;
    static ModuleVector from_json(const nlohmann::json& j);

private:
    std::map<FockState, Q> c_;
};

std::vector<FockState> partitions_of(int n);

// Interface of the vertex algebra instance used by the rest of the library.
// States are labelled by FockState; an instance fixes their meaning.
class VertexAlgebra {
public:
    virtual ~VertexAlgebra() = default;
    virtual std::string name() const = 0;
    virtual Q central_charge() const = 0;
    virtual const std::vector<FockState>& basis(int l) const = 0;
    // v(n) w for basis states
    virtual const ModuleVector& vertex_mode(const FockState& v, int n, const FockState& w) const = 0;
    virtual ModuleVector virasoro(int k, const ModuleVector& v) const = 0;
    // <a, b>_lambda with lam2 = lambda^2; the form only depends on lambda^2
    virtual Q form(const FockState& a, const FockState& b, const Q& lam2) const = 0;
    // pole order bound for <Y(u,x)Y(v,y)...> at x = y; also used for x = 0 against a ket
    virtual int pole_bound(const FockState& u, const FockState& v) const = 0;
    // u^dagger(n) b, characterised by <u(n) a, b> = <a, u^dagger(n) b>; generic route through the dual basis
    virtual ModuleVector adjoint_mode(const FockState& u, int n, const ModuleVector& b, const Q& lam2) const;
    int hard_limit() const { return hard_limit_; }
    void set_hard_limit(int k) { hard_limit_ = k; }

    ModuleVector vertex_mode(const ModuleVector& v, int n, const ModuleVector& w) const;
    Q bilinear_form(const ModuleVector& a, const ModuleVector& b, const Q& lam2 = 1) const;
    Matrix gram(int l, const Q& lam2 = 1) const;
    // dual basis coefficients: ubar^beta = sum_alpha D(alpha, beta) u^alpha
    const Matrix& dual_matrix(int l, const Q& lam2 = 1) const;
    std::pair<std::vector<ModuleVector>, std::vector<ModuleVector>> dual_basis(int l, const Q& lam2 = 1) const;
    ModuleVector L(int k, const ModuleVector& v) const { return virasoro(k, v); }

protected:
    void check_weight(int w) const;
    int hard_limit_ = 40;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, std::string>, Matrix> dual_cache_;
};

class Heisenberg : public VertexAlgebra {
public:
    std::string name() const override { return "heisenberg-rank1"; }
    Q central_charge() const override { return 1; }
    const std::vector<FockState>& basis(int l) const override;
    const ModuleVector& vertex_mode(const FockState& v, int n, const FockState& w) const override;
    using VertexAlgebra::vertex_mode;
    ModuleVector virasoro(int k, const ModuleVector& v) const override;
    // diagonal in the partition basis: <a(-n),a(-n)> = -n (-lambda^2)^{-n}, times multiplicity factorials
    Q form(const FockState& a, const FockState& b, const Q& lam2) const override;
    // same form by moving creation modes across with the adjoint vertex operator
    Q form_by_adjoint(const FockState& a, const FockState& b, const Q& lam2) const;
    int pole_bound(const FockState& u, const FockState& v) const override { return u.weight() + v.weight(); }

    // Heisenberg mode a(m)
    ModuleVector mode(int m, const ModuleVector& v) const;
    ModuleVector mode(int m, const FockState& s) const;
    // u^dagger(n) b from the Mobius-conjugated vertex operator
    ModuleVector adjoint_mode(const FockState& u, int n, const ModuleVector& b, const Q& lam2) const override;
    // oscillator number, commutes with L(-1), L(0), L(1)
    static int oscillators(const FockState& s) { return s.length(); }

private:
    mutable std::map<int, std::vector<FockState>> basis_cache_;
    mutable std::map<std::tuple<FockState, int, FockState>, ModuleVector> mode_cache_;
    mutable std::map<std::tuple<FockState, FockState, Q>, Q> form_cache_;
    mutable std::recursive_mutex rmu_;
};

// gamma_lambda : z -> -lambda^2 / z.  lambda is rational, or -xi sqrt(eps) with xi = +-i
// tracked symbolically, in which case lambda^2 = -eps is still rational.
struct MobiusConjugator {
    bool symbolic = false;
    Q lambda = 1;    // when not symbolic
    Q eps = 0;       // when symbolic
    int xi_sign = 1; // xi = xi_sign * i

    static MobiusConjugator rational(const Q& l);
    static MobiusConjugator from_eps(const Q& eps, int xi_sign);
    Q lambda_squared() const;
    Q apply(const Q& z) const { return -lambda_squared() / z; }
    std::string str() const;
};

const Heisenberg& default_instance();

}  // namespace vcoh

#endif
