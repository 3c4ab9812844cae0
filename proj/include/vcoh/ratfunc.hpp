#ifndef VCOH_RATFUNC_HPP
#define VCOH_RATFUNC_HPP

#include "vcoh/poly.hpp"

#include "json.hpp"
#include <string>
#include <vector>

namespace vcoh {

std::vector<std::string> default_names(int n, const std::string& stem = "z");

// num / (prod z_i^{a_i} prod_{i<j} (z_i - z_j)^{b_ij}), kept reduced:
// num is a polynomial sharing no factor z_i or (z_i - z_j) with the denominator.
class RatFunc {
public:
    explicit RatFunc(int n = 0);
    static RatFunc from_poly(const Poly& p);
    static RatFunc constant(int n, const Q& c);
    static RatFunc make(const Poly& num, std::vector<int> axis, std::vector<int> diff);
    // 1/z_i^k
    static RatFunc axis_pole(int n, int i, int k);
    // 1/(z_i - z_j)^k, any i != j
    static RatFunc diff_pole(int n, int i, int j, int k);

    int nvars() const { return n_; }
    const Poly& num() const { return num_; }
    int axis(int i) const { return axis_[i]; }
    int diff(int i, int j) const;   // order of the (z_i - z_j) pole, symmetric in i, j
    Poly denominator() const;
    int den_degree() const;
    bool is_zero() const { return num_.is_zero(); }
    // total degree when homogeneous
    bool homogeneous(int& deg) const;

    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator-() const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc operator*(const Q& c) const;
    RatFunc operator*(const Poly& p) const;
    RatFunc& operator+=(const RatFunc& o);
    bool operator==(const RatFunc& o) const;
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    RatFunc derivative(int i) const;
    // z_i replaced by z_{sigma(i)}
    RatFunc permute(const Permutation& sigma) const;
    RatFunc embed(int n_new, const std::vector<int>& map) const;
    // z_i replaced by z_i - z_j; only allowed when no pole of the form z_i - z_k exists
    RatFunc shift_substitute(int i, int j) const;
    RatFunc scale_vars(const Q& lambda) const;
    bool depends_on(int i) const;
    Q eval(const std::vector<Q>& pt) const;

    std::string num_str(const std::vector<std::string>& names) const;
    nlohmann::json to_json(const std::vector<std::string>& names) const;
    nlohmann::json to_json() const { return to_json(default_names(n_)); }
    static RatFunc from_json(const nlohmann::json& j, const std::vector<std::string>& names);
    static RatFunc from_json(const nlohmann::json& j, int n) { return from_json(j, default_names(n)); }

private:
    void canonicalize();
    int idx(int i, int j) const { return i * n_ + j; }

    int n_;
    Poly num_;
    std::vector<int> axis_;
    std::vector<int> diff_;   // n*n, only i<j used
};

}  // namespace vcoh

#endif
