#ifndef VCOH_POLY_HPP
#define VCOH_POLY_HPP

#include "vcoh/permutation.hpp"
#include "vcoh/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace vcoh {

using Exps = std::vector<int>;

// Sparse Laurent polynomial in z_1..z_n with rational coefficients.
// Negative exponents are allowed; RatFunc numerators never carry them.
class Poly {
public:
    explicit Poly(int nvars = 0) : n_(nvars) {}
    static Poly constant(int n, const Q& c);
    static Poly var(int n, int i);
    static Poly monomial(int n, const Exps& e, const Q& c);
    // (z_i - z_j)^k with k >= 0
    static Poly diff_power(int n, int i, int j, int k);

    int nvars() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Exps, Q>& terms() const { return terms_; }
    size_t size() const { return terms_.size(); }

    void add_term(const Exps& e, const Q& c);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Q& c) const;
    Poly& operator+=(const Poly& o);
    bool operator==(const Poly& o) const { return n_ == o.n_ && terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly pow(int k) const;
    bool is_polynomial() const;
    int min_exp(int i) const;   // over terms; 0 for the zero poly
    int max_exp(int i) const;
    // true and sets deg when all terms share one total degree
    bool homogeneous(int& deg) const;
    bool depends_on(int i) const;

    Poly derivative(int i) const;
    // z_i replaced by z_{sigma(i)}
    Poly permute(const Permutation& sigma) const;
    // variable i goes to position map[i] of an n_new variable ring
    Poly embed(int n_new, const std::vector<int>& map) const;
    // z_i replaced by p (requires nonnegative exponents in z_i)
    Poly substitute(int i, const Poly& p) const;
    Poly scale_vars(const Q& lambda) const;   // z -> lambda z
    Q eval(const std::vector<Q>& pt) const;
    // coefficient list in z_i (exponent -> coefficient poly free of z_i)
    std::map<int, Poly> collect(int i) const;

    // exact division; false if not divisible
    bool divide_var(int i, Poly& q) const;
    bool divide_diff(int i, int j, Poly& q) const;   // by (z_i - z_j)

    std::string str(const std::vector<std::string>& names) const;

private:
    int n_;
    std::map<Exps, Q> terms_;
};

Poly parse_poly(const std::string& s, const std::vector<std::string>& names);

}  // namespace vcoh

#endif
