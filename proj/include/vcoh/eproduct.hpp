#ifndef VCOH_EPRODUCT_HPP
#define VCOH_EPRODUCT_HPP

#include "vcoh/differential.hpp"

#include <map>
#include <utility>
#include <vector>

namespace vcoh {

// Coinciding parameters of the two factors: (i, j) one-based means x_i = y_j.
// The excluded slot j of the second factor receives the first factor's input i.
// t is the number of shared composable operators, declared by the caller.
struct ExclusionList {
    std::vector<std::pair<int, int>> pairs;
    int t = 0;

    int r() const { return static_cast<int>(pairs.size()); }
    void validate(int k, int n) const;
};

enum class ZetaPolicy { Independent, Pinched };

// Truncated epsilon series.  coeffs[l] is the epsilon^l coefficient, itself a
// cochain of degree k+n-r with two trailing parameters t_a = -zeta_a.
struct EpsSeries {
    int order = 0;
    ZetaPolicy policy = ZetaPolicy::Independent;
    int degree = 0;
    int m = 0;
    std::map<int, Cochain> coeffs;

    const Cochain& at(int l) const;
    int nvars() const { return degree + 2; }
    EpsSeries operator-(const EpsSeries& o) const;
    EpsSeries operator+(const EpsSeries& o) const;
    EpsSeries operator*(const Q& c) const;

    // sum_l eps^l coeff_l at a point; under the pinched policy t_2 is replaced
    // by eps / t_1 (zeta_2 = eps / zeta_1), so the point omits t_2
    Q value(const FockState& wp, const std::vector<FockState>& in, const std::vector<Q>& point,
            const Q& eps) const;
    nlohmann::json to_json(const std::vector<FockState>& in, int dual_cutoff) const;
};

// sum_{u in V_l} <w', Y_WV(Phi(v; x), zeta_1) u> <w', Y_WV(Psi(v'; y), zeta_2) ubar>
// for l = 0..L, both factors paired with the same w'.  Variables of each
// coefficient: x_1..x_k, the y not excluded, t_1, t_2.  basis_change[l], when
// present, replaces the basis u of V_l by u P (the dual basis follows).
EpsSeries eps_product(const Cochain& phi, const Cochain& psi, const ExclusionList& excl, int L,
                      const std::map<int, Matrix>& basis_change = {});

// a cochain as a series: the epsilon^0 coefficient, constant in t_1, t_2
EpsSeries constant_series(const Cochain& c, int L);

// random invertible integer matrices for V_0..V_L, seeded
std::map<int, Matrix> random_basis_change(const VertexAlgebra& va, int L, std::uint64_t seed);
// recomputes the product in a second basis and compares on the scope
CheckReport check_basis_independence(const Cochain& phi, const Cochain& psi, const ExclusionList& excl, int L,
                                     std::uint64_t seed, const Scope& sc);

// sigma acting on every coefficient; parameters are left alone
EpsSeries sigma_act_product(const Permutation& sigma, const EpsSeries& s);

EpsSeries commutator(const Cochain& phi, const Cochain& psi, const ExclusionList& excl, int L);

// entrywise zero check of every coefficient
CheckReport check_zero(const EpsSeries& s, const Scope& sc);
CheckReport check_equal(const EpsSeries& a, const EpsSeries& b, const Scope& sc);

// delta(Phi . Psi) against (delta Phi) . Psi + (-1)^k Phi . (delta Psi), coefficient
// by coefficient; the witness names the first failing coefficient
struct LeibnizReport {
    int k = 0, n = 0, r = 0;
    int sign = 1;
    int slot_n = 0, slot_m = 0;
    CheckReport result;
    nlohmann::json to_json() const;
};
LeibnizReport check_leibniz(const Cochain& phi, const Cochain& psi, const ExclusionList& excl, int L,
                            const Scope& sc);

}  // namespace vcoh

#endif
