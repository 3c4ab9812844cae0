#ifndef VCOH_LAURENT_HPP
#define VCOH_LAURENT_HPP

#include "vcoh/ratfunc.hpp"

#include <map>
#include <vector>

namespace vcoh {

// Laurent expansion in the region |z_{region[0]}| > |z_{region[1]}| > ...
// Exact for every monomial whose weighted degree sum_k k * e_{region[k]}
// is at most `order`; nothing above that is stored.
struct TruncatedSeries {
    int nvars = 0;
    std::vector<int> region;
    int order = 0;
    Poly terms;

    int weighted_degree(const Exps& e) const;
};

struct PoleAnsatz {
    std::vector<int> axis;   // a_i
    std::vector<int> diff;   // n*n, symmetric use, b_ij for i != j

    static PoleAnsatz zero(int n);
    static PoleAnsatz of(const RatFunc& f);
    int b(int i, int j) const { return diff[i * static_cast<int>(axis.size()) + j]; }
    void set_b(int i, int j, int v);
};

TruncatedSeries expand_region(const RatFunc& f, int order, const std::vector<int>& region);

// Smallest order for which reconstruct() can certify a homogeneous component
// of degree `deg` within the ansatz.
int required_order(const std::vector<int>& region, int deg, const PoleAnsatz& ans);

RatFunc reconstruct(const TruncatedSeries& s, const PoleAnsatz& ans);

// f over x_1..x_nx followed by y_1..y_ny; pairs are (i, j) one-based with x_i = y_j.
RatFunc identify_and_exclude(const RatFunc& f, int nx, const std::vector<std::pair<int, int>>& pairs);

// Univariate reconstruction in z_var from a series at z_var = infinity:
// coeffs[e] multiplies z_var^e and must not depend on z_var.  The ansatz gives
// the pole orders of the result at z_var = 0 (axis) and z_var = z_k (diff[k]),
// `top` bounds the degree of the result at infinity.  Needs coefficients for
// e in [-2 - deg D, top].
RatFunc reconstruct_at_infinity(int var, const std::map<int, RatFunc>& coeffs, int axis,
                                const std::vector<int>& diff, int top, int nvars);
int lowest_needed_at_infinity(int axis, const std::vector<int>& diff, int top);

// Univariate reconstruction from a series in zeta = z_var - z_base around zeta = 0:
// coeffs[e] multiplies zeta^e and may depend on every variable except z_var.
// The result is returned as a function of z_var.  Needs coefficients for
// e up to top + deg D + 2.
RatFunc reconstruct_at_point(int var, int base, const std::map<int, RatFunc>& coeffs, int axis,
                             const std::vector<int>& diff, int top, int nvars);
int highest_needed_at_point(int axis, const std::vector<int>& diff, int top);

}  // namespace vcoh

#endif
