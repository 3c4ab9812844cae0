#ifndef VCOH_DIFFERENTIAL_HPP
#define VCOH_DIFFERENTIAL_HPP

#include "vcoh/cochains.hpp"

namespace vcoh {

// delta: C^n_m -> C^{n+1}_{m-1}, lazily composed:
//   Y o Phi + sum_i (-1)^i Phi o_i Y + (-1)^{n+1} sigma_{n+1,1..n}(Y o Phi)
// A cochain at the half slot is sent through delta_half.
Cochain delta(const Cochain& phi);

// <w', Y(v_3, z_3) Phi(v_1, v_2)(z_1, z_2)> obtained by skew symmetry from the
// intertwining operator Y_WV(Phi(..), -z_3) v_3 and one more e^{z_3 L(-1)}.
Cochain intertwiner_term(const Cochain& phi);

// C^2_{1/2} -> C^3_0:
//   R(E^(1)(v_1; Phi(v_2,v_3)) + Phi(v_1, E^(2)(v_2,v_3)))
// - R(Phi(E^(2)(v_1,v_2), v_3) + E^{W;(1)}_{WV}(Phi(v_1,v_2); v_3))
Cochain delta_half(const Cochain& phi);
// both grouped sums reconstruct (no residual, poles within the bounds) on the scope
CheckReport check_half_membership(const Cochain& phi, const Scope& sc);
// the degree 2 cochain viewed at the half slot
Cochain at_half(const Cochain& phi);

struct ComplexReport {
    bool precondition_ok = true;
    std::string precondition;   // which membership check failed
    CheckReport identity;       // delta(delta(phi)) == 0 entrywise
    bool ok() const { return precondition_ok && identity.ok; }
    nlohmann::json to_json() const;
};
// scope applies to the n+2 inputs of the double coboundary; half_path sends a
// 1-cochain through delta_half after the first step
ComplexReport check_complex(const Cochain& phi, const Scope& sc, bool half_path = false);
// zero check of a cochain on the scope; the witness names the first nonzero entry
CheckReport check_zero(const Cochain& phi, const Scope& sc);

// Values of a family of cochains on finitely many probes (w', tuple), flattened
// to coordinates: each value is multiplied by the common denominator of its
// probe and read off monomial by monomial.  Linear in the cochain.
Matrix value_matrix(const std::vector<Cochain>& family, const Scope& probes);

// generating family at slot (n, m): decorated E-built members with w = 1,
// projected onto the shuffle-closed part
std::vector<Cochain> generating_family(int n, int m, bool half, int max_power,
                                       const Correlators& eng = default_correlators());

struct CohomologyReport {
    int n = 0, m = 0;
    bool half = false;
    int family_size = 0;      // generators plus images of the incoming differential
    int span_dim = 0;         // rank of the family, cochains told apart by their values and coboundaries on the probes
    int rank_out = 0;         // rank of the outgoing differential
    int nullity_out = 0;      // nullity of the outgoing differential on family coefficients
    int relations = 0;        // coefficient vectors whose cochain and coboundary vanish on the probes
    int rank_in = 0;          // rank of the incoming differential
    int kernel_dim = 0;       // nullity_out - relations
    int cohomology_dim = 0;   // kernel_dim - rank_in, relative to the family and the probes
    bool rank_nullity = false;
    bool image_in_kernel = false;
    double seconds = 0;
    nlohmann::json to_json() const;
};
CohomologyReport truncated_cohomology(int n, int m, bool half, int max_power, const Scope& probes,
                                      const Correlators& eng = default_correlators());

}  // namespace vcoh

#endif
