#ifndef VCOH_CORRELATORS_HPP
#define VCOH_CORRELATORS_HPP

#include "vcoh/laurent.hpp"
#include "vcoh/voa.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <vector>

namespace vcoh {

// W-bar valued rational function at truncation.  entries[b] is the pairing
// <b, value> for each basis state b of weight <= the dual cutoff; tags[i] is the
// differential weight wt(v_i) carried by slot i.
struct RationalSection {
    int nvars = 0;
    int dual_cutoff = 0;
    std::vector<int> tags;
    std::map<FockState, RatFunc> entries;

    bool operator==(const RationalSection& o) const
    {
        return nvars == o.nvars && tags == o.tags && entries == o.entries;
    }
    RatFunc pair(const FockState& b) const;
    nlohmann::json to_json() const;
    static RationalSection from_json(const nlohmann::json& j);
};

struct CorrelatorRequest {
    ModuleVector wprime;
    std::vector<ModuleVector> insertions;   // slot i sits at z_{i+1}
    ModuleVector ket;
    std::optional<PoleAnsatz> ansatz;       // defaults to the instance bounds
};

class Correlators {
public:
    explicit Correlators(const VertexAlgebra& va, const Q& lam2 = 1) : va_(va), lam2_(lam2) {}

    const VertexAlgebra& algebra() const { return va_; }
    const Q& lam2() const { return lam2_; }

    // R(<w', Y(v_1,z_1)...Y(v_n,z_n) w>) by mode sums in |z_1| > ... > |z_n|
    RatFunc matrix_element(const FockState& wp, const std::vector<FockState>& vs, const FockState& w) const;
    RatFunc matrix_element(const ModuleVector& wp, const std::vector<ModuleVector>& vs, const ModuleVector& w) const;
    RatFunc matrix_element(const CorrelatorRequest& req) const;
    // same function computed by expanding in |z_{order[0]}| > |z_{order[1]}| > ...
    RatFunc matrix_element_in_region(const FockState& wp, const std::vector<FockState>& vs, const FockState& w,
                                     const std::vector<int>& order) const;

    // instance pole ansatz for a correlator with these insertions and ket
    PoleAnsatz default_ansatz(const std::vector<FockState>& vs, const FockState& w) const;

    RationalSection E(const std::vector<ModuleVector>& vs, const ModuleVector& w, int dual_cutoff) const;
    // <w', Y^W_WV(w, z) v> = <w', e^{zL(-1)} Y(v,-z) w>, one variable
    RatFunc intertwiner_pair(const FockState& wp, const ModuleVector& w, const ModuleVector& v) const;
    RationalSection intertwiner(const ModuleVector& w, const ModuleVector& v, int dual_cutoff) const;

    size_t cache_size() const;

    // coefficients x_b with sum_a <w', v(k) u_a> ubar_a = sum_b x_b u_b, u_b of weight s
    const std::vector<std::pair<FockState, Q>>& dual_expansion(const FockState& wp, const FockState& v,
                                                                int s) const;

private:
    RatFunc compute(const FockState& wp, const std::vector<FockState>& vs, const FockState& w,
                    const PoleAnsatz* ans) const;

    const VertexAlgebra& va_;
    Q lam2_;
    mutable std::recursive_mutex mu_;
    mutable std::map<std::vector<FockState>, RatFunc> cache_;
    mutable std::map<std::tuple<FockState, FockState, int>, std::vector<std::pair<FockState, Q>>> expansion_cache_;
};

// Independent engine for pure a(-1)1 insertions: Wick pair partitions of free-field contractions.
RatFunc wick_matrix_element(const FockState& wp, int n, const FockState& w, const Q& lam2 = 1);

}  // namespace vcoh

#endif
