#ifndef VCOH_COCHAINS_HPP
#define VCOH_COCHAINS_HPP

#include "vcoh/correlators.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace vcoh {

enum class Flag { Unchecked, Verified, Failed };
std::string flag_str(Flag f);
Flag flag_parse(const std::string& s);

struct Flags {
    Flag lder = Flag::Unchecked;
    Flag l0 = Flag::Unchecked;
    Flag shuffle = Flag::Unchecked;
    Flag composable = Flag::Unchecked;

    bool any_failed() const;
};

struct CheckReport {
    bool ok = true;
    long checked = 0;
    long skipped = 0;      // instances that ran past the weight limit; neither pass nor fail
    std::string witness;   // first failure, empty when ok

    void fail(const std::string& w);
    nlohmann::json to_json() const;
};

// Which part of a cochain a check inspects: inputs are basis tuples of weight
// <= input_cutoff, w' runs over basis states of weight <= dual_cutoff.  With
// sample > 0 only that many seeded tuples are drawn.  Nested compositions feed
// states of roughly the summed input weight plus the pole bounds into the inner
// maps, so max_total keeps them below the weight limit.
struct Scope {
    int input_cutoff = 2;
    int dual_cutoff = 2;
    int sample = 0;
    std::uint64_t seed = 1;
    int max_total = -1;   // bound on the summed input weight, -1 for none
};

std::vector<std::vector<FockState>> input_tuples(const VertexAlgebra& va, int n, const Scope& sc);
std::vector<FockState> states_up_to(const VertexAlgebra& va, int max_weight);

const Correlators& default_correlators();

// A map V^{(x)n} -> W-bar valued rational functions, known through its pairings
// <w', Phi(v_1 (x) ... (x) v_n)(z_1..z_n)> on basis states.  Concrete kinds
// derive from this and supply compute(); results are memoised.  A cochain may
// carry trailing parameter variables (the epsilon-product uses two) that the
// S_n action and the coboundary leave alone.
class CochainImpl {
public:
    CochainImpl(int degree, int params, const Correlators& eng) : degree_(degree), params_(params), eng_(&eng) {}
    virtual ~CochainImpl() = default;

    int degree() const { return degree_; }
    int params() const { return params_; }
    int nvars() const { return degree_ + params_; }
    const Correlators& engine() const { return *eng_; }
    const VertexAlgebra& algebra() const { return eng_->algebra(); }

    RatFunc pair(const FockState& wp, const std::vector<FockState>& in) const;

    virtual std::string kind() const = 0;
    virtual bool is_zero() const { return false; }
    // largest weight of the module vectors the values are built on; -1 for the vacuum
    virtual int ket_weight() const { return -1; }
    // pole order bounds of the values for a slot holding v
    virtual int axis_bound(const FockState& v) const;
    virtual int diff_bound(const FockState& a, const FockState& b) const;
    virtual int param_bound(const FockState& v, int p) const;
    // entries are only known for inputs up to this weight; -1 means unbounded
    virtual int input_limit() const { return -1; }
    virtual int dual_limit() const { return -1; }

    // slot bookkeeping; K is the input cutoff evaluate() enforces
    int K = 4;
    int m = 0;
    bool half = false;
    mutable Flags flags;

protected:
    virtual RatFunc compute(const FockState& wp, const std::vector<FockState>& in) const = 0;

private:
    int degree_, params_;
    const Correlators* eng_;
    mutable std::mutex mu_;
    mutable std::map<std::vector<FockState>, RatFunc> memo_;
};

class Cochain {
public:
    Cochain() = default;
    explicit Cochain(std::shared_ptr<CochainImpl> p) : p_(std::move(p)) {}

    int degree() const { return p_->degree(); }
    int params() const { return p_->params(); }
    int nvars() const { return p_->nvars(); }
    int m() const { return p_->m; }
    bool half() const { return p_->half; }
    std::string slot_str() const;
    Flags& flags() const { return p_->flags; }
    const CochainImpl& impl() const { return *p_; }
    const Correlators& engine() const { return p_->engine(); }
    const VertexAlgebra& algebra() const { return p_->algebra(); }
    std::string kind() const { return p_->kind(); }
    bool is_zero_kind() const { return p_->is_zero(); }
    Cochain with_slot(int m, bool half = false) const;

    RatFunc pair(const FockState& wp, const std::vector<FockState>& in) const { return p_->pair(wp, in); }
    RatFunc pair(const ModuleVector& wp, const std::vector<ModuleVector>& in) const;
    int cutoff() const { return p_->K; }
    // multilinear extension; inputs must sit within the cutoff K
    RationalSection evaluate(const std::vector<ModuleVector>& in, int dual_cutoff) const;

    Cochain operator+(const Cochain& o) const;
    Cochain operator-(const Cochain& o) const;
    Cochain operator*(const Q& c) const;

private:
    std::shared_ptr<CochainImpl> p_;
};

// E^(1)_W o_2 Phi: (v_0, v_1..v_n) -> R <w', Y(v_0, z_1) Phi(v_1..v_n)(z_2..z_{n+1})>
Cochain left_compose(const Cochain& phi);
// Phi o_i E^(2)_{V;1}: slot i (zero based) receives R Y(v_i, z_i - z_{i+1}) v_{i+1}.
// With lder_power b and shift_power d the coefficients are replaced by
// d/dz^d Phi(... L(-1)^b (v_i(k) v_{i+1}) ...), which is what the shift test needs.
Cochain point_compose(const Cochain& phi, int i, int lder_power = 0, int shift_power = 0);

Cochain linear_combination(const std::vector<std::pair<Q, Cochain>>& terms);

// sigma(Phi)(v_1..v_n)(z_1..z_n) = Phi(v_sigma(1)..v_sigma(n))(z_sigma(1)..z_sigma(n))
Cochain sigma_act(const Permutation& sigma, const Cochain& phi);

// Generators.  E-built maps carry oscillator-number decorations: the value on
// (v_1..v_n) is N^q o E^{(n)}(N^{p_1} v_1 (x) ... (x) N^{p_n} v_n; w).  N commutes
// with L(-1), L(0), L(1), so decorations keep every membership condition.
Cochain zero_cochain(int n, int m, const Correlators& eng = default_correlators(), int params = 0);
Cochain from_module_vector(const ModuleVector& w, int m = 3, const Correlators& eng = default_correlators());
Cochain e_built(const std::vector<int>& input_powers, int output_power, const ModuleVector& w, int m,
                const Correlators& eng = default_correlators());
// (v, z) -> E^(1)_W(v; w), validated
Cochain from_YW(const ModuleVector& w, int m = 2, const Correlators& eng = default_correlators());
// (v_1..v_n) -> E^(n)_W(v_1..v_n; w), validated
Cochain from_E(int n, const ModuleVector& w, int m = 2, const Correlators& eng = default_correlators());
// group-algebra elements d with sum_{sigma in J^{-1}_{n;s}} sign(sigma) sigma * d = 0 for all s
std::vector<std::vector<Q>> shuffle_kernel(int n);
// sum_tau d_tau tau(phi), d indexed like all_permutations(n)
Cochain group_algebra_act(const std::vector<Q>& d, const Cochain& phi);
// seeded combination of shuffle-projected decorated E-built maps with w = 1
Cochain random_valid(int n, int m, std::uint64_t seed, const Correlators& eng = default_correlators());

// A finite table of pairings; values outside the table raise CutoffExceeded.
Cochain tabulate(const Cochain& phi, int cutoff_K, int dual_cutoff);
struct TableEdit {
    FockState wprime;
    std::vector<FockState> inputs;
    RatFunc value;
};
Cochain edited_table(const Cochain& table, const std::vector<TableEdit>& edits);

nlohmann::json cochain_to_json(const Cochain& phi, int cutoff_K, int dual_cutoff);
Cochain cochain_from_json(const nlohmann::json& j, const Correlators& eng = default_correlators());

// Membership validators.  Each returns a report and records the flag on the cochain.
CheckReport validate_L_minus1(const Cochain& phi, const Scope& sc);
CheckReport validate_L0(const Cochain& phi, const Scope& sc);
CheckReport validate_shuffle(const Cochain& phi, const Scope& sc);
// all three; throws ValidationFailure naming the first failure
void require_members(const Cochain& phi, const Scope& sc, const std::string& what);

// Composability with m vertex operators: every right composition
// Phi o (E^(l_1) (x) ... (x) E^(l_n)) with sum l_i = m + n and the left composition
// E^(m) o Phi reconstruct to rational functions whose poles lie on z_i = z_j within
// the pole bounds, and the right compositions do not depend on the expansion
// points (first and second order of the shift are checked exactly).
struct ComposabilityScope {
    int extra_cutoff = 1;    // weight bound for the additional vertex operator states
    Scope base;
};
CheckReport check_composability(const Cochain& phi, int m, const ComposabilityScope& sc);

}  // namespace vcoh

#endif
