#ifndef VCOH_INVARIANTS_HPP
#define VCOH_INVARIANTS_HPP

#include "vcoh/eproduct.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vcoh {

// Closed: delta(Phi) = 0 on the scope.  Exact: Phi = delta(Psi) for Psi a
// combination of the generating family at (n-1, m+1), solved on the scope.
struct Classification {
    CheckReport closed;
    bool exact = false;
    std::optional<Cochain> witness;   // Psi with delta(Psi) = Phi, when exact
    int family_size = 0;
    int rank_system = 0, rank_augmented = 0;   // infeasible when they differ
    CheckReport witness_check;
    nlohmann::json to_json() const;
};
Classification classify(const Cochain& phi, const Scope& sc, int max_power = 2);

// commutator(Phi_1, delta Phi_2) = 0 to order L
struct Orthogonality {
    bool orthogonal = false;
    CheckReport check;
    nlohmann::json to_json() const;
};
Orthogonality orthogonality(const Cochain& phi1, const Cochain& phi2, const ExclusionList& excl, int L,
                            const Scope& sc);

// alpha in the generating family at (1, t) with Phi . alpha = target, the
// product taken with the pair (1, 1) and t shared operators
struct AlphaSolution {
    bool feasible = false;
    int t = 0;
    std::optional<Cochain> alpha;
    std::vector<Q> coeffs;
    int family_size = 0;
    int rank_system = 0, rank_augmented = 0;
    CheckReport verification;   // Phi . alpha == target on the scope
    nlohmann::json to_json() const;
};
ExclusionList alpha_exclusion(int t);
AlphaSolution solve_product_equation(const Cochain& phi, const EpsSeries& target, int t, int L, const Scope& sc,
                                     int max_power = 2);
// delta chi = Phi . alpha
AlphaSolution solve_alpha(const Cochain& chi, const Cochain& phi, int t, int L, const Scope& sc, int max_power = 2);

// (delta(Phi + eta)) . (Phi + eta) against its four displayed pieces
struct ShiftReport {
    CheckReport decomposition;      // lhs minus the sum of the four pieces
    CheckReport cancellation;       // commutator(Phi, delta eta) + commutator(delta eta, Phi)
    CheckReport literal_middle;     // Phi . delta eta + (delta eta) . Phi, reported only
    std::vector<std::pair<std::string, bool>> piece_nonzero;
    bool ok() const { return decomposition.ok && cancellation.ok; }
    nlohmann::json to_json() const;
};
ShiftReport shift_invariance_test(const Cochain& phi, const Cochain& eta, int L, const Scope& sc);

enum class ClassKind { DPhiPhi, DChiChi, DAlphaAlpha };
std::string class_kind_str(ClassKind k);

struct ClassWitness {
    ClassKind kind = ClassKind::DPhiPhi;
    EpsSeries representative;
    CheckReport closed;         // delta of every coefficient vanishes
    bool nonvanishing = false;  // a nonzero coefficient was found; otherwise inconclusive at this truncation
    std::string nonvanishing_witness;
    std::optional<ShiftReport> shift;
    nlohmann::json to_json() const;
};
// input sits at (1,2), (0,3) or (1,t) with t >= 1 for the three kinds; eta, when
// given, runs the shift test
ClassWitness class_representative(ClassKind kind, const Cochain& input, int L, const Scope& sc,
                                  const std::optional<Cochain>& eta = std::nullopt);

// (delta Phi) . alpha = Phi . (delta alpha)
CheckReport check_alpha_relation(const Cochain& phi, const Cochain& alpha, int L, const Scope& sc);

// Bracket table of the generators
//   H = delta chi, H* = chi, X+ = Phi, X- = alpha, Y+ = delta Phi, Y- = delta alpha.
// Each bracket is the commutator product; it is resolved when it equals a
// combination of generators sitting in the same slot (zero included).
struct Generator {
    std::string name;
    Cochain c;
};
struct Bracket {
    std::string a, b;
    int slot_n = 0, slot_m = 0;
    bool resolved = false;
    std::map<std::string, Q> coords;   // empty and resolved means zero
    std::string error;
};
struct Relation {
    std::string name;
    std::pair<int, int> lhs_slot, rhs_slot;
    bool expect_nonzero = false;
    CheckReport holds;
    bool nonzero = false;
    bool ok() const { return lhs_slot == rhs_slot && holds.ok && (!expect_nonzero || nonzero); }
};
struct JacobiEntry {
    std::string a, b, c;
    bool conclusive = false;
    bool ok = false;
    std::string detail;
};
struct BracketTable {
    int t = 0;
    std::vector<Generator> gens;
    std::vector<Bracket> brackets;
    std::vector<Relation> relations;
    std::vector<JacobiEntry> jacobi;
    bool relations_ok() const;
    bool jacobi_ok() const;
    nlohmann::json to_json() const;
};
BracketTable lie_table(const Cochain& phi, const Cochain& chi, const Cochain& alpha, int t, int L, const Scope& sc);

}  // namespace vcoh

#endif
