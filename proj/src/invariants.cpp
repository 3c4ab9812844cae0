#include "vcoh/invariants.hpp"

namespace vcoh {

namespace {

// rows of several value matrices over the same columns, one after the other
Matrix stack(const std::vector<Matrix>& parts, int cols)
{
    int rows = 0;
    for (auto& p : parts) rows += p.rows;
    Matrix M(rows, cols);
    int r = 0;
    for (auto& p : parts) {
        for (int i = 0; i < p.rows; ++i, ++r)
            for (int j = 0; j < cols; ++j) M(r, j) = p(i, j);
    }
    return M;
}

// coefficients c with sum_j c_j column_j = last column; nullopt when infeasible
std::optional<std::vector<Q>> solve_last(const Matrix& aug, int& rank_sys, int& rank_aug)
{
    int N = aug.cols - 1;
    Matrix sys(aug.rows, N);
    for (int i = 0; i < aug.rows; ++i)
        for (int j = 0; j < N; ++j) sys(i, j) = aug(i, j);
    rank_sys = aug.rows ? rank(sys) : 0;
    rank_aug = aug.rows ? rank(aug) : 0;
    if (rank_sys != rank_aug) return std::nullopt;
    std::vector<Q> c(N, Q(0));
    if (rank_aug == 0) return c;
    for (auto& v : nullspace(aug))
        if (v[N] != 0) {
            for (int j = 0; j < N; ++j) c[j] = -v[j] / v[N];
            return c;
        }
    return std::nullopt;
}

// value matrix of the epsilon coefficients of several series, l = 0..L, stacked
Matrix series_matrix(const std::vector<EpsSeries>& cols, int L, const Scope& sc)
{
    std::vector<Matrix> parts;
    for (int l = 0; l <= L; ++l) {
        std::vector<Cochain> fam;
        for (auto& s : cols) fam.push_back(s.at(l));
        parts.push_back(value_matrix(fam, sc));
    }
    return stack(parts, static_cast<int>(cols.size()));
}

Cochain combine_family(const std::vector<Cochain>& fam, const std::vector<Q>& c, int n, int m)
{
    std::vector<std::pair<Q, Cochain>> terms;
    for (size_t i = 0; i < fam.size(); ++i)
        if (c[i] != 0) terms.emplace_back(c[i], fam[i]);
    Cochain out = terms.empty() ? zero_cochain(n, m) : linear_combination(terms).with_slot(m);
    // combinations of members are members
    out.flags().lder = out.flags().l0 = out.flags().shuffle = Flag::Verified;
    return out;
}

std::string slot_name(int n, int m)
{
    return "(" + std::to_string(n) + "," + std::to_string(m) + ")";
}

}  // namespace

nlohmann::json Classification::to_json() const
{
    nlohmann::json j = {{"closed", closed.to_json()},
                        {"exact", exact},
                        {"family_size", family_size},
                        {"rank_system", rank_system},
                        {"rank_augmented", rank_augmented},
                        {"family_relative", true}};
    if (witness) j["witness_check"] = witness_check.to_json();
    return j;
}

Classification classify(const Cochain& phi, const Scope& sc, int max_power)
{
    Classification out;
    if (phi.m() < 1 && !phi.half())
        out.closed.fail("delta is not defined at m = 0");
    else
        out.closed = check_zero(delta(phi), sc);

    int n = phi.degree();
    if (check_zero(phi, sc).ok) {
        out.exact = true;
        if (n >= 1) out.witness = zero_cochain(n - 1, phi.m() + 1, phi.engine());
        return out;
    }
    if (n == 0) return out;   // nothing maps into degree 0
    auto fam = generating_family(n - 1, phi.m() + 1, false, max_power, phi.engine());
    out.family_size = static_cast<int>(fam.size());
    std::vector<Cochain> cols;
    for (auto& f : fam) cols.push_back(delta(f));
    cols.push_back(phi);
    auto c = solve_last(value_matrix(cols, sc), out.rank_system, out.rank_augmented);
    if (!c) return out;
    Cochain psi = combine_family(fam, *c, n - 1, phi.m() + 1);
    out.witness_check = check_zero(delta(psi) - phi, sc);
    out.exact = out.witness_check.ok;
    out.witness = psi;
    return out;
}

nlohmann::json Orthogonality::to_json() const
{
    return {{"orthogonal", orthogonal}, {"check", check.to_json()}};
}

Orthogonality orthogonality(const Cochain& phi1, const Cochain& phi2, const ExclusionList& excl, int L,
                            const Scope& sc)
{
    Orthogonality o;
    o.check = check_zero(commutator(phi1, delta(phi2), excl, L), sc);
    o.orthogonal = o.check.ok;
    return o;
}

nlohmann::json AlphaSolution::to_json() const
{
    nlohmann::json c = nlohmann::json::array();
    for (auto& x : coeffs) c.push_back(q_str(x));
    return {{"feasible", feasible},
            {"t", t},
            {"slot", slot_name(1, t)},
            {"coefficients", c},
            {"family_size", family_size},
            {"rank_system", rank_system},
            {"rank_augmented", rank_augmented},
            {"verification", verification.to_json()},
            {"family_relative", true}};
}

ExclusionList alpha_exclusion(int t)
{
    return {{{1, 1}}, t};
}

AlphaSolution solve_product_equation(const Cochain& phi, const EpsSeries& target, int t, int L, const Scope& sc,
                                     int max_power)
{
    if (t < 0 || t > 2) throw Error(ErrorKind::DomainViolation, "alpha sits at (1,t) with 0 <= t <= 2");
    if (phi.degree() != 1) throw Error(ErrorKind::InvalidInput, "Phi must be a 1-cochain");
    ExclusionList ex = alpha_exclusion(t);
    if (target.degree != 1 || target.m != phi.m())
        throw Error(ErrorKind::DomainViolation, "slot mismatch: Phi . alpha sits at " + slot_name(1, phi.m()) +
                                                    ", the target at " + slot_name(target.degree, target.m));
    AlphaSolution out;
    out.t = t;
    auto fam = generating_family(1, t, false, max_power, phi.engine());
    out.family_size = static_cast<int>(fam.size());
    std::vector<EpsSeries> cols;
    for (auto& f : fam) cols.push_back(eps_product(phi, f, ex, L));
    cols.push_back(target);
    auto c = solve_last(series_matrix(cols, L, sc), out.rank_system, out.rank_augmented);
    if (!c) return out;
    out.coeffs = *c;
    Cochain a = combine_family(fam, *c, 1, t);
    out.verification = check_equal(eps_product(phi, a, ex, L), target, sc);
    out.feasible = out.verification.ok;
    out.alpha = a;
    return out;
}

AlphaSolution solve_alpha(const Cochain& chi, const Cochain& phi, int t, int L, const Scope& sc, int max_power)
{
    if (chi.degree() != 0 || chi.m() != 3) throw Error(ErrorKind::DomainViolation, "chi must sit at (0,3)");
    if (phi.degree() != 1 || phi.m() != 2) throw Error(ErrorKind::DomainViolation, "Phi must sit at (1,2)");
    return solve_product_equation(phi, constant_series(delta(chi), L), t, L, sc, max_power);
}

nlohmann::json ShiftReport::to_json() const
{
    nlohmann::json p = nlohmann::json::object();
    for (auto& [name, nz] : piece_nonzero) p[name] = nz ? "nonzero" : "zero on scope";
    return {{"ok", ok()},
            {"decomposition", decomposition.to_json()},
            {"cancellation", cancellation.to_json()},
            {"literal_middle", literal_middle.to_json()},
            {"pieces", p}};
}

ShiftReport shift_invariance_test(const Cochain& phi, const Cochain& eta, int L, const Scope& sc)
{
    if (phi.degree() != eta.degree() || phi.m() != eta.m())
        throw Error(ErrorKind::DomainViolation, "Phi and eta must share the slot");
    ShiftReport rep;
    Cochain dphi = delta(phi), deta = delta(eta);
    Cochain sum = (phi + eta).with_slot(phi.m());
    EpsSeries lhs = eps_product(delta(sum), sum, {}, L);
    EpsSeries p0 = eps_product(dphi, phi, {}, L);
    EpsSeries a = eps_product(dphi, eta, {}, L), b = eps_product(phi, deta, {}, L);
    EpsSeries c = eps_product(deta, phi, {}, L);
    EpsSeries p1 = a - b, p2 = b + c;
    EpsSeries p3 = eps_product(deta, eta, {}, L);
    rep.decomposition = check_equal(lhs, p0 + p1 + p2 + p3, sc);
    // the middle piece read as commutators: [Phi, delta eta] + [delta eta, Phi]
    EpsSeries comm = (b - c) + (c - b);
    rep.cancellation = check_zero(comm, sc);
    rep.literal_middle = check_zero(p2, sc);
    rep.piece_nonzero = {{"(dPhi).Phi", !check_zero(p0, sc).ok},
                         {"(dPhi).eta - Phi.(deta)", !check_zero(p1, sc).ok},
                         {"Phi.(deta) + (deta).Phi", !rep.literal_middle.ok},
                         {"(deta).eta", !check_zero(p3, sc).ok}};
    return rep;
}

std::string class_kind_str(ClassKind k)
{
    switch (k) {
    case ClassKind::DPhiPhi: return "dPhi_Phi";
    case ClassKind::DChiChi: return "dChi_Chi";
    case ClassKind::DAlphaAlpha: return "dAlpha_Alpha";
    }
    return "?";
}

nlohmann::json ClassWitness::to_json() const
{
    nlohmann::json j = {{"kind", class_kind_str(kind)},
                        {"slot", slot_name(representative.degree, representative.m)},
                        {"order", representative.order},
                        {"closed", closed.to_json()},
                        {"nonvanishing", nonvanishing ? "certified" : "inconclusive at this truncation"}};
    if (nonvanishing) j["nonvanishing_witness"] = nonvanishing_witness;
    if (shift) j["shift"] = shift->to_json();
    return j;
}

ClassWitness class_representative(ClassKind kind, const Cochain& input, int L, const Scope& sc,
                                  const std::optional<Cochain>& eta)
{
    int n = input.degree(), m = input.m();
    bool ok = false;
    switch (kind) {
    case ClassKind::DPhiPhi: ok = n == 1 && m == 2; break;
    case ClassKind::DChiChi: ok = n == 0 && m == 3; break;
    case ClassKind::DAlphaAlpha: ok = n == 1 && m >= 0 && m <= 2; break;
    }
    if (!ok) throw Error(ErrorKind::DomainViolation, class_kind_str(kind) + ": input at the wrong slot " + slot_name(n, m));
    if (m < 1) throw Error(ErrorKind::DomainViolation, "delta^1_0 is not defined; alpha needs t >= 1");
    ClassWitness w;
    w.kind = kind;
    w.representative = eps_product(delta(input), input, {}, L);
    for (auto& [l, c] : w.representative.coeffs) {
        CheckReport r = check_zero(delta(c), sc);
        w.closed.checked += r.checked;
        w.closed.skipped += r.skipped;
        if (!r.ok && w.closed.ok) w.closed.fail("eps^" + std::to_string(l) + ": " + r.witness);
    }
    CheckReport z = check_zero(w.representative, sc);
    w.nonvanishing = !z.ok && z.witness.find("nonzero") != std::string::npos;
    if (w.nonvanishing) w.nonvanishing_witness = z.witness;
    if (eta) w.shift = shift_invariance_test(input, *eta, L, sc);
    return w;
}

CheckReport check_alpha_relation(const Cochain& phi, const Cochain& alpha, int L, const Scope& sc)
{
    return check_equal(eps_product(delta(phi), alpha, {}, L), eps_product(phi, delta(alpha), {}, L), sc);
}

bool BracketTable::relations_ok() const
{
    for (auto& r : relations)
        if (!r.ok()) return false;
    return true;
}

bool BracketTable::jacobi_ok() const
{
    for (auto& j : jacobi)
        if (!j.conclusive || !j.ok) return false;
    return true;
}

nlohmann::json BracketTable::to_json() const
{
    nlohmann::json g = nlohmann::json::array(), b = nlohmann::json::array(), r = nlohmann::json::array(),
                   jac = nlohmann::json::array();
    for (auto& x : gens) g.push_back({{"name", x.name}, {"slot", slot_name(x.c.degree(), x.c.m())}, {"kind", x.c.kind()}});
    for (auto& x : brackets) {
        nlohmann::json e = {{"bracket", "[" + x.a + ", " + x.b + "]"}, {"slot", slot_name(x.slot_n, x.slot_m)}};
        if (!x.error.empty())
            e["error"] = x.error;
        else if (!x.resolved)
            e["value"] = "outside the span of the generators in its slot";
        else if (x.coords.empty())
            e["value"] = "0";
        else {
            std::string s;
            for (auto& [name, c] : x.coords) s += (s.empty() ? "" : " + ") + q_str(c) + " " + name;
            e["value"] = s;
        }
        b.push_back(e);
    }
    for (auto& x : relations)
        r.push_back({{"relation", x.name},
                     {"lhs_slot", slot_name(x.lhs_slot.first, x.lhs_slot.second)},
                     {"rhs_slot", slot_name(x.rhs_slot.first, x.rhs_slot.second)},
                     {"holds", x.holds.to_json()},
                     {"expect_nonzero", x.expect_nonzero},
                     {"nonzero", x.nonzero},
                     {"ok", x.ok()}});
    for (auto& x : jacobi)
        jac.push_back({{"triple", x.a + ", " + x.b + ", " + x.c}, {"conclusive", x.conclusive}, {"ok", x.ok},
                       {"detail", x.detail}});
    return {{"t", t}, {"generators", g}, {"brackets", b}, {"relations", r}, {"jacobi", jac},
            {"relations_ok", relations_ok()}, {"jacobi_ok", jacobi_ok()}};
}

BracketTable lie_table(const Cochain& phi, const Cochain& chi, const Cochain& alpha, int t, int L, const Scope& sc)
{
    if (phi.degree() != 1 || phi.m() != 2) throw Error(ErrorKind::DomainViolation, "Phi must sit at (1,2)");
    if (chi.degree() != 0 || chi.m() != 3) throw Error(ErrorKind::DomainViolation, "chi must sit at (0,3)");
    if (alpha.degree() != 1 || alpha.m() != t || t < 0 || t > 2)
        throw Error(ErrorKind::DomainViolation, "alpha must sit at (1,t), 0 <= t <= 2");
    BracketTable T;
    T.t = t;
    T.gens = {{"H", delta(chi)}, {"H*", chi}, {"X+", phi}, {"X-", alpha}, {"Y+", delta(phi)}};
    if (t >= 1) T.gens.push_back({"Y-", delta(alpha)});
    int G = static_cast<int>(T.gens.size());
    auto idx = [&](const std::string& s) {
        for (int i = 0; i < G; ++i)
            if (T.gens[i].name == s) return i;
        return -1;
    };

    auto excl_for = [&](int a, int b) {
        bool pm = (T.gens[a].name == "X+" && T.gens[b].name == "X-") || (T.gens[a].name == "X-" && T.gens[b].name == "X+");
        return pm ? alpha_exclusion(t) : ExclusionList{};
    };

    // bracket[a][b], a != b
    std::map<std::pair<int, int>, int> where;
    for (int a = 0; a < G; ++a)
        for (int b = 0; b < G; ++b) {
            if (a == b) continue;
            Bracket br;
            br.a = T.gens[a].name;
            br.b = T.gens[b].name;
            try {
                EpsSeries c = commutator(T.gens[a].c, T.gens[b].c, excl_for(a, b), L);
                br.slot_n = c.degree;
                br.slot_m = c.m;
                std::vector<int> cand;
                std::vector<EpsSeries> cols;
                for (int k = 0; k < G; ++k)
                    if (T.gens[k].c.degree() == c.degree && T.gens[k].c.m() == c.m) {
                        cand.push_back(k);
                        cols.push_back(constant_series(T.gens[k].c, L));
                    }
                cols.push_back(c);
                int rs = 0, ra = 0;
                auto sol = solve_last(series_matrix(cols, L, sc), rs, ra);
                if (sol) {
                    br.resolved = true;
                    for (size_t i = 0; i < cand.size(); ++i)
                        if ((*sol)[i] != 0) br.coords[T.gens[cand[i]].name] = (*sol)[i];
                }
            } catch (const Error& e) {
                br.error = e.what();
            }
            where[{a, b}] = static_cast<int>(T.brackets.size());
            T.brackets.push_back(br);
        }

    auto relation = [&](const std::string& name, const EpsSeries& lhs, const EpsSeries& rhs, bool nonzero) {
        Relation r;
        r.name = name;
        r.lhs_slot = {lhs.degree, lhs.m};
        r.rhs_slot = {rhs.degree, rhs.m};
        if (r.lhs_slot != r.rhs_slot)
            throw Error(ErrorKind::DomainViolation, "bi-grading violated in " + name);
        r.expect_nonzero = nonzero;
        r.holds = check_equal(lhs, rhs, sc);
        if (nonzero) r.nonzero = !check_zero(lhs, sc).ok;
        T.relations.push_back(r);
    };
    EpsSeries H = constant_series(T.gens[idx("H")].c, L);
    relation("[X+, X-] = H", commutator(phi, alpha, alpha_exclusion(t), L), H, false);
    relation("delta chi = Phi . alpha", H, eps_product(phi, alpha, alpha_exclusion(t), L), false);
    if (t >= 1) {
        Cochain dphi = T.gens[idx("Y+")].c, dalpha = T.gens[idx("Y-")].c;
        relation("[X+, Y-] = [X-, Y+]", commutator(phi, dalpha, {}, L), commutator(alpha, dphi, {}, L), false);
        relation("Phi . delta alpha = alpha . delta Phi != 0", eps_product(phi, dalpha, {}, L),
                 eps_product(alpha, dphi, {}, L), true);
    }

    // Jacobi through the structure constants of the table
    for (int a = 0; a < G; ++a)
        for (int b = a + 1; b < G; ++b)
            for (int c = b + 1; c < G; ++c) {
                JacobiEntry je;
                je.a = T.gens[a].name;
                je.b = T.gens[b].name;
                je.c = T.gens[c].name;
                je.conclusive = true;
                std::map<std::string, Q> total;
                int cyc[3][3] = {{a, b, c}, {b, c, a}, {c, a, b}};
                for (auto& [x, y, z] : cyc) {
                    const Bracket& xy = T.brackets[where[{x, y}]];
                    if (!xy.resolved) {
                        je.conclusive = false;
                        je.detail = "[" + xy.a + ", " + xy.b + "] is not resolved";
                        break;
                    }
                    for (auto& [name, cf] : xy.coords) {
                        int k = idx(name);
                        if (k == z) continue;   // [g, g] = 0
                        const Bracket& kz = T.brackets[where[{k, z}]];
                        if (!kz.resolved) {
                            je.conclusive = false;
                            je.detail = "[" + kz.a + ", " + kz.b + "] is not resolved";
                            break;
                        }
                        for (auto& [n2, c2] : kz.coords) total[n2] += cf * c2;
                    }
                    if (!je.conclusive) break;
                }
                if (je.conclusive) {
                    je.ok = true;
                    for (auto& [name, v] : total)
                        if (v != 0) {
                            je.ok = false;
                            je.detail = "coefficient of " + name + " is " + q_str(v);
                        }
                }
                T.jacobi.push_back(je);
            }
    return T;
}

}  // namespace vcoh
