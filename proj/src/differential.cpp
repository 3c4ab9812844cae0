#include "vcoh/differential.hpp"

#include <chrono>
#include <set>

namespace vcoh {

namespace {

void require_usable(const Cochain& phi, const char* what)
{
    if (phi.flags().any_failed())
        throw Error(ErrorKind::ValidationFailure, std::string(what) + ": the cochain failed a membership check");
}

// sigma_{n+1,1..n}: slot 0 takes the last input and variable
Permutation last_to_front(int n1)
{
    std::vector<int> img(n1);
    img[0] = n1 - 1;
    for (int j = 1; j < n1; ++j) img[j] = j - 1;
    return Permutation(img);
}

class IntertwinerImpl : public CochainImpl {
public:
    explicit IntertwinerImpl(const Cochain& phi) : CochainImpl(3, phi.params(), phi.engine()), phi_(phi) {}
    std::string kind() const override { return "Y_WV o [" + phi_.kind() + "]"; }
    bool is_zero() const override { return phi_.is_zero_kind(); }
    int ket_weight() const override { return phi_.impl().ket_weight(); }
    int axis_bound(const FockState& v) const override { return phi_.impl().axis_bound(v); }
    int diff_bound(const FockState& a, const FockState& b) const override { return phi_.impl().diff_bound(a, b); }
    int param_bound(const FockState& v, int p) const override { return phi_.impl().param_bound(v, p); }

protected:
    RatFunc compute(const FockState& wp, const std::vector<FockState>& in) const override
    {
        int N = nvars();
        if (phi_.is_zero_kind()) return RatFunc(N);
        const VertexAlgebra& va = algebra();
        const CochainImpl& P = phi_.impl();
        const FockState& v3 = in[2];
        std::vector<FockState> first{in[0], in[1]};
        std::vector<int> d(N, 0);
        d[0] = P.diff_bound(v3, in[0]);
        d[1] = P.diff_bound(v3, in[1]);
        for (int p = 0; p < params(); ++p) d[3 + p] = P.param_bound(v3, p);
        int ax = P.axis_bound(v3);
        int top = wp.weight() - v3.weight();
        int lo = lowest_needed_at_infinity(ax, d, top);
        std::vector<int> map(phi_.nvars());
        for (int j = 0; j < phi_.nvars(); ++j) map[j] = j < 2 ? j : j + 1;
        // e^{z L(-1)} on the bra side: sum_j z^j / j! (L(-1)^dagger)^j w'
        std::vector<std::pair<ModuleVector, Q>> bras;
        {
            ModuleVector bra(wp);
            Q scale = 1;
            for (int j = 0; !bra.is_zero(); ++j) {
                if (j > 0) {
                    bra = va.virasoro(1, bra) * (Q(-1) / engine().lam2());
                    scale /= j;
                }
                bras.emplace_back(bra, scale);
            }
        }
        std::map<int, RatFunc> coeffs;
        for (int s = 0; s <= top - lo; ++s) {
            const auto& B = va.basis(s);
            const Matrix& D = va.dual_matrix(s, engine().lam2());
            std::vector<Q> c(B.size(), 0);
            bool any = false;
            for (size_t a = 0; a < B.size(); ++a) {
                for (auto& [bra, scale] : bras)
                    for (auto& [x, cx] : bra.components()) {
                        // <x, Y_WV(u_a, -z) v_3> is a monomial; its value at z = 1
                        RatFunc f = engine().intertwiner_pair(x, ModuleVector(B[a]), ModuleVector(v3));
                        if (f.is_zero()) continue;
                        c[a] += f.scale_vars(Q(-1)).eval({Q(1)}) * cx * scale;
                    }
                any = any || c[a] != 0;
            }
            if (!any) continue;
            RatFunc g(N);
            for (size_t b = 0; b < B.size(); ++b) {
                Q y = 0;
                for (size_t a = 0; a < B.size(); ++a) y += c[a] * D(static_cast<int>(b), static_cast<int>(a));
                if (y == 0) continue;
                RatFunc f = phi_.pair(B[b], first);
                if (!f.is_zero()) g += f.embed(N, map) * y;
            }
            if (!g.is_zero()) coeffs.emplace(top - s, g);
        }
        return reconstruct_at_infinity(2, coeffs, ax, d, top, N);
    }

private:
    Cochain phi_;
};

Scope precondition_scope(const Scope& sc)
{
    Scope s = sc;
    s.input_cutoff = std::min(sc.input_cutoff, 2);
    s.dual_cutoff = std::min(sc.dual_cutoff, 2);
    s.sample = 0;
    return s;
}

}  // namespace

Cochain delta(const Cochain& phi)
{
    if (phi.half()) return delta_half(phi);
    require_usable(phi, "delta");
    int n = phi.degree();
    if (phi.m() < 1)
        throw Error(ErrorKind::DomainViolation, "delta needs a cochain composable with at least one vertex operator");
    if (phi.is_zero_kind()) return zero_cochain(n + 1, phi.m() - 1, phi.engine(), phi.params());
    Cochain left = left_compose(phi);
    std::vector<std::pair<Q, Cochain>> terms{{1, left}};
    for (int i = 1; i <= n; ++i) terms.emplace_back(i % 2 ? -1 : 1, point_compose(phi, i - 1));
    terms.emplace_back((n + 1) % 2 ? -1 : 1, sigma_act(last_to_front(n + 1), left));
    return linear_combination(terms).with_slot(phi.m() - 1);
}

Cochain intertwiner_term(const Cochain& phi)
{
    if (phi.degree() != 2) throw Error(ErrorKind::InvalidInput, "the intertwiner term needs a 2-cochain");
    auto p = std::make_shared<IntertwinerImpl>(phi);
    p->K = phi.cutoff();
    return Cochain(p);
}

Cochain at_half(const Cochain& phi)
{
    if (phi.degree() != 2) throw Error(ErrorKind::InvalidInput, "only 2-cochains sit at the half slot");
    return phi.with_slot(0, true);
}

CheckReport check_half_membership(const Cochain& phi, const Scope& sc)
{
    CheckReport rep;
    Cochain first = left_compose(phi) + point_compose(phi, 1);
    Cochain second = point_compose(phi, 0) + intertwiner_term(phi);
    for (auto& tup : input_tuples(phi.algebra(), 3, sc))
        for (auto& wp : states_up_to(phi.algebra(), sc.dual_cutoff))
            for (auto* c : {&first, &second}) {
                try {
                    c->pair(wp, tup);
                    ++rep.checked;
                } catch (const Error& e) {
                    if (e.kind() == ErrorKind::CutoffExceeded)
                        ++rep.skipped;
                    else
                        rep.fail(std::string(c == &first ? "first" : "second") + " sum at w'=" + wp.str() + ": " + e.what());
                }
            }
    return rep;
}

Cochain delta_half(const Cochain& phi)
{
    if (phi.degree() != 2) throw Error(ErrorKind::InvalidInput, "delta_half needs a 2-cochain");
    require_usable(phi, "delta_half");
    if (phi.is_zero_kind()) return zero_cochain(3, 0, phi.engine(), phi.params());
    Scope sc;
    sc.input_cutoff = 1;
    sc.dual_cutoff = 1;
    CheckReport r = check_half_membership(phi, sc);
    if (!r.ok) throw Error(ErrorKind::ValidationFailure, "not in the half slot: " + r.witness);
    Cochain d = linear_combination({{1, left_compose(phi)},
                                    {1, point_compose(phi, 1)},
                                    {-1, point_compose(phi, 0)},
                                    {-1, intertwiner_term(phi)}});
    return d.with_slot(0);
}

CheckReport check_zero(const Cochain& phi, const Scope& sc)
{
    CheckReport rep;
    auto duals = states_up_to(phi.algebra(), sc.dual_cutoff);
    for (auto& tup : input_tuples(phi.algebra(), phi.degree(), sc))
        for (auto& wp : duals) {
            try {
                RatFunc f = phi.pair(wp, tup);
                ++rep.checked;
                if (!f.is_zero()) {
                    std::string s = "nonzero at w'=" + wp.str() + " (";
                    for (size_t i = 0; i < tup.size(); ++i) s += (i ? ", " : "") + tup[i].str();
                    rep.fail(s + "): " + f.to_json().dump());
                }
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::CutoffExceeded)
                    rep.fail("at w'=" + wp.str() + ": " + e.what());
                else
                    ++rep.skipped;
            }
        }
    return rep;
}

nlohmann::json ComplexReport::to_json() const
{
    nlohmann::json j = {{"ok", ok()}, {"precondition_ok", precondition_ok}, {"identity", identity.to_json()}};
    if (!precondition_ok) j["precondition"] = precondition;
    return j;
}

ComplexReport check_complex(const Cochain& phi, const Scope& sc, bool half_path)
{
    ComplexReport rep;
    Scope pre = precondition_scope(sc);
    auto need = [&](Flag f, auto&& validate, const char* name) {
        if (!rep.precondition_ok) return;
        if (f == Flag::Failed || (f == Flag::Unchecked && !validate(phi, pre).ok)) {
            rep.precondition_ok = false;
            rep.precondition = name;
        }
    };
    need(phi.flags().lder, validate_L_minus1, "L(-1)-derivative property");
    need(phi.flags().l0, validate_L0, "L(0)-conjugation property");
    need(phi.flags().shuffle, validate_shuffle, "shuffle condition");
    if (!rep.precondition_ok) return rep;
    Cochain once = delta(phi);
    if (half_path) {
        if (phi.degree() != 1) throw Error(ErrorKind::InvalidInput, "the half path starts at a 1-cochain");
        once = at_half(once);
    }
    rep.identity = check_zero(delta(once), sc);
    return rep;
}

// ---- truncated cohomology ----

Matrix value_matrix(const std::vector<Cochain>& family, const Scope& probes)
{
    if (family.empty()) return Matrix(0, 0);
    const VertexAlgebra& va = family[0].algebra();
    int n = family[0].degree();
    for (auto& f : family)
        if (f.degree() != n || f.params() != family[0].params())
            throw Error(ErrorKind::InvalidInput, "family members of different degree");
    int N = family[0].nvars();
    std::vector<std::map<Exps, Q>> cols_rows;   // per (probe, column): coordinates
    std::vector<std::map<std::pair<int, Exps>, Q>> cols(family.size());
    int probe = 0;
    for (auto& tup : input_tuples(va, n, probes))
        for (auto& wp : states_up_to(va, probes.dual_cutoff)) {
            std::vector<RatFunc> vals;
            for (auto& f : family) vals.push_back(f.pair(wp, tup));
            // common denominator of the probe
            std::vector<int> axis(N, 0), diff(N * N, 0);
            for (auto& v : vals)
                for (int i = 0; i < N; ++i) {
                    axis[i] = std::max(axis[i], v.axis(i));
                    for (int j = i + 1; j < N; ++j) diff[i * N + j] = std::max(diff[i * N + j], v.diff(i, j));
                }
            Poly D = Poly::constant(N, 1);
            for (int i = 0; i < N; ++i) {
                if (axis[i]) D = D * Poly::var(N, i).pow(axis[i]);
                for (int j = i + 1; j < N; ++j)
                    if (diff[i * N + j]) D = D * (Poly::var(N, i) - Poly::var(N, j)).pow(diff[i * N + j]);
            }
            RatFunc Df = RatFunc::from_poly(D);
            for (size_t c = 0; c < vals.size(); ++c) {
                if (vals[c].is_zero()) continue;
                RatFunc p = vals[c] * Df;
                if (p.den_degree() != 0) throw Error(ErrorKind::InvalidInput, "common denominator did not clear");
                for (auto& [e, x] : p.num().terms()) cols[c][{probe, e}] = x;
            }
            ++probe;
        }
    std::map<std::pair<int, Exps>, int> row_index;
    for (auto& c : cols)
        for (auto& [k, x] : c) row_index.emplace(k, 0);
    int r = 0;
    for (auto& [k, i] : row_index) i = r++;
    Matrix M(r, static_cast<int>(family.size()));
    for (size_t c = 0; c < cols.size(); ++c)
        for (auto& [k, x] : cols[c]) M(row_index[k], static_cast<int>(c)) = x;
    return M;
}

std::vector<Cochain> generating_family(int n, int m, bool half, int max_power, const Correlators& eng)
{
    std::vector<Cochain> out;
    ModuleVector one{FockState()};
    if (n == 0) {
        for (auto& s : states_up_to(eng.algebra(), max_power)) out.push_back(from_module_vector(ModuleVector(s), m, eng));
        return out;
    }
    auto kernel = shuffle_kernel(n);
    // input powers up to permutation; on E-built maps a reordering of the powers is a sigma-image
    std::vector<std::vector<int>> powers;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int from) {
        if (static_cast<int>(cur.size()) == n) {
            powers.push_back(cur);
            return;
        }
        for (int p = from; p <= max_power; ++p) {
            cur.push_back(p);
            rec(p);
            cur.pop_back();
        }
    };
    rec(0);
    for (auto& p : powers)
        for (int q = 0; q <= (n == 1 ? 0 : max_power); ++q) {
            Cochain raw = e_built(p, q, one, m, eng);
            for (auto& d : kernel) {
                Cochain c = n == 1 ? raw : group_algebra_act(d, raw);
                c = c.with_slot(m, half);
                // membership holds by construction: decorations commute with L(-1), L(0), L(1) and
                // the group algebra element lies in the shuffle kernel
                c.flags() = {Flag::Verified, Flag::Verified, Flag::Verified, Flag::Unchecked};
                out.push_back(c);
                if (n == 1) break;
            }
        }
    return out;
}

nlohmann::json CohomologyReport::to_json() const
{
    return {{"slot", {{"n", n}, {"m", half ? nlohmann::json("1/2") : nlohmann::json(m)}}},
            {"family_size", family_size},
            {"span_dim", span_dim},
            {"rank_out", rank_out},
            {"nullity_out", nullity_out},
            {"relations", relations},
            {"rank_in", rank_in},
            {"kernel_dim", kernel_dim},
            {"cohomology_dim", cohomology_dim},
            {"truncation_relative", true},
            {"rank_nullity", rank_nullity},
            {"image_in_kernel", image_in_kernel},
            {"seconds", seconds}};
}

CohomologyReport truncated_cohomology(int n, int m, bool half, int max_power, const Scope& probes,
                                      const Correlators& eng)
{
    auto t0 = std::chrono::steady_clock::now();
    if (half && n != 2) throw Error(ErrorKind::InvalidInput, "the half slot only exists for n = 2");
    if (!half && m < 1) throw Error(ErrorKind::DomainViolation, "the outgoing differential needs m >= 1");
    CohomologyReport rep;
    rep.n = n;
    rep.m = m;
    rep.half = half;
    std::vector<Cochain> family = generating_family(n, m, half, max_power, eng);
    int gens = static_cast<int>(family.size());
    std::vector<Cochain> incoming;
    if (n > 0) {
        int m_in = half ? 2 : m + 1;
        for (auto& g : generating_family(n - 1, m_in, false, max_power, eng)) {
            Cochain d = delta(g);
            family.push_back(half ? at_half(d) : d.with_slot(m));
            incoming.push_back(d);
        }
    }
    rep.family_size = static_cast<int>(family.size());
    std::vector<Cochain> out;
    for (auto& f : family) out.push_back(delta(f));

    // a coefficient vector is a relation when the combination and its coboundary
    // both vanish on the probes
    Matrix V = value_matrix(family, probes);
    Matrix M = value_matrix(out, probes);
    Matrix VM(V.rows + M.rows, rep.family_size);
    for (int i = 0; i < V.rows; ++i)
        for (int j = 0; j < V.cols; ++j) VM(i, j) = V(i, j);
    for (int i = 0; i < M.rows; ++i)
        for (int j = 0; j < M.cols; ++j) VM(V.rows + i, j) = M(i, j);
    rep.span_dim = rank(VM);
    rep.rank_out = rank(M);
    rep.nullity_out = static_cast<int>(nullspace(M).size());
    rep.relations = static_cast<int>(nullspace(VM).size());
    rep.rank_nullity = rep.rank_out + rep.nullity_out == rep.family_size && rep.span_dim + rep.relations == rep.family_size;
    rep.kernel_dim = rep.nullity_out - rep.relations;
    if (!incoming.empty()) {
        Matrix I(VM.rows, static_cast<int>(incoming.size()));
        for (int i = 0; i < VM.rows; ++i)
            for (int j = 0; j < I.cols; ++j) I(i, j) = VM(i, gens + j);
        rep.rank_in = rank(I);
    }
    rep.image_in_kernel = true;
    for (int j = gens; j < M.cols; ++j)
        for (int i = 0; i < M.rows; ++i)
            if (M(i, j) != 0) rep.image_in_kernel = false;
    rep.cohomology_dim = rep.kernel_dim - rep.rank_in;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace vcoh
