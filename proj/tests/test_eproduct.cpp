#include "doctest.h"
#include "support.hpp"

#include "vcoh/eproduct.hpp"

using namespace vcoh;
using namespace testsupport;

namespace {

const Heisenberg& H() { return default_instance(); }
const Correlators& C() { return default_correlators(); }
FockState st(std::vector<int> p) { return FockState(p); }
const FockState A = FockState({1});
const FockState VAC;
const ModuleVector ONE{FockState()};

Scope scope(int in, int dual, int total = -1)
{
    Scope s;
    s.input_cutoff = in;
    s.dual_cutoff = dual;
    s.max_total = total;
    return s;
}

// f(zeta) -> f(-t) placed on variable `at` of n
RatFunc in_t(const RatFunc& f, int n, int at)
{
    return f.scale_vars(-1).embed(n, {at});
}

}  // namespace

TEST_CASE("product of 0-cochains against the intertwiner oracle")
{
    ModuleVector w1(A), w2 = ONE + ModuleVector(st({2}), Q(-3));
    EpsSeries s = eps_product(from_module_vector(w1), from_module_vector(w2), {}, 2);
    CHECK(s.degree == 0);
    CHECK(s.nvars() == 2);
    for (int l = 0; l <= 2; ++l) {
        auto [u, ubar] = H().dual_basis(l);
        for (auto& wp : states_up_to(H(), 3)) {
            RatFunc want(2);
            for (size_t b = 0; b < u.size(); ++b)
                want += in_t(C().intertwiner_pair(wp, w1, u[b]), 2, 0) *
                        in_t(C().intertwiner_pair(wp, w2, ubar[b]), 2, 1);
            CHECK(s.at(l).pair(wp, {}) == want);
        }
    }
    // l = 0: <w', e^{zeta_1 L(-1)} w_1> <w', e^{zeta_2 L(-1)} w_2>
    CHECK(s.at(0).pair(st({2}), {}) == rf(2, R"({"num": "-4*z1", "den": []})") * Q(-3));
    CHECK_THROWS_AS(s.at(3), Error);
}

TEST_CASE("bilinearity and the zero factor")
{
    Cochain phi = from_YW(ONE), f = random_valid(1, 2, 1), g = random_valid(1, 2, 2);
    CHECK(check_zero(eps_product(phi, zero_cochain(1, 2), {}, 2), scope(2, 2)).ok);
    CHECK(check_zero(eps_product(zero_cochain(0, 3), phi, {}, 1), scope(2, 2)).ok);
    EpsSeries lhs = eps_product(phi, f * Q(2) - g, {}, 1);
    EpsSeries rhs = eps_product(phi, f, {}, 1) * Q(2) - eps_product(phi, g, {}, 1);
    CHECK(check_equal(lhs, rhs, scope(1, 2)).ok);
    EpsSeries lhs2 = eps_product(f + g, phi, {}, 1);
    CHECK(check_equal(lhs2, eps_product(f, phi, {}, 1) + eps_product(g, phi, {}, 1), scope(1, 2)).ok);
}

TEST_CASE("slot arithmetic")
{
    Cochain phi = from_YW(ONE, 2), psi = from_YW(ONE, 2);
    EpsSeries s = eps_product(phi, psi, {}, 1);
    CHECK(s.degree == 2);
    CHECK(s.m == 4);
    CHECK(s.at(1).m() == 4);
    EpsSeries s1 = eps_product(phi, psi, {{{1, 1}}, 1}, 1);
    CHECK(s1.degree == 1);
    CHECK(s1.m == 3);
    CHECK_THROWS_AS(eps_product(phi, psi, {{{1, 2}}, 0}, 1), Error);
    CHECK_THROWS_AS(eps_product(phi, random_valid(2, 1, 1), {{{1, 1}, {1, 2}}, 0}, 1), Error);
    CHECK_THROWS_AS(eps_product(phi, psi, {{}, 5}, 1), Error);
}

TEST_CASE("exclusion identifies the shared parameter")
{
    // (Phi . Psi)(v; x) with x_1 = y_1 equals the unexcluded product at (v, v) on y_1 = x_1
    std::mt19937_64 g(4);
    Cochain phi = from_YW(ONE), psi = random_valid(1, 2, 5);
    EpsSeries full = eps_product(phi, psi, {}, 1);
    EpsSeries cut = eps_product(phi, psi, {{{1, 1}}, 0}, 1);
    for (int l = 0; l <= 1; ++l)
        for (auto& v : states_up_to(H(), 2))
            for (auto& wp : states_up_to(H(), 2)) {
                RatFunc f = full.at(l).pair(wp, {v, v}), h = cut.at(l).pair(wp, {v});
                auto pt = generic_point(g, 3);
                CHECK(h.eval(pt) == f.eval({pt[0], pt[0], pt[1], pt[2]}));
            }
}

TEST_CASE("dual basis independence")
{
    Cochain phi = from_YW(ONE);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        CHECK(check_basis_independence(phi, random_valid(1, 2, seed), {}, 2, seed, scope(1, 2)).ok);
        CHECK(check_basis_independence(from_module_vector(ModuleVector(A)), random_valid(2, 1, seed), {}, 2, seed + 9,
                                       scope(1, 2))
                  .ok);
    }
    // a single factor does change with the basis; only the contracted sum does not
    auto P = random_basis_change(H(), 2, 3);
    CHECK(P.at(2) != Matrix::identity(2));
    CHECK(determinant(P.at(2)) != 0);
}

TEST_CASE("sigma action on products")
{
    Cochain phi = from_YW(ONE);
    EpsSeries s = eps_product(phi, random_valid(2, 1, 3), {}, 1);
    CHECK(check_equal(sigma_act_product(Permutation::identity(3), s), s, scope(1, 1)).ok);
    for (auto& a : all_permutations(3))
        for (auto& b : {Permutation({1, 0, 2}), Permutation({2, 0, 1})})
            CHECK(check_equal(sigma_act_product(a, sigma_act_product(b, s)), sigma_act_product(a * b, s),
                              scope(1, 1))
                      .ok);
    CHECK_THROWS_AS(sigma_act_product(Permutation::identity(2), s), Error);

    // swapping the two blocks of a product of equal factors is the swap zeta_1 <-> zeta_2
    EpsSeries sq = eps_product(phi, phi, {}, 2);
    EpsSeries sw = sigma_act_product(Permutation({1, 0}), sq);
    Permutation params({0, 1, 3, 2});
    for (int l = 0; l <= 2; ++l)
        for (auto& in : input_tuples(H(), 2, scope(2, 2)))
            for (auto& wp : states_up_to(H(), 2))
                CHECK(sw.at(l).pair(wp, in) == sq.at(l).pair(wp, in).permute(params));
}

TEST_CASE("commutator")
{
    Cochain phi = random_valid(1, 2, 6), psi = random_valid(1, 2, 7);
    CHECK(check_zero(commutator(phi, phi, {}, 2), scope(2, 2)).ok);
    CHECK(check_zero(commutator(phi, zero_cochain(1, 2), {}, 2), scope(2, 2)).ok);
    EpsSeries c = commutator(phi, psi, {}, 1);
    CHECK(check_equal(c, commutator(psi, phi, {}, 1) * Q(-1), scope(1, 2)).ok);
    // N(v) E(v) against E(v) do not commute once the two inputs differ in oscillator number
    EpsSeries nc = commutator(e_built({1}, 0, ONE, 2), from_YW(ONE), {}, 1);
    CHECK_FALSE(check_zero(nc, scope(2, 2)).ok);
    CHECK(check_zero(commutator(phi, phi, {{{1, 1}}, 0}, 1), scope(2, 2)).ok);
}

TEST_CASE("Leibniz report")
{
    Cochain phi = from_YW(ONE, 2);
    LeibnizReport z = check_leibniz(zero_cochain(1, 2), from_module_vector(ONE), {}, 1, scope(1, 2));
    CHECK(z.result.ok);
    CHECK(z.sign == -1);
    CHECK(z.slot_n == 1);
    CHECK(z.slot_m == 5);

    // with the per-w' product the law fails already at epsilon^0; the report names the coefficient
    LeibnizReport r = check_leibniz(phi, from_module_vector(ONE), {}, 2, scope(1, 2));
    CHECK_FALSE(r.result.ok);
    CHECK(r.result.witness.rfind("eps^0", 0) == 0);
    CHECK(r.to_json()["sign"] == -1);

    LeibnizReport even = check_leibniz(from_module_vector(ONE), phi, {}, 1, scope(1, 2));
    CHECK(even.sign == 1);
    LeibnizReport two = check_leibniz(random_valid(2, 1, 1), from_module_vector(ONE), {}, 0, scope(1, 1));
    CHECK(two.sign == 1);
    CHECK_THROWS_AS(check_leibniz(phi, from_module_vector(ONE, 0), {}, 1, scope(1, 1)), Error);
}

TEST_CASE("series values and json")
{
    EpsSeries s = eps_product(from_module_vector(ModuleVector(A)), from_module_vector(ModuleVector(A)), {}, 2);
    Q eps(1, 100);
    Q v = s.value(VAC, {}, {Q(1, 10), Q(1, 10)}, eps);
    EpsSeries p = s;
    p.policy = ZetaPolicy::Pinched;
    // t_2 = eps / t_1 = 1/10 again
    CHECK(p.value(VAC, {}, {Q(1, 10)}, eps) == v);
    CHECK_THROWS_AS(p.value(VAC, {}, {Q(0)}, eps), Error);
    nlohmann::json j = s.to_json({}, 2);
    CHECK(j["order"] == 2);
    CHECK(j["zeta_policy"] == "independent");
    CHECK(j["coefficients"].size() == 3);
}
