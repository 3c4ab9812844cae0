#include "doctest.h"
#include "support.hpp"

#include "vcoh/cochains.hpp"

using namespace vcoh;
using namespace testsupport;

namespace {

const Heisenberg& H() { return default_instance(); }
const Correlators& C() { return default_correlators(); }
FockState st(std::vector<int> p) { return FockState(p); }
const FockState A = FockState({1});
const FockState A2 = FockState({1, 1});
const FockState A3 = FockState({1, 1, 1});
const FockState VAC;
const ModuleVector ONE{FockState()};

Scope small(int in = 2, int dual = 2)
{
    Scope s;
    s.input_cutoff = in;
    s.dual_cutoff = dual;
    return s;
}

bool same_values(const Cochain& f, const Cochain& g, const Scope& sc)
{
    for (auto& tup : input_tuples(H(), f.degree(), sc))
        for (auto& wp : states_up_to(H(), sc.dual_cutoff))
            if (f.pair(wp, tup) != g.pair(wp, tup)) return false;
    return true;
}

}  // namespace

TEST_CASE("evaluate: stored entries and linearity")
{
    Cochain e2 = from_E(2, ONE);
    Cochain t = tabulate(e2, 2, 2);
    RationalSection s = t.evaluate({ModuleVector(A), ModuleVector(A)}, 2);
    CHECK(s.pair(VAC) == RatFunc::diff_pole(2, 0, 1, 2));
    CHECK(s.tags == std::vector<int>{1, 1});
    for (auto& [b, f] : s.entries) CHECK(f == t.pair(b, {A, A}));

    RationalSection s2 = t.evaluate({ModuleVector(A, 2), ModuleVector(A)}, 2);
    for (auto& [b, f] : s.entries) CHECK(s2.pair(b) == f * Q(2));

    CHECK_THROWS_AS(t.evaluate({ModuleVector(A3), ModuleVector(A)}, 2), Error);
    try {
        t.evaluate({ModuleVector(st({3})), ModuleVector(A)}, 2);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CutoffExceeded);
    }
}

TEST_CASE("evaluate is multilinear on mixed inputs")
{
    std::mt19937_64 g(11);
    Cochain e2 = from_E(2, ONE);
    auto states = states_up_to(H(), 2);
    std::uniform_int_distribution<size_t> pick(0, states.size() - 1);
    for (int trial = 0; trial < 8; ++trial) {
        Q al = small_q(g), be = small_q(g);
        FockState u = states[pick(g)], v = states[pick(g)], x = states[pick(g)];
        ModuleVector mix(u, al);
        mix.add(v, be);
        RationalSection lhs = e2.evaluate({mix, ModuleVector(x)}, 2);
        for (auto& b : states_up_to(H(), 2)) {
            RatFunc rhs = e2.pair(b, {u, x}) * al + e2.pair(b, {v, x}) * be;
            CHECK(lhs.pair(b) == rhs);
        }
    }
}

TEST_CASE("sigma action")
{
    // phi(v1, v2) = N(v1) E(v1, v2): swapping gives N(v2) E(v1, v2) by locality
    Cochain phi = e_built({1, 0}, 0, ONE, 2);
    Cochain sw = sigma_act(Permutation({1, 0}), phi);
    CHECK(sw.pair(VAC, {A, A2}) == phi.pair(VAC, {A, A2}) * Q(2));
    CHECK(sw.pair(VAC, {A, A2}) == C().matrix_element(VAC, {A, A2}, VAC) * Q(2));

    CHECK(same_values(sigma_act(Permutation::identity(2), phi), phi, small()));
    Cochain e2 = from_E(2, ONE);
    CHECK(same_values(sigma_act(Permutation({1, 0}), e2), e2, small()));

    CHECK_THROWS_AS(sigma_act(Permutation::identity(3), phi), Error);

    Cochain phi3 = e_built({0, 1, 2}, 0, ONE, 2);
    Scope sc = small(1, 1);
    for (auto& s : all_permutations(3))
        for (auto& t : all_permutations(3))
            CHECK(same_values(sigma_act(s, sigma_act(t, phi3)), sigma_act(s * t, phi3), sc));
}

TEST_CASE("shuffle kernel")
{
    CHECK(shuffle_kernel(1).size() == 1);
    CHECK(shuffle_kernel(2).size() == 1);
    CHECK(shuffle_kernel(3).size() == 2);
    // n = 2: the kernel is spanned by the symmetrizer
    auto k = shuffle_kernel(2)[0];
    CHECK(k[0] == k[1]);
}

TEST_CASE("validate_shuffle")
{
    CHECK(validate_shuffle(from_YW(ONE), small()).ok);
    Cochain e2 = from_E(2, ONE);
    CHECK(validate_shuffle(e2, small()).ok);
    CHECK(e2.flags().shuffle == Flag::Verified);

    Cochain t = tabulate(e2, 2, 2);
    Cochain bad = edited_table(t, {{VAC, {A, A2}, RatFunc::diff_pole(2, 0, 1, 3)}});
    CheckReport r = validate_shuffle(bad, small());
    CHECK_FALSE(r.ok);
    CHECK(r.witness.find("a(-1)^2") != std::string::npos);
    CHECK(bad.flags().shuffle == Flag::Failed);

    // the unprojected decorated map is not symmetric
    CHECK_FALSE(validate_shuffle(e_built({1, 0}, 0, ONE, 2), small()).ok);
    // the literal E^(3) has signed shuffle sum 1 and is rejected
    CHECK_THROWS_AS(from_E(3, ONE), Error);
}

TEST_CASE("validate_L_minus1")
{
    for (auto& w : {ONE, ModuleVector(A), ModuleVector(A2) + ModuleVector(st({2}), Q(3))}) {
        Cochain c = from_module_vector(w);
        CHECK(validate_L_minus1(c, small(2, 4)).ok);
    }
    CHECK(validate_L_minus1(from_YW(ONE), small()).ok);
    // with a weighted ket the sum of derivatives picks up Y(v,z)L(-1)w
    CHECK_FALSE(validate_L_minus1(e_built({0}, 0, ModuleVector(A), 2), small()).ok);
    CHECK(validate_L_minus1(e_built({2, 1}, 1, ONE, 2), small()).ok);

    Cochain t = tabulate(from_E(2, ONE), 3, 2);
    RatFunc v = t.pair(VAC, {A, A});
    Cochain bad = edited_table(t, {{VAC, {A, A}, v * Q(2)}});
    CheckReport r = validate_L_minus1(bad, small());
    CHECK_FALSE(r.ok);
    CHECK(bad.flags().lder == Flag::Failed);
}

TEST_CASE("validate_L0")
{
    CHECK(validate_L0(from_YW(ONE), small()).ok);
    CHECK(validate_L0(zero_cochain(2, 1), small()).ok);

    Cochain t = tabulate(from_YW(ONE), 2, 2);
    RatFunc f = t.pair(st({1}), {A});
    Cochain bad = edited_table(t, {{st({1}), {A}, f * RatFunc::axis_pole(1, 0, 1)}});
    CHECK_FALSE(validate_L0(bad, small()).ok);

    // a weighted ket breaks the conjugation property
    CHECK_FALSE(validate_L0(e_built({0}, 0, ModuleVector(A), 2), small()).ok);
    try {
        from_YW(ModuleVector(A));
        FAIL("expected a validation failure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ValidationFailure);
    }
}

TEST_CASE("L(0) conjugation as covariance of the tagged section")
{
    std::mt19937_64 g(5);
    Cochain phi = random_valid(2, 2, 3);
    for (int trial = 0; trial < 4; ++trial) {
        Q lam = small_q(g);
        if (lam == 0) lam = 2;
        RationalSection s = phi.evaluate({ModuleVector(A), ModuleVector(A2)}, 2);
        int total = 0;
        for (int t : s.tags) total += t;
        for (auto& [b, f] : s.entries) {
            Q lb = 1, lt = 1;
            for (int i = 0; i < b.weight(); ++i) lb *= lam;
            for (int i = 0; i < total; ++i) lt *= lam;
            CHECK(f * lb == f.scale_vars(lam) * lt);
        }
    }
}

TEST_CASE("generators")
{
    Cochain c = from_module_vector(ONE);
    CHECK(c.degree() == 0);
    CHECK(c.pair(VAC, {}) == RatFunc::constant(0, 1));
    CHECK(c.flags().lder == Flag::Verified);

    Cochain e2 = from_E(2, ONE);
    CHECK(e2.evaluate({ModuleVector(A), ModuleVector(A)}, 0).pair(VAC) == RatFunc::diff_pole(2, 0, 1, 2));
    CHECK(e2.flags().shuffle == Flag::Verified);

    Cochain r1 = random_valid(1, 2, 7), r2 = random_valid(1, 2, 7);
    CHECK(cochain_to_json(r1, 2, 2) == cochain_to_json(r2, 2, 2));
    CHECK(r1.flags().l0 == Flag::Verified);
    CHECK(cochain_to_json(random_valid(1, 2, 8), 2, 2) != cochain_to_json(r1, 2, 2));
}

TEST_CASE("random valid 3-cochains are members and nonzero")
{
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        Cochain phi = random_valid(3, 2, seed);
        CHECK(validate_shuffle(phi, small(2, 1)).ok);
        bool nonzero = false;
        for (auto& wp : states_up_to(H(), 6)) nonzero = nonzero || !phi.pair(wp, {A, A2, A3}).is_zero();
        CHECK(nonzero);
    }
}

TEST_CASE("json round trip")
{
    Cochain phi = random_valid(2, 1, 4);
    nlohmann::json j = cochain_to_json(phi, 2, 2);
    Cochain back = cochain_from_json(nlohmann::json::parse(j.dump()));
    CHECK(cochain_to_json(back, 2, 2) == j);
    CHECK(back.flags().lder == phi.flags().lder);
    CHECK(same_values(back, phi, small()));
    CHECK_THROWS_AS(cochain_from_json(nlohmann::json::parse("{\"degree\": 2}")), Error);
}

TEST_CASE("compositions reproduce longer correlators")
{
    // Y o E^(1) and E^(1) o_1 Y both give E^(2)
    Cochain e1 = from_YW(ONE);
    Cochain l = left_compose(e1), p = point_compose(e1, 0);
    for (auto& tup : input_tuples(H(), 2, small(2)))
        for (auto& wp : states_up_to(H(), 3)) {
            RatFunc want = C().matrix_element(wp, tup, VAC);
            CHECK(l.pair(wp, tup) == want);
            CHECK(p.pair(wp, tup) == want);
        }
    Cochain e2 = from_E(2, ONE);
    Cochain p1 = point_compose(e2, 1);
    CHECK(p1.pair(st({2}), {A, A2, A}) == C().matrix_element(st({2}), {A, A2, A}, VAC));
}

TEST_CASE("composability, S_n stability and nesting")
{
    ComposabilityScope sc;
    sc.base = small(1, 1);
    Cochain e2 = from_E(2, ONE);
    CheckReport r = check_composability(e2, 1, sc);
    CHECK(r.ok);
    CHECK(r.checked > 0);
    CHECK(e2.flags().composable == Flag::Verified);
    CHECK(check_composability(e2, 0, sc).ok);

    Cochain phi = random_valid(2, 1, 9);
    for (auto& s : all_permutations(2)) {
        Cochain sp = sigma_act(s, phi);
        CHECK(validate_L_minus1(sp, small()).ok);
        CHECK(validate_L0(sp, small()).ok);
        CHECK(check_composability(sp, 1, sc).ok);
    }

    // a table whose entry has an extra pole is not composable
    Cochain t = tabulate(from_YW(ONE), 4, 4);
    Cochain bad = edited_table(t, {{st({1}), {A}, RatFunc::axis_pole(1, 0, 3)}});
    CHECK_FALSE(check_composability(bad, 1, sc).ok);
}
