#include "doctest.h"
#include "support.hpp"

#include "vcoh/sewing.hpp"

#include <cmath>
#include <filesystem>

using namespace vcoh;
using namespace testsupport;

namespace {

GaussQ g(const char* re, const char* im = "0") { return {q_parse(re), q_parse(im)}; }

SewingConfig base()
{
    SewingConfig c;
    c.eps = g("1/100");
    c.x = {g("1/2")};
    c.y = {g("3/10")};
    return c;
}

bool mentions(const SewingReport& r, const std::string& needle)
{
    for (auto& v : r.violations)
        if (v.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("gaussian rationals")
{
    GaussQ a = g("1", "2"), b = g("3", "-1");
    CHECK(a * b == g("5", "5"));
    CHECK((a * b) / b == a);
    CHECK(a.norm2() == 5);
    CHECK(g("0", "-1/2").str() == "(0 - 1/2i)");
    CHECK_THROWS_AS(a / GaussQ(), Error);
    CHECK(GaussQ::from_json(nlohmann::json::parse(R"(["1/2", "-3"])")) == g("1/2", "-3"));
    CHECK(GaussQ::from_json(nlohmann::json(4)) == g("4"));
    CHECK_THROWS_AS(GaussQ::from_json(nlohmann::json(0.5)), Error);
}

TEST_CASE("domain inequalities")
{
    CHECK(validate(base()).ok());

    SewingConfig big = base();
    big.eps = g("2");
    SewingReport r = validate(big);
    CHECK_FALSE(r.ok());
    CHECK(mentions(r, "|eps| <= r1 r2"));

    SewingConfig inner = base();
    inner.x = {g("1/200")};
    r = validate(inner);
    CHECK_FALSE(r.ok());
    CHECK(mentions(r, "|x_1| >= |eps|/r2"));

    SewingConfig yin = base();
    yin.y = {g("0", "1/1000")};
    CHECK(mentions(validate(yin), "|y_1| >= |eps|/r1"));

    SewingConfig zero = base();
    zero.eps = GaussQ();
    CHECK(mentions(validate(zero), "epsilon = 0"));

    SewingConfig radius = base();
    radius.r2 = 0;
    CHECK(mentions(validate(radius), "r2 > 0"));

    SewingConfig dup = base();
    dup.x = {g("1/2"), g("1/2")};
    CHECK(mentions(validate(dup), "distinct"));

    // equality on every boundary is allowed
    SewingConfig edge;
    edge.r1 = 1;
    edge.r2 = q_parse("1/2");
    edge.eps = g("0", "1/2");
    edge.x = {g("1")};
    edge.y = {g("-1/2")};
    CHECK(validate(edge).ok());
}

TEST_CASE("validation agrees with a floating point oracle")
{
    std::mt19937_64 gen(2024);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7), npts(0, 3);
    auto rnd = [&] { return GaussQ(Q(num(gen), den(gen)), Q(num(gen), den(gen))); };
    auto modulus = [](const GaussQ& z) { return std::hypot(z.re.get_d(), z.im.get_d()); };
    int valid = 0, invalid = 0, decided = 0;
    for (int it = 0; it < 400; ++it) {
        SewingConfig c;
        c.r1 = Q(den(gen), den(gen));
        c.r2 = Q(den(gen), den(gen));
        c.r1.canonicalize();
        c.r2.canonicalize();
        c.eps = rnd();
        for (int i = npts(gen); i > 0; --i) c.x.push_back(rnd());
        for (int i = npts(gen); i > 0; --i) c.y.push_back(rnd());
        double e = modulus(c.eps), r1 = c.r1.get_d(), r2 = c.r2.get_d();
        // skip anything within rounding distance of a boundary, or with repeated points
        bool near = std::abs(e - r1 * r2) < 1e-9;
        bool expect = e > 0 && e <= r1 * r2;
        for (auto& x : c.x) {
            near = near || std::abs(modulus(x) - e / r2) < 1e-9;
            expect = expect && modulus(x) >= e / r2;
        }
        for (auto& y : c.y) {
            near = near || std::abs(modulus(y) - e / r1) < 1e-9;
            expect = expect && modulus(y) >= e / r1;
        }
        for (auto* p : {&c.x, &c.y})
            for (size_t i = 0; i < p->size(); ++i)
                for (size_t j = i + 1; j < p->size(); ++j) near = near || (*p)[i] == (*p)[j];
        if (near) continue;
        ++decided;
        bool got = validate(c).ok();
        CHECK(got == expect);
        (got ? valid : invalid)++;
        if (got) {
            SewingReport cr = check_sewing_consistency(c);
            CAPTURE(cr.to_json().dump());
            CHECK(cr.ok());
        }
    }
    CHECK(decided > 300);
    CHECK(valid > 20);
    CHECK(invalid > 20);
}

TEST_CASE("pinch and the Moebius conjugator")
{
    CHECK(pinch(g("1/10"), g("1/100")) == g("1/10"));
    CHECK(pinch(g("1"), g("1/4")) == g("1/4"));
    CHECK(pinch(g("0", "1"), g("1")) == g("0", "-1"));
    CHECK_THROWS_AS(pinch(GaussQ(), g("1/4")), Error);

    for (int s : {1, -1}) {
        PinchConjugator m = mobius_lambda(g("1/4"), s);
        CHECK(m.lambda_squared() == g("-1/4"));
        CHECK(m.c == GaussQ(0, -s));
        // z -> 1/(4z)
        for (const char* z : {"1", "1/2", "-3/7"}) CHECK(m.map(g(z)) == g("1/4") / g(z));
        CHECK(m.map(g("1/3", "1")) == pinch(g("1/3", "1"), g("1/4")));
    }
    CHECK_THROWS_AS(mobius_lambda(g("1/4"), 0), Error);
    CHECK(check_sewing_consistency(base()).ok());
}

TEST_CASE("coincident points")
{
    SewingConfig c = base();
    c.x = {g("1/2"), g("1/5")};
    c.y = {g("1/5")};
    ExclusionList ex = detect_coincident(c);
    REQUIRE(ex.pairs.size() == 1);
    CHECK(ex.pairs[0] == std::make_pair(2, 1));
    CHECK(detect_coincident(base()).pairs.empty());

    c.y = {g("1/2"), g("1/2")};
    CHECK_THROWS_AS(detect_coincident(c), Error);
}

TEST_CASE("toml subset")
{
    nlohmann::json t = parse_toml("# c\na = 1\nb = \"x\" # tail\n[s]\nc = [1, [\"2\", 3],\n  true,\n]\nd = false\n");
    CHECK(t["a"] == 1);
    CHECK(t["b"] == "x");
    CHECK(t["s.c"].size() == 3);
    CHECK(t["s.c"][1][0] == "2");
    CHECK(t["s.d"] == false);

    auto line_of = [](const std::string& text) {
        try {
            parse_toml(text);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Parse);
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(line_of("a = 1\nb = 0.5\n").find("line 2") != std::string::npos);
    CHECK(line_of("a = 1\na = 2\n").find("duplicate") != std::string::npos);
    CHECK(line_of("a = [1, 2\n").find("unterminated") != std::string::npos);
    CHECK(line_of("a = 1 2\n").find("trailing") != std::string::npos);
    CHECK(line_of("= 3\n").find("key") != std::string::npos);

    SewingConfig c = config_from_toml("[sewing]\nr1 = 2\nr2 = \"1/2\"\nepsilon = [\"0\", \"1/3\"]\nx = [\"1\"]\n");
    CHECK(c.r1 == 2);
    CHECK(c.r2 == Q(1, 2));
    CHECK(c.eps == g("0", "1/3"));
    CHECK(c.x.size() == 1);
    CHECK(c.y.empty());
    CHECK_THROWS_AS(config_from_toml("r1 = 1\nr2 = 1\n"), Error);
    CHECK_THROWS_AS(config_from_toml("r1 = 1\nr2 = 1\nepsilon = 1\nz = 3\n"), Error);
    CHECK_THROWS_AS(config_from_toml("r1 = [\"1\", \"1\"]\nr2 = 1\nepsilon = 1\n"), Error);
}

TEST_CASE("fixture set")
{
    namespace fs = std::filesystem;
    int good = 0, bad = 0;
    for (auto& e : fs::directory_iterator(fs::path(VCOH_FIXTURE_DIR) / "sewing")) {
        std::string name = e.path().filename().string();
        CAPTURE(name);
        SewingConfig c = load_sewing_config(e.path().string());
        SewingReport r = validate(c);
        if (name.rfind("ok_", 0) == 0) {
            ++good;
            CHECK(r.ok());
            CHECK(check_sewing_consistency(c).ok());
            CHECK_NOTHROW(detect_coincident(c));
        } else {
            ++bad;
            CHECK_FALSE(r.ok());
        }
    }
    CHECK(good == 8);
    CHECK(bad == 4);
    CHECK_THROWS_AS(load_sewing_config("/nonexistent/none.toml"), Error);
}

TEST_CASE("pinched series values")
{
    // a product evaluated with zeta_2 = eps / zeta_1 matches the independent
    // evaluation at the pinched point
    SewingConfig c = base();
    REQUIRE(validate(c).ok());
    EpsSeries s = eps_product(random_valid(1, 1, 3), random_valid(1, 1, 4), {}, 2);
    EpsSeries p = s;
    p.policy = ZetaPolicy::Pinched;
    GaussQ z1 = g("1/5"), z2 = pinch(z1, c.eps);
    REQUIRE(z1.im == 0);
    REQUIRE(z2.im == 0);
    Q x = c.x[0].re, y = c.y[0].re, e = c.eps.re;
    int nonzero = 0;
    for (auto wp : {FockState(), FockState({1}), FockState({1, 1}), FockState({2})})
        for (auto a : {FockState(), FockState({1})})
            for (auto b : {FockState(), FockState({1})}) {
                Q full = s.value(wp, {a, b}, {x, y, -z1.re, -z2.re}, e);
                CHECK(p.value(wp, {a, b}, {x, y, -z1.re}, e) == full);
                nonzero += full != 0;
            }
    CHECK(nonzero > 0);
}
