#include "vcoh/suites.hpp"

namespace vcoh {

namespace {

Scope scope(int in, int dual, int total = -1, int sample = 0, std::uint64_t seed = 1)
{
    Scope s;
    s.input_cutoff = in;
    s.dual_cutoff = dual;
    s.max_total = total;
    s.sample = sample;
    s.seed = seed;
    return s;
}

nlohmann::json scope_json(const Scope& s)
{
    return {{"input_cutoff", s.input_cutoff},
            {"dual_cutoff", s.dual_cutoff},
            {"max_total", s.max_total},
            {"sample", s.sample},
            {"seed", s.seed}};
}

const ModuleVector ONE{FockState()};

}  // namespace

void RunConfig::validate() const
{
    if (cutoff < 1) throw Error(ErrorKind::InvalidInput, "cutoff K must be >= 1");
    if (order < 0) throw Error(ErrorKind::InvalidInput, "order L must be >= 0");
    if (count < 1) throw Error(ErrorKind::InvalidInput, "count must be >= 1");
    if (n < 0) throw Error(ErrorKind::InvalidInput, "n must be >= 0");
    if (m < 0) throw Error(ErrorKind::InvalidInput, "m must be >= 0");
    if (t < 0 || t > 2) throw Error(ErrorKind::InvalidInput, "t must be 0, 1 or 2");
}

nlohmann::json RunConfig::to_json() const
{
    return {{"cutoff", cutoff},
            {"order", order},
            {"seed", seed},
            {"count", count},
            {"n", n},
            {"m", half ? nlohmann::json("1/2") : nlohmann::json(m)},
            {"t", t}};
}

void apply_toml(RunConfig& cfg, const std::string& text, std::string* output)
{
    nlohmann::json t = parse_toml(text);
    for (auto& [k, v] : t.items()) {
        std::string key = k.rfind("run.", 0) == 0 ? k.substr(4) : k;
        auto integer = [&]() -> long {
            if (!v.is_number_integer()) throw Error(ErrorKind::Parse, "config key " + k + " must be an integer");
            return v.get<long>();
        };
        if (key == "cutoff") {
            cfg.cutoff = static_cast<int>(integer());
        } else if (key == "order") {
            cfg.order = static_cast<int>(integer());
        } else if (key == "seed") {
            long s = integer();
            if (s < 0) throw Error(ErrorKind::Parse, "seed must be nonnegative");
            cfg.seed = static_cast<std::uint64_t>(s);
        } else if (key == "count") {
            cfg.count = static_cast<int>(integer());
        } else if (key == "n") {
            cfg.n = static_cast<int>(integer());
        } else if (key == "t") {
            cfg.t = static_cast<int>(integer());
        } else if (key == "m") {
            if (v.is_string() && v.get<std::string>() == "1/2") {
                cfg.half = true;
                cfg.m = 0;
            } else {
                cfg.m = static_cast<int>(integer());
                cfg.half = false;
            }
        } else if (key == "output") {
            if (!v.is_string()) throw Error(ErrorKind::Parse, "output must be a string");
            if (output) *output = v.get<std::string>();
        } else {
            throw Error(ErrorKind::Parse, "unknown config key " + k);
        }
    }
}

void SuiteReport::record(const std::string& name, bool ok, nlohmann::json detail)
{
    assertions.push_back({name, ok, std::move(detail)});
}

void SuiteReport::record(const std::string& name, const CheckReport& r)
{
    record(name, r.ok, r.to_json());
}

long SuiteReport::failed() const
{
    long f = 0;
    for (auto& a : assertions) f += !a.ok;
    return f;
}

nlohmann::json SuiteReport::to_json() const
{
    nlohmann::json as = nlohmann::json::array();
    for (auto& a : assertions) as.push_back({{"name", a.name}, {"ok", a.ok}, {"detail", a.detail}});
    return {{"suite", suite},
            {"ok", ok()},
            {"passed", static_cast<long>(assertions.size()) - failed()},
            {"failed", failed()},
            {"info", info},
            {"assertions", as}};
}

SuiteReport complex_suite(const RunConfig& cfg)
{
    SuiteReport rep;
    rep.suite = "check-complex";
    // three inputs of weight K nest beyond the weight limit; the summed weight is capped at K + 2
    Scope s2 = scope(cfg.cutoff, 2), s3 = scope(cfg.cutoff, 2, cfg.cutoff + 2, 8, cfg.seed);
    rep.info["scope_two_inputs"] = scope_json(s2);
    rep.info["scope_three_inputs"] = scope_json(s3);
    nlohmann::json tested = nlohmann::json::array();
    struct Slot {
        int n, m;
        bool half_path;
        const char* label;
    };
    for (const Slot& sl : {Slot{0, 3, false, "(0,3)"}, Slot{1, 3, false, "(1,3)"}, Slot{1, 2, true, "(1,2)->(2,1/2)->(3,0)"}}) {
        for (int i = 0; i < cfg.count; ++i) {
            std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
            Cochain phi = random_valid(sl.n, sl.m, seed);
            const Scope& sc = sl.n == 0 ? s2 : s3;
            ComplexReport r = check_complex(phi, sc, sl.half_path);
            nlohmann::json d = r.to_json();
            d["slot"] = sl.label;
            d["seed"] = seed;
            tested.push_back({{"slot", sl.label}, {"seed", seed}, {"kind", phi.kind()}});
            rep.record(std::string("delta delta = 0 at ") + sl.label + " seed " + std::to_string(seed),
                       r.ok() && r.identity.checked > 0, d);
        }
    }
    rep.info["cochains_tested"] = tested;
    return rep;
}

SuiteReport leibniz_suite(const RunConfig& cfg)
{
    SuiteReport rep;
    rep.suite = "check-leibniz";
    Scope sc = scope(1, 1);
    rep.info["scope"] = scope_json(sc);
    rep.info["coefficients"] = nlohmann::json::array();
    for (int l = 0; l <= cfg.order; ++l) rep.info["coefficients"].push_back(l);
    for (int i = 0; i < cfg.count; ++i) {
        std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
        Cochain phi = random_valid(1, 2, seed);
        struct Case {
            Cochain psi;
            ExclusionList ex;
            std::string label;
        };
        ExclusionList one;
        one.pairs = {{1, 1}};
        std::vector<Case> cases = {{random_valid(0, 3, seed + 1000), {}, "((1,2),(0,3)) r=0"},
                                   {random_valid(1, 2, seed + 1000), {}, "((1,2),(1,2)) r=0"},
                                   {random_valid(1, 2, seed + 1000), one, "((1,2),(1,2)) r=1"}};
        for (auto& c : cases) {
            LeibnizReport r = check_leibniz(phi, c.psi, c.ex, cfg.order, sc);
            nlohmann::json d = r.to_json();
            d["seed"] = seed;
            rep.record("Leibniz " + c.label + " seed " + std::to_string(seed), r.result.ok && r.result.checked > 0, d);
        }
    }
    return rep;
}

SuiteReport properties_suite(const RunConfig& cfg)
{
    SuiteReport rep;
    rep.suite = "check-properties";
    const Correlators& C = default_correlators();
    const VertexAlgebra& va = C.algebra();
    int k = std::min(cfg.cutoff, 2);
    Scope sc = scope(k, 2);
    rep.info["scope"] = scope_json(sc);

    std::vector<std::pair<std::string, Cochain>> gens = {{"Y(.,z)1", from_YW(ONE, 2)},
                                                         {"E^(2)(.;1)", from_E(2, ONE, 2)}};
    for (int i = 0; i < cfg.count; ++i) {
        std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
        for (int n = 1; n <= 3; ++n)
            gens.push_back({"random (" + std::to_string(n) + "," + std::to_string(3 - n) + ") seed " +
                                std::to_string(seed),
                            random_valid(n, 3 - n, seed)});
    }
    for (auto& [name, c] : gens) {
        Scope s = c.degree() >= 3 ? scope(std::min(k, 1), 1) : sc;
        rep.record("L(-1)-derivative: " + name, validate_L_minus1(c, s));
        rep.record("L(0)-conjugation: " + name, validate_L0(c, s));
        rep.record("shuffle: " + name, validate_shuffle(c, s));
    }

    // locality: the correlator does not depend on the expansion region
    const FockState A({1}), A2({2}), A11({1, 1});
    std::vector<std::vector<FockState>> ins = {{A, A2, A}, {A11, A, A2}, {A2, A}};
    for (auto& vs : ins)
        for (auto& wp : {FockState(), A, A2}) {
            RatFunc base = C.matrix_element(wp, vs, FockState());
            bool ok = true;
            for (auto& p : all_permutations(static_cast<int>(vs.size())))
                ok = ok && C.matrix_element_in_region(wp, vs, FockState(), p.img) == base;
            std::string label;
            for (auto& v : vs) label += v.str() + " ";
            rep.record("locality: " + label + "against " + wp.str(), ok, {{"value", base.to_json()}});
        }

    // invariant form up to weight K
    for (int l = 0; l <= cfg.cutoff; ++l) {
        bool orth = true, sym = true;
        for (int l2 = 0; l2 <= cfg.cutoff; ++l2)
            for (auto& a : va.basis(l))
                for (auto& b : va.basis(l2)) {
                    Q f = va.form(a, b, 1);
                    if (l != l2 && f != 0) orth = false;
                    if (f != va.form(b, a, 1)) sym = false;
                }
        rep.record("form weight-orthogonality at weight " + std::to_string(l), orth);
        rep.record("form symmetry at weight " + std::to_string(l), sym);
        rep.record("Gram matrix invertible at weight " + std::to_string(l), determinant(va.gram(l)) != 0);
        auto [u, d] = va.dual_basis(l);
        bool dual = true;
        for (size_t a = 0; a < u.size(); ++a)
            for (size_t b = 0; b < d.size(); ++b) dual = dual && va.bilinear_form(u[a], d[b]) == (a == b ? 1 : 0);
        rep.record("dual basis pairing at weight " + std::to_string(l), dual);
    }
    return rep;
}

SuiteReport cohomology_suite(const RunConfig& cfg)
{
    SuiteReport rep;
    rep.suite = "cohomology";
    // at the half slot the nested maps need the summed input weight capped
    Scope sc = scope(std::min(cfg.cutoff, 3), 2, cfg.half ? 6 : -1);
    rep.info["probes"] = scope_json(sc);
    CohomologyReport r = truncated_cohomology(cfg.n, cfg.m, cfg.half, 2, sc);
    nlohmann::json d = r.to_json();
    d.erase("seconds");
    rep.info["dimensions"] = d;
    rep.record("rank-nullity", r.rank_nullity, d);
    rep.record("image of the incoming differential inside the kernel", r.image_in_kernel, d);
    return rep;
}

SuiteReport classes_suite(const RunConfig& cfg)
{
    SuiteReport rep;
    rep.suite = "classes";
    Scope sc = scope(1, 1);
    rep.info["scope"] = scope_json(sc);
    rep.info["order"] = cfg.order;
    Cochain phi = from_YW(ONE, 2);
    for (int i = 0; i < cfg.count; ++i) {
        std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
        ClassWitness w = class_representative(ClassKind::DPhiPhi, random_valid(1, 2, seed), cfg.order, sc,
                                              random_valid(1, 2, seed + 1000));
        nlohmann::json d = w.to_json();
        d["seed"] = seed;
        rep.record("(dPhi).Phi closed, seed " + std::to_string(seed), w.closed.ok, d);
        if (w.shift) rep.record("shift decomposition and cancellation, seed " + std::to_string(seed), w.shift->ok(),
                                w.shift->to_json());
        ClassWitness c = class_representative(ClassKind::DChiChi, random_valid(0, 3, seed), cfg.order, sc);
        rep.record("(dchi).chi closed, seed " + std::to_string(seed), c.closed.ok, c.to_json());
        AlphaSolution s = solve_alpha(from_module_vector(ONE), phi, 1, cfg.order, sc);
        if (s.alpha) {
            ClassWitness a = class_representative(ClassKind::DAlphaAlpha, *s.alpha, cfg.order, sc);
            rep.record("(dalpha).alpha closed on the solved alpha, seed " + std::to_string(seed), a.closed.ok,
                       a.to_json());
        } else {
            rep.record("delta chi = Phi . alpha is solvable", false, s.to_json());
        }
        ClassWitness r = class_representative(ClassKind::DAlphaAlpha, random_valid(1, 1, seed), cfg.order, sc);
        rep.record("(dalpha).alpha closed on a sampled alpha, seed " + std::to_string(seed), r.closed.ok, r.to_json());
    }
    return rep;
}

SuiteReport lie_table_suite(const RunConfig& cfg)
{
    SuiteReport rep;
    rep.suite = "lie-table";
    Scope sc = scope(1, 1);
    rep.info["scope"] = scope_json(sc);
    Cochain phi = from_YW(ONE, 2), chi = from_module_vector(ONE);
    AlphaSolution s = solve_alpha(chi, phi, cfg.t, cfg.order, sc);
    rep.record("delta chi = Phi . alpha is solvable", s.feasible, s.to_json());
    if (!s.alpha) return rep;
    BracketTable T = lie_table(phi, chi, *s.alpha, cfg.t, cfg.order, sc);
    rep.info["table"] = T.to_json();
    for (auto& r : T.relations) {
        nlohmann::json d = r.holds.to_json();
        d["expect_nonzero"] = r.expect_nonzero;
        d["nonzero"] = r.nonzero;
        rep.record("relation " + r.name, r.ok(), d);
    }
    for (auto& j : T.jacobi)
        rep.record("Jacobi " + j.a + "," + j.b + "," + j.c, j.conclusive && j.ok,
                   {{"conclusive", j.conclusive}, {"detail", j.detail}});
    return rep;
}

SuiteReport sewing_suite(const std::string& path)
{
    SuiteReport rep;
    rep.suite = "sew-validate";
    rep.info["file"] = path;
    SewingConfig c = load_sewing_config(path);
    SewingReport v = validate(c);
    rep.record("domain inequalities", v.ok(), v.to_json());
    if (!v.ok()) return rep;
    SewingReport k = check_sewing_consistency(c);
    rep.record("pinch and Moebius consistency", k.ok(), k.to_json());
    ExclusionList ex = detect_coincident(c);
    nlohmann::json pairs = nlohmann::json::array();
    for (auto& [i, j] : ex.pairs) pairs.push_back({i, j});
    rep.info["excluded_pairs"] = pairs;
    return rep;
}

nlohmann::json assemble_report(const std::string& command, const RunConfig& cfg, const std::vector<SuiteReport>& suites)
{
    long failed = 0, passed = 0;
    nlohmann::json ss = nlohmann::json::array();
    for (auto& s : suites) {
        failed += s.failed();
        passed += static_cast<long>(s.assertions.size()) - s.failed();
        ss.push_back(s.to_json());
    }
    return {{"schema", "vcoh-report/1"},
            {"command", command},
            {"config", cfg.to_json()},
            {"ok", failed == 0},
            {"passed", passed},
            {"failed", failed},
            {"suites", ss}};
}

}  // namespace vcoh
