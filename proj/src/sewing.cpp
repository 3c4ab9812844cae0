#include "vcoh/sewing.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace vcoh {

GaussQ GaussQ::operator/(const GaussQ& o) const
{
    Q n = o.norm2();
    if (n == 0) throw Error(ErrorKind::DomainViolation, "division by zero");
    GaussQ num = *this * GaussQ(o.re, -o.im);
    return {num.re / n, num.im / n};
}

std::string GaussQ::str() const
{
    if (im == 0) return q_str(re);
    return "(" + q_str(re) + (im < 0 ? " - " : " + ") + q_str(im < 0 ? Q(-im) : im) + "i)";
}

GaussQ GaussQ::from_json(const nlohmann::json& j)
{
    auto one = [](const nlohmann::json& v) -> Q {
        if (v.is_string()) return q_parse(v.get<std::string>());
        if (v.is_number_integer()) return Q(v.get<long>());
        throw Error(ErrorKind::Parse, "expected a rational \"p/q\" or an integer");
    };
    if (j.is_array()) {
        if (j.size() != 2) throw Error(ErrorKind::Parse, "a complex point is [re, im]");
        return {one(j[0]), one(j[1])};
    }
    return {one(j)};
}

nlohmann::json SewingReport::to_json() const
{
    return {{"ok", ok()}, {"violations", violations}};
}

SewingReport validate(const SewingConfig& c)
{
    SewingReport r;
    auto bad = [&](const std::string& s) { r.violations.push_back(s); };
    if (c.r1 <= 0) bad("r1 > 0 fails: r1 = " + q_str(c.r1));
    if (c.r2 <= 0) bad("r2 > 0 fails: r2 = " + q_str(c.r2));
    Q e2 = c.eps.norm2();
    if (e2 == 0) bad("epsilon = 0 is excluded");
    Q rr = c.r1 * c.r2;
    if (e2 > rr * rr) bad("|eps| <= r1 r2 fails: |eps|^2 = " + q_str(e2) + " > " + q_str(rr * rr));
    // annuli |eps|/r2 <= |zeta_1| <= r1 and |eps|/r1 <= |zeta_2| <= r2; both are
    // nonempty exactly when |eps| <= r1 r2, so only the points are checked here
    if (c.r1 > 0 && c.r2 > 0) {
        for (size_t i = 0; i < c.x.size(); ++i)
            if (c.x[i].norm2() * c.r2 * c.r2 < e2)
                bad("|x_" + std::to_string(i + 1) + "| >= |eps|/r2 fails at x = " + c.x[i].str());
        for (size_t j = 0; j < c.y.size(); ++j)
            if (c.y[j].norm2() * c.r1 * c.r1 < e2)
                bad("|y_" + std::to_string(j + 1) + "| >= |eps|/r1 fails at y = " + c.y[j].str());
    }
    auto distinct = [&](const std::vector<GaussQ>& p, const char* name) {
        for (size_t i = 0; i < p.size(); ++i)
            for (size_t j = i + 1; j < p.size(); ++j)
                if (p[i] == p[j])
                    bad(std::string("points on ") + name + " must be distinct: " + std::to_string(i + 1) + " and " +
                        std::to_string(j + 1) + " coincide");
    };
    distinct(c.x, "sphere 1");
    distinct(c.y, "sphere 2");
    return r;
}

GaussQ pinch(const GaussQ& zeta1, const GaussQ& eps)
{
    if (zeta1.is_zero()) throw Error(ErrorKind::DomainViolation, "pinch at zeta_1 = 0");
    return eps / zeta1;
}

GaussQ PinchConjugator::map(const GaussQ& z) const
{
    if (z.is_zero()) throw Error(ErrorKind::DomainViolation, "Moebius map at z = 0");
    return -lambda_squared() / z;
}

PinchConjugator mobius_lambda(const GaussQ& eps, int xi_sign)
{
    if (xi_sign != 1 && xi_sign != -1) throw Error(ErrorKind::InvalidInput, "xi is +i or -i");
    PinchConjugator m;
    m.eps = eps;
    m.c = GaussQ(0, -xi_sign);   // -xi
    return m;
}

SewingReport check_sewing_consistency(const SewingConfig& c)
{
    SewingReport r;
    auto bad = [&](const std::string& s) { r.violations.push_back(s); };
    Q e2 = c.eps.norm2();
    auto in_annulus = [&](const GaussQ& z, const Q& inner_r, const Q& outer_r) {
        Q n = z.norm2();
        return n * inner_r * inner_r >= e2 && n <= outer_r * outer_r;
    };
    // boundary and interior samples of A_1
    std::vector<GaussQ> samples = {GaussQ(c.r1), GaussQ(0, c.r1), GaussQ(c.r1 * Q(3, 5), c.r1 * Q(4, 5)),
                                   c.eps / GaussQ(c.r2)};
    PinchConjugator plus = mobius_lambda(c.eps, 1), minus = mobius_lambda(c.eps, -1);
    if (plus.lambda_squared() != minus.lambda_squared()) bad("lambda^2 depends on the sign of xi");
    if (plus.c != -minus.c) bad("flipping xi does not flip lambda");
    for (auto& z1 : samples) {
        if (!in_annulus(z1, c.r2, c.r1)) {
            bad("sample " + z1.str() + " is not in A_1");
            continue;
        }
        GaussQ z2 = pinch(z1, c.eps);
        if (!in_annulus(z2, c.r1, c.r2)) bad("pinch(" + z1.str() + ") = " + z2.str() + " is not in A_2");
        if (z1 * z2 != c.eps) bad("zeta_1 zeta_2 != eps at " + z1.str());
        if (pinch(z2, c.eps) != z1) bad("pinch is not an involution at " + z1.str());
        if (plus.map(z1) != z2 || minus.map(z1) != z2) bad("Moebius map differs from pinch at " + z1.str());
        // real eps and real points: the conjugator of the vertex algebra gives the same map
        if (c.eps.im == 0 && z1.im == 0)
            for (int s : {1, -1})
                if (MobiusConjugator::from_eps(c.eps.re, s).apply(z1.re) != z2.re || z2.im != 0)
                    bad("symbolic conjugator differs from pinch at " + z1.str());
    }
    return r;
}

ExclusionList detect_coincident(const SewingConfig& c)
{
    for (auto* p : {&c.x, &c.y})
        for (size_t i = 0; i < p->size(); ++i)
            for (size_t j = i + 1; j < p->size(); ++j)
                if ((*p)[i] == (*p)[j])
                    throw Error(ErrorKind::InvalidInput, "repeated point " + (*p)[i].str() + " on one sphere");
    ExclusionList ex;
    for (size_t i = 0; i < c.x.size(); ++i)
        for (size_t j = 0; j < c.y.size(); ++j)
            if (c.x[i] == c.y[j]) ex.pairs.emplace_back(static_cast<int>(i + 1), static_cast<int>(j + 1));
    ex.validate(static_cast<int>(c.x.size()), static_cast<int>(c.y.size()));
    return ex;
}

namespace {

struct TomlReader {
    const std::string& s;
    size_t pos = 0;
    int line;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error(ErrorKind::Parse, "toml line " + std::to_string(line) + ": " + what);
    }
    void skip_ws()
    {
        while (pos < s.size()) {
            char ch = s[pos];
            if (ch == ' ' || ch == '\t' || ch == '\r') {
                ++pos;
            } else if (ch == '\n') {
                ++pos;
                ++line;
            } else if (ch == '#') {
                while (pos < s.size() && s[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    }
    nlohmann::json value()
    {
        skip_ws();
        if (pos >= s.size()) fail("missing value");
        char ch = s[pos];
        if (ch == '"') {
            std::string out;
            ++pos;
            while (pos < s.size() && s[pos] != '"') {
                if (s[pos] == '\n' || s[pos] == '\\') fail("unsupported string content");
                out += s[pos++];
            }
            if (pos >= s.size()) fail("unterminated string");
            ++pos;
            return out;
        }
        if (ch == '[') {
            ++pos;
            nlohmann::json arr = nlohmann::json::array();
            skip_ws();
            if (pos < s.size() && s[pos] == ']') {
                ++pos;
                return arr;
            }
            while (true) {
                arr.push_back(value());
                skip_ws();
                if (pos >= s.size()) fail("unterminated array");
                if (s[pos] == ',') {
                    ++pos;
                    skip_ws();
                    if (pos < s.size() && s[pos] == ']') {
                        ++pos;
                        return arr;
                    }
                    continue;
                }
                if (s[pos] == ']') {
                    ++pos;
                    return arr;
                }
                fail("expected ',' or ']'");
            }
        }
        if (s.compare(pos, 4, "true") == 0) {
            pos += 4;
            return true;
        }
        if (s.compare(pos, 5, "false") == 0) {
            pos += 5;
            return false;
        }
        size_t start = pos;
        if (ch == '+' || ch == '-') ++pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
        std::string digits;
        for (size_t i = start; i < pos; ++i)
            if (s[i] != '_') digits += s[i];
        if (digits.empty() || digits == "+" || digits == "-") fail("unsupported value");
        if (pos < s.size() && (s[pos] == '.' || s[pos] == 'e' || s[pos] == 'E'))
            fail("floats are not accepted; write rationals as \"p/q\"");
        return std::stol(digits);
    }
};

}  // namespace

nlohmann::json parse_toml(const std::string& text)
{
    nlohmann::json out = nlohmann::json::object();
    std::string section;
    // one statement per line, arrays may continue over several lines
    TomlReader rd{text, 0, 1};
    while (true) {
        rd.skip_ws();
        if (rd.pos >= text.size()) break;
        if (text[rd.pos] == '[') {
            size_t end = text.find(']', rd.pos);
            size_t nl = text.find('\n', rd.pos);
            if (end == std::string::npos || (nl != std::string::npos && nl < end)) rd.fail("bad section header");
            section = text.substr(rd.pos + 1, end - rd.pos - 1);
            if (section.empty() || section.find_first_of(" \t[\"") != std::string::npos) rd.fail("bad section name");
            rd.pos = end + 1;
        } else {
            size_t start = rd.pos;
            while (rd.pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[rd.pos])) || text[rd.pos] == '_' || text[rd.pos] == '-'))
                ++rd.pos;
            std::string key = text.substr(start, rd.pos - start);
            if (key.empty()) rd.fail("expected a key");
            while (rd.pos < text.size() && (text[rd.pos] == ' ' || text[rd.pos] == '\t')) ++rd.pos;
            if (rd.pos >= text.size() || text[rd.pos] != '=') rd.fail("expected '=' after " + key);
            ++rd.pos;
            int at = rd.line;
            nlohmann::json v = rd.value();
            std::string full = section.empty() ? key : section + "." + key;
            if (out.contains(full)) rd.fail("duplicate key " + full);
            out[full] = v;
            // rest of the line must be empty
            while (rd.pos < text.size() && (text[rd.pos] == ' ' || text[rd.pos] == '\t' || text[rd.pos] == '\r')) ++rd.pos;
            if (rd.pos < text.size() && text[rd.pos] != '\n' && text[rd.pos] != '#') {
                rd.line = at;
                rd.fail("trailing characters after the value of " + key);
            }
        }
        // section headers must end their line too
        while (rd.pos < text.size() && (text[rd.pos] == ' ' || text[rd.pos] == '\t' || text[rd.pos] == '\r')) ++rd.pos;
        if (rd.pos < text.size() && text[rd.pos] != '\n' && text[rd.pos] != '#') rd.fail("trailing characters");
    }
    return out;
}

SewingConfig config_from_toml(const std::string& text)
{
    nlohmann::json t = parse_toml(text);
    auto get = [&](const std::string& k) -> const nlohmann::json* {
        if (t.contains(k)) return &t[k];
        if (t.contains("sewing." + k)) return &t["sewing." + k];
        return nullptr;
    };
    for (auto& [k, v] : t.items()) {
        std::string base = k.rfind("sewing.", 0) == 0 ? k.substr(7) : k;
        if (base != "r1" && base != "r2" && base != "epsilon" && base != "x" && base != "y" && base != "name")
            throw Error(ErrorKind::Parse, "unknown key " + k);
    }
    SewingConfig c;
    auto real = [&](const char* k) {
        const nlohmann::json* v = get(k);
        if (!v) throw Error(ErrorKind::Parse, std::string("missing key ") + k);
        GaussQ g = GaussQ::from_json(*v);
        if (g.im != 0) throw Error(ErrorKind::Parse, std::string(k) + " must be real");
        return g.re;
    };
    c.r1 = real("r1");
    c.r2 = real("r2");
    const nlohmann::json* e = get("epsilon");
    if (!e) throw Error(ErrorKind::Parse, "missing key epsilon");
    c.eps = GaussQ::from_json(*e);
    for (const char* k : {"x", "y"}) {
        const nlohmann::json* v = get(k);
        if (!v) continue;
        if (!v->is_array()) throw Error(ErrorKind::Parse, std::string(k) + " must be an array of points");
        for (auto& p : *v) (k[0] == 'x' ? c.x : c.y).push_back(GaussQ::from_json(p));
    }
    return c;
}

SewingConfig load_sewing_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return config_from_toml(ss.str());
}

}  // namespace vcoh
