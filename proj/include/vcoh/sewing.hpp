#ifndef VCOH_SEWING_HPP
#define VCOH_SEWING_HPP

#include "vcoh/eproduct.hpp"

#include <string>
#include <vector>

namespace vcoh {

// Gaussian rational re + im i
struct GaussQ {
    Q re = 0, im = 0;

    GaussQ() = default;
    GaussQ(const Q& r, const Q& i = 0) : re(r), im(i)
    {
        re.canonicalize();
        im.canonicalize();
    }
    GaussQ operator+(const GaussQ& o) const { return {re + o.re, im + o.im}; }
    GaussQ operator-(const GaussQ& o) const { return {re - o.re, im - o.im}; }
    GaussQ operator-() const { return {-re, -im}; }
    GaussQ operator*(const GaussQ& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    GaussQ operator/(const GaussQ& o) const;
    bool operator==(const GaussQ& o) const { return re == o.re && im == o.im; }
    bool operator!=(const GaussQ& o) const { return !(*this == o); }
    bool is_zero() const { return re == 0 && im == 0; }
    Q norm2() const { return re * re + im * im; }   // |z|^2
    std::string str() const;
    // "p/q", or a two-element array of such strings
    static GaussQ from_json(const nlohmann::json& j);
};

struct SewingConfig {
    Q r1 = 1, r2 = 1;
    GaussQ eps;
    std::vector<GaussQ> x, y;   // points on the first and second sphere
};

struct SewingReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    nlohmann::json to_json() const;
};

// every domain inequality, with squared moduli
SewingReport validate(const SewingConfig& c);

// zeta_2 = eps / zeta_1
GaussQ pinch(const GaussQ& zeta1, const GaussQ& eps);

// lambda = -xi eps^{1/2} with xi = +-i; eps^{1/2} stays formal (s with s^2 = eps),
// so lambda = c s with c = -xi.  The induced map is z -> -lambda^2 / z.
struct PinchConjugator {
    GaussQ eps;
    GaussQ c;   // lambda = c * eps^{1/2}

    GaussQ lambda_squared() const { return c * c * eps; }
    GaussQ map(const GaussQ& z) const;
};
PinchConjugator mobius_lambda(const GaussQ& eps, int xi_sign);

// pinch maps the annulus of one sphere onto the other, is an involution and agrees
// with the Moebius map for both signs of xi, on sample points of the annuli
SewingReport check_sewing_consistency(const SewingConfig& c);

// pairs (i, j), one-based, with x_i = y_j; throws on repeated points within a sphere
ExclusionList detect_coincident(const SewingConfig& c);

// A small TOML subset: comments, [section] headers, key = value with strings,
// integers, booleans and (nested) arrays.  Keys under a section become
// "section.key".  Anything else is a parse error naming the line.
nlohmann::json parse_toml(const std::string& text);
// keys r1, r2, epsilon, x, y at the top level or under [sewing]
SewingConfig config_from_toml(const std::string& text);
SewingConfig load_sewing_config(const std::string& path);

}  // namespace vcoh

#endif
