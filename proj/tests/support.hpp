#ifndef VCOH_TEST_SUPPORT_HPP
#define VCOH_TEST_SUPPORT_HPP

#include "vcoh/ratfunc.hpp"

#include <random>
#include <string>
#include <vector>

namespace testsupport {

using vcoh::Q;
using vcoh::RatFunc;

inline RatFunc rf(int n, const std::string& text)
{
    return RatFunc::from_json(nlohmann::json::parse(text), n);
}

inline Q small_q(std::mt19937_64& g)
{
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    Q q(num(g), den(g));
    q.canonicalize();
    return q;
}

// random canonical-form input with bounded pole orders
inline RatFunc random_ratfunc(std::mt19937_64& g, int n, int max_deg = 2, int max_pole = 2)
{
    std::uniform_int_distribution<int> deg(0, max_deg), pole(0, max_pole), nt(1, 3);
    vcoh::Poly p(n);
    int terms = nt(g);
    for (int t = 0; t < terms; ++t) {
        vcoh::Exps e(n);
        for (auto& x : e) x = deg(g);
        p.add_term(e, small_q(g));
    }
    std::vector<int> axis(n), diff(n * n, 0);
    for (auto& a : axis) a = pole(g) / 2;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) diff[i * n + j] = pole(g);
    return RatFunc::make(p, axis, diff);
}

// points avoiding every pole of the restricted locus
inline std::vector<Q> generic_point(std::mt19937_64& g, int n)
{
    std::vector<Q> pt;
    std::uniform_int_distribution<int> d(1, 97);
    while (static_cast<int>(pt.size()) < n) {
        Q c(d(g), d(g) + 3);
        c.canonicalize();
        bool ok = c != 0;
        for (auto& x : pt) ok = ok && x != c;
        if (ok) pt.push_back(c);
    }
    return pt;
}

}  // namespace testsupport

#endif
