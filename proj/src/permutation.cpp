#include "vcoh/permutation.hpp"
#include "vcoh/rational.hpp"

#include <algorithm>
#include <numeric>

namespace vcoh {

Permutation::Permutation(std::vector<int> v) : img(std::move(v))
{
    std::vector<int> s = img;
    std::sort(s.begin(), s.end());
    for (int i = 0; i < static_cast<int>(s.size()); ++i)
        if (s[i] != i) throw Error(ErrorKind::InvalidInput, "not a permutation: " + str());
}

Permutation Permutation::identity(int n)
{
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return Permutation(v);
}

Permutation Permutation::from_one_based(const std::vector<int>& v)
{
    std::vector<int> w(v.size());
    for (size_t i = 0; i < v.size(); ++i) w[i] = v[i] - 1;
    return Permutation(w);
}

int Permutation::sign() const
{
    int s = 1;
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j)
            if (img[i] > img[j]) s = -s;
    return s;
}

int Permutation::descents() const
{
    int d = 0;
    for (int i = 0; i + 1 < size(); ++i)
        if (img[i] > img[i + 1]) ++d;
    return d;
}

Permutation Permutation::inverse() const
{
    std::vector<int> v(img.size());
    for (int i = 0; i < size(); ++i) v[img[i]] = i;
    return Permutation(v);
}

Permutation Permutation::operator*(const Permutation& b) const
{
    std::vector<int> v(img.size());
    for (int i = 0; i < size(); ++i) v[i] = img[b.img[i]];
    return Permutation(v);
}

std::string Permutation::str() const
{
    std::string s = "(";
    for (size_t i = 0; i < img.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(img[i] + 1);
    }
    return s + ")";
}

std::vector<Permutation> all_permutations(int n)
{
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    std::vector<Permutation> out;
    do {
        out.emplace_back(v);
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
}

std::vector<Permutation> shuffles(int l, int s)
{
    std::vector<Permutation> out;
    for (auto& p : all_permutations(l)) {
        bool ok = true;
        for (int i = 0; i + 1 < s && ok; ++i) ok = p(i) < p(i + 1);
        for (int i = s; i + 1 < l && ok; ++i) ok = p(i) < p(i + 1);
        if (ok) out.push_back(p);
    }
    return out;
}

}  // namespace vcoh
