#ifndef VCOH_PERMUTATION_HPP
#define VCOH_PERMUTATION_HPP

#include <string>
#include <vector>

namespace vcoh {

// sigma(i) = img[i], zero based
struct Permutation {
    std::vector<int> img;

    Permutation() = default;
    explicit Permutation(std::vector<int> v);
    static Permutation identity(int n);
    // one-line notation with one-based entries, e.g. {3,1,2}
    static Permutation from_one_based(const std::vector<int>& v);

    int size() const { return static_cast<int>(img.size()); }
    int operator()(int i) const { return img[i]; }
    int sign() const;
    int descents() const;
    Permutation inverse() const;
    // (a*b)(i) = a(b(i))
    Permutation operator*(const Permutation& b) const;
    bool operator==(const Permutation& o) const { return img == o.img; }
    bool operator<(const Permutation& o) const { return img < o.img; }
    std::string str() const;
};

std::vector<Permutation> all_permutations(int n);
// sigma with sigma(1)<...<sigma(s) and sigma(s+1)<...<sigma(l)
std::vector<Permutation> shuffles(int l, int s);

}  // namespace vcoh

#endif
