#ifndef VCOH_LINALG_HPP
#define VCOH_LINALG_HPP

#include "vcoh/rational.hpp"

#include <vector>

namespace vcoh {

struct Matrix {
    int rows = 0, cols = 0;
    std::vector<Q> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
    static Matrix identity(int n);
    Q& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Q& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
    Matrix operator*(const Matrix& o) const;
    bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
    Matrix transpose() const;
};

// fraction-free (Bareiss) elimination on an integer-scaled copy
int rank(const Matrix& m);
Q determinant(const Matrix& m);
// throws Singular
Matrix inverse(const Matrix& m);
// basis of {x : m x = 0}, as columns
std::vector<std::vector<Q>> nullspace(const Matrix& m);

}  // namespace vcoh

#endif
