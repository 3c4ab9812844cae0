#include "vcoh/linalg.hpp"

#include <utility>

namespace vcoh {

Matrix Matrix::identity(int n)
{
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::operator*(const Matrix& o) const
{
    Matrix r(rows, o.cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            const Q& x = (*this)(i, k);
            if (x == 0) continue;
            for (int j = 0; j < o.cols; ++j) r(i, j) += x * o(k, j);
        }
    return r;
}

Matrix Matrix::transpose() const
{
    Matrix r(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) r(j, i) = (*this)(i, j);
    return r;
}

namespace {

// rows scaled to integers, then Bareiss; returns rank and the determinant sign/scale
std::vector<mpz_class> integer_rows(const Matrix& m, std::vector<mpz_class>& scale)
{
    std::vector<mpz_class> z(m.a.size());
    scale.assign(m.rows, 1);
    for (int i = 0; i < m.rows; ++i) {
        mpz_class l = 1;
        for (int j = 0; j < m.cols; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
        scale[i] = l;
        for (int j = 0; j < m.cols; ++j) {
            Q v = m(i, j) * Q(l);
            z[static_cast<size_t>(i) * m.cols + j] = v.get_num();
        }
    }
    return z;
}

int bareiss(std::vector<mpz_class>& z, int rows, int cols, int& swaps)
{
    auto at = [&](int i, int j) -> mpz_class& { return z[static_cast<size_t>(i) * cols + j]; };
    mpz_class prev = 1;
    int r = 0;
    swaps = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (at(i, c) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != r) {
            for (int j = 0; j < cols; ++j) std::swap(at(p, j), at(r, j));
            ++swaps;
        }
        for (int i = r + 1; i < rows; ++i) {
            for (int j = c + 1; j < cols; ++j) {
                mpz_class v = at(r, c) * at(i, j) - at(i, c) * at(r, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                at(i, j) = v;
            }
            at(i, c) = 0;
        }
        prev = at(r, c);
        ++r;
    }
    return r;
}

}  // namespace

int rank(const Matrix& m)
{
    if (m.rows == 0 || m.cols == 0) return 0;
    std::vector<mpz_class> scale;
    auto z = integer_rows(m, scale);
    int swaps;
    return bareiss(z, m.rows, m.cols, swaps);
}

Q determinant(const Matrix& m)
{
    if (m.rows != m.cols) throw Error(ErrorKind::InvalidInput, "determinant of a non-square matrix");
    if (m.rows == 0) return 1;
    std::vector<mpz_class> scale;
    auto z = integer_rows(m, scale);
    int swaps;
    int r = bareiss(z, m.rows, m.cols, swaps);
    if (r < m.rows) return 0;
    Q d(z[static_cast<size_t>(m.rows - 1) * m.cols + m.cols - 1]);
    for (auto& s : scale) d /= Q(s);
    return swaps % 2 ? -d : d;
}

Matrix inverse(const Matrix& m)
{
    if (m.rows != m.cols) throw Error(ErrorKind::InvalidInput, "inverse of a non-square matrix");
    int n = m.rows;
    Matrix a = m, inv = Matrix::identity(n);
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (a(i, c) != 0) {
                p = i;
                break;
            }
        if (p < 0) throw Error(ErrorKind::Singular, "matrix is singular");
        if (p != c)
            for (int j = 0; j < n; ++j) {
                std::swap(a(p, j), a(c, j));
                std::swap(inv(p, j), inv(c, j));
            }
        Q piv = a(c, c);
        for (int j = 0; j < n; ++j) {
            a(c, j) /= piv;
            inv(c, j) /= piv;
        }
        for (int i = 0; i < n; ++i) {
            if (i == c || a(i, c) == 0) continue;
            Q f = a(i, c);
            for (int j = 0; j < n; ++j) {
                a(i, j) -= f * a(c, j);
                inv(i, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

std::vector<std::vector<Q>> nullspace(const Matrix& m)
{
    Matrix a = m;
    std::vector<int> pivcol;
    int r = 0;
    for (int c = 0; c < a.cols && r < a.rows; ++c) {
        int p = -1;
        for (int i = r; i < a.rows; ++i)
            if (a(i, c) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < a.cols; ++j) std::swap(a(p, j), a(r, j));
        Q piv = a(r, c);
        for (int j = 0; j < a.cols; ++j) a(r, j) /= piv;
        for (int i = 0; i < a.rows; ++i) {
            if (i == r || a(i, c) == 0) continue;
            Q f = a(i, c);
            for (int j = 0; j < a.cols; ++j) a(i, j) -= f * a(r, j);
        }
        pivcol.push_back(c);
        ++r;
    }
    std::vector<bool> is_piv(a.cols, false);
    for (int c : pivcol) is_piv[c] = true;
    std::vector<std::vector<Q>> out;
    for (int f = 0; f < a.cols; ++f) {
        if (is_piv[f]) continue;
        std::vector<Q> v(a.cols);
        v[f] = 1;
        for (size_t k = 0; k < pivcol.size(); ++k) v[pivcol[k]] = -a(static_cast<int>(k), f);
        out.push_back(v);
    }
    return out;
}

}  // namespace vcoh
