#include <abelkit/linalg.hpp>

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace abelkit
{

rref_result rref(rat_matrix m)
{
    rref_result res;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t piv = row;
        while (piv < m.rows() && m(piv, col) == 0) {
            ++piv;
        }
        if (piv == m.rows()) {
            continue;
        }
        if (piv != row) {
            for (std::size_t c = 0; c < m.cols(); ++c) {
                std::swap(m(piv, c), m(row, c));
            }
        }
        const rational inv = 1 / m(row, col);
        for (std::size_t c = col; c < m.cols(); ++c) {
            m(row, c) *= inv;
        }
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col) == 0) {
                continue;
            }
            const rational f = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c) {
                m(r, c) -= f * m(row, c);
            }
        }
        res.pivots.push_back(col);
        ++row;
    }
    res.reduced = std::move(m);
    return res;
}

std::size_t rank(const rat_matrix &m)
{
    return rref(m).pivots.size();
}

std::vector<std::vector<rational>> nullspace(const rat_matrix &a)
{
    const auto r = rref(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (const auto p : r.pivots) {
        is_pivot[p] = true;
    }
    std::vector<std::vector<rational>> basis;
    for (std::size_t free = 0; free < a.cols(); ++free) {
        if (is_pivot[free]) {
            continue;
        }
        std::vector<rational> v(a.cols());
        v[free] = 1;
        for (std::size_t i = 0; i < r.pivots.size(); ++i) {
            v[r.pivots[i]] = -r.reduced(i, free);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<rational>> solve(const rat_matrix &a, const std::vector<rational> &b,
                                           std::vector<std::size_t> *free_columns)
{
    if (b.size() != a.rows()) {
        throw std::invalid_argument("solve: right-hand side size mismatch");
    }
    rat_matrix aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            aug(r, c) = a(r, c);
        }
        aug(r, a.cols()) = b[r];
    }
    const auto red = rref(std::move(aug));
    if (!red.pivots.empty() && red.pivots.back() == a.cols()) {
        return std::nullopt;
    }
    std::vector<rational> x(a.cols());
    for (std::size_t i = 0; i < red.pivots.size(); ++i) {
        x[red.pivots[i]] = red.reduced(i, a.cols());
    }
    if (free_columns != nullptr) {
        free_columns->clear();
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (std::find(red.pivots.begin(), red.pivots.end(), c) == red.pivots.end()) {
                free_columns->push_back(c);
            }
        }
    }
    return x;
}

} // namespace abelkit
