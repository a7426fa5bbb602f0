#include "rcmc/cholesky.hpp"

#include <cassert>
#include <cmath>

namespace rcmc {

PiCholeskyFactor::PiCholeskyFactor(Vector pi) : m_pi(std::move(pi)) {
    m_pos.assign(static_cast<size_t>(m_pi.size()), Index{-1});
}

void PiCholeskyFactor::append(const std::vector<std::pair<Index, Real>> &d_col_j,
                              const Real d_jj, const Index j,
                              const Real pivot_floor) {
    if (!(std::abs(d_jj) > pivot_floor)) {
        throw PivotBreakdown("pivot " + std::to_string(j) +
                             " has |D_jj| = " + std::to_string(std::abs(d_jj)) +
                             " at or below the pivot floor");
    }
    assert(m_pos[static_cast<size_t>(j)] < 0);

    const Real scale = std::sqrt(m_pi(j) / std::abs(d_jj));
    std::vector<Entry> col;
    col.reserve(d_col_j.size());
    for (const auto &[row, dv] : d_col_j) {
        assert(row != j && m_pos[static_cast<size_t>(row)] < 0);
        assert(dv >= 0);
        if (dv == 0) continue;
        col.push_back({row, -scale * dv});
    }

    m_cols.push_back(std::move(col));
    m_diag.push_back(-scale * d_jj); // d_jj < 0, so the diagonal is positive
    m_pos[static_cast<size_t>(j)] = size();
    m_pivots.push_back(j);
}

Vector PiCholeskyFactor::solve(const Vector &b) const {
    const Index k = size();
    assert(b.size() == k);

    // K_SS x = b  <=>  C_SS y = -b, then C_SS^T w = y, x = Pi_S w.
    Vector y = -b;
    for (Index c = 0; c < k; ++c) {
        const Real yc = y(c) / m_diag[static_cast<size_t>(c)];
        y(c) = yc;
        if (yc == 0) continue;
        for (const Entry &e : m_cols[static_cast<size_t>(c)]) {
            const Index p = m_pos[static_cast<size_t>(e.row)];
            if (p >= 0) y(p) -= e.val * yc; // rows still transient are skipped
        }
    }
    Vector x(k);
    for (Index c = k - 1; c >= 0; --c) {
        Real s = y(c);
        for (const Entry &e : m_cols[static_cast<size_t>(c)]) {
            const Index p = m_pos[static_cast<size_t>(e.row)];
            if (p >= 0) s -= e.val * x(p);
        }
        x(c) = s / m_diag[static_cast<size_t>(c)];
    }
    for (Index c = 0; c < k; ++c) x(c) *= m_pi(m_pivots[static_cast<size_t>(c)]);
    return x;
}

Matrix PiCholeskyFactor::dense_css() const {
    const Index k = size();
    Matrix C = Matrix::Zero(k, k);
    for (Index c = 0; c < k; ++c) {
        C(c, c) = m_diag[static_cast<size_t>(c)];
        for (const Entry &e : m_cols[static_cast<size_t>(c)]) {
            const Index p = m_pos[static_cast<size_t>(e.row)];
            if (p >= 0) C(p, c) = e.val;
        }
    }
    return C;
}

} // namespace rcmc
