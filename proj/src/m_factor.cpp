#include "rcmc/m_factor.hpp"

#include <cassert>
#include <cmath>

namespace rcmc {

MCholeskyFactor::MCholeskyFactor(const Vector &pi,
                                 const std::vector<Index> &pivot_plan)
    : m_pi(pi), m_n(pi.size()) {
    m_slot.assign(static_cast<size_t>(m_n), Index{-1});
    m_order.reserve(static_cast<size_t>(m_n));
    for (const Index j : pivot_plan) {
        assert(m_slot[static_cast<size_t>(j)] < 0);
        m_slot[static_cast<size_t>(j)] = static_cast<Index>(m_order.size());
        m_order.push_back(j);
    }
    for (Index j = 0; j < m_n; ++j) {
        if (m_slot[static_cast<size_t>(j)] < 0) {
            m_slot[static_cast<size_t>(j)] = static_cast<Index>(m_order.size());
            m_order.push_back(j);
        }
    }
    m_g.assign(static_cast<size_t>(m_n) * static_cast<size_t>(m_n), 0.0);
    for (Index i = 0; i < m_n; ++i) {
        g(i, i) = std::sqrt(m_pi(m_order[static_cast<size_t>(i)]));
    }
}

void MCholeskyFactor::rank_one_step(
    const std::vector<std::pair<Index, Real>> &d_col_j, const Real d_jj,
    const Index j) {
    if (m_offset >= m_n || m_order[static_cast<size_t>(m_offset)] != j) {
        throw UpdateBreakdown("contracted state " + std::to_string(j) +
                              " is not the next planned pivot row");
    }

    // v = G_{T1} - (G_{j1}/D_jj) D_{Tj} over the rows below the leading one.
    const Index lead = m_offset;
    const Real gj1 = g(lead, lead);
    Vector v = Vector::Zero(m_n - lead - 1);
    for (Index i = lead + 1; i < m_n; ++i) v(i - lead - 1) = g(i, lead);
    const Real ratio = gj1 / d_jj;
    for (const auto &[state, dv] : d_col_j) {
        const Index s = m_slot[static_cast<size_t>(state)];
        assert(s > lead);
        v(s - lead - 1) -= ratio * dv;
    }

    // Drop the leading row and column, then update with v (Givens rotations
    // against the appended column; pure updates keep the diagonal positive).
    m_offset += 1;
    const Index m = m_n - m_offset;
    for (Index c = 0; c < m; ++c) {
        const Index col = m_offset + c;
        const Real gc = g(col, col);
        const Real wc = v(c);
        if (wc == 0) {
            if (!(gc > 0) || !std::isfinite(gc)) {
                throw UpdateBreakdown("nonpositive diagonal in M factor");
            }
            continue;
        }
        const Real r = std::hypot(gc, wc);
        if (!(r > 0) || !std::isfinite(r)) {
            throw UpdateBreakdown("rank-one update lost definiteness");
        }
        const Real cth = gc / r;
        const Real sth = wc / r;
        g(col, col) = r;
        for (Index i = col + 1; i < m_n; ++i) {
            const Real gi = g(i, col);
            const Real wi = v(i - m_offset);
            g(i, col) = cth * gi + sth * wi;
            v(i - m_offset) = cth * wi - sth * gi;
        }
    }
}

void MCholeskyFactor::refactorize(const Matrix &m_pi_t) {
    const Index m = active_size();
    assert(m_pi_t.rows() == m && m_pi_t.cols() == m);
    Eigen::LLT<Matrix> llt(m_pi_t);
    if (llt.info() != Eigen::Success) {
        throw UpdateBreakdown("refactorization of M failed; matrix is not "
                              "numerically positive definite");
    }
    const Matrix L = llt.matrixL();
    for (Index c = 0; c < m; ++c) {
        for (Index i = c; i < m; ++i) g(m_offset + i, m_offset + c) = L(i, c);
    }
}

Vector MCholeskyFactor::solve(const Vector &w) const {
    const Index m = active_size();
    assert(w.size() == m);

    // M z = w  <=>  G a = w, G^T b = a, z = Pi_T b.
    Vector a = w;
    for (Index c = 0; c < m; ++c) {
        const Index col = m_offset + c;
        const Real ac = a(c) / g(col, col);
        a(c) = ac;
        if (ac == 0) continue;
        for (Index i = col + 1; i < m_n; ++i) {
            a(i - m_offset) -= g(i, col) * ac;
        }
    }
    Vector z(m);
    for (Index c = m - 1; c >= 0; --c) {
        const Index col = m_offset + c;
        Real s = a(c);
        for (Index i = col + 1; i < m_n; ++i) {
            s -= g(i, col) * z(i - m_offset);
        }
        z(c) = s / g(col, col);
    }
    for (Index c = 0; c < m; ++c) {
        z(c) *= m_pi(m_order[static_cast<size_t>(m_offset + c)]);
    }
    return z;
}

Matrix MCholeskyFactor::dense_g() const {
    const Index m = active_size();
    Matrix G = Matrix::Zero(m, m);
    for (Index c = 0; c < m; ++c) {
        for (Index i = c; i < m; ++i) G(i, c) = g(m_offset + i, m_offset + c);
    }
    return G;
}

} // namespace rcmc
