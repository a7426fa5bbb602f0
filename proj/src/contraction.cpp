#include "rcmc/contraction.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace rcmc {

ContractionState::ContractionState(const RateMatrix &rm, Tolerances tol)
    : m_rm(&rm), m_tol(std::move(tol)), m_chol(rm.pi()) {
    m_tol.check();
    const Index n = rm.n();
    const SparseMatrix &K = rm.K();
    const Vector &pi = rm.pi();

    // Q = -D Pi_T starts as the graph Laplacian -K Pi, symmetrized from the
    // stored off-diagonal pairs.
    m_qcols.assign(static_cast<size_t>(n), {});
    m_qdiag = Vector::Zero(n);
    m_active.assign(static_cast<size_t>(n), 1);
    for (Index j = 0; j < K.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(K, j); it; ++it) {
            const Index i = it.row();
            if (i <= j) continue;
            const Real q = -0.5 * (it.value() * pi(j) + K.coeff(j, i) * pi(i));
            if (q == 0) continue;
            m_qcols[static_cast<size_t>(j)].push_back({i, q});
            m_qcols[static_cast<size_t>(i)].push_back({j, q});
        }
    }
    for (Index j = 0; j < n; ++j) {
        auto &col = m_qcols[static_cast<size_t>(j)];
        std::sort(col.begin(), col.end(),
                  [](const QEntry &a, const QEntry &b) { return a.row < b.row; });
        Real s = 0;
        for (const QEntry &e : col) s -= e.val;
        m_qdiag(j) = s;
    }
}

void ContractionState::enable_m_factor(const std::vector<Index> &pivot_plan) {
    if (k() != 0) {
        throw std::logic_error("M factor must be enabled before the first step");
    }
    m_mfac = std::make_unique<MCholeskyFactor>(m_rm->pi(), pivot_plan);
}

std::vector<Index> ContractionState::transient() const {
    std::vector<Index> t;
    t.reserve(static_cast<size_t>(n() - k()));
    for (Index j = 0; j < n(); ++j) {
        if (m_active[static_cast<size_t>(j)]) t.push_back(j);
    }
    return t;
}

std::optional<Index> ContractionState::select_steady() const {
    Index best = -1;
    Real best_val = 0;
    for (Index j = 0; j < n(); ++j) {
        if (!m_active[static_cast<size_t>(j)]) continue;
        const Real v = m_qdiag(j) / m_rm->pi()(j); // |D_jj|
        if (v > best_val) {
            best_val = v;
            best = j;
        }
    }
    if (best < 0 || best_val <= m_tol.pivot_floor) return std::nullopt;
    return best;
}

std::vector<std::pair<Index, Real>> ContractionState::d_column(const Index j) const {
    assert(m_active[static_cast<size_t>(j)]);
    const Real inv_pi_j = 1.0 / m_rm->pi()(j);
    std::vector<std::pair<Index, Real>> col;
    col.reserve(m_qcols[static_cast<size_t>(j)].size());
    for (const QEntry &e : m_qcols[static_cast<size_t>(j)]) {
        col.emplace_back(e.row, -e.val * inv_pi_j);
    }
    return col;
}

Real ContractionState::marginal_logdet_gain(const Index j) const {
    assert(m_active[static_cast<size_t>(j)]);
    const Real qjj = m_qdiag(j);
    if (!(qjj > 0)) {
        throw std::domain_error("marginal gain undefined for a zero diagonal");
    }
    return std::log(qjj) - std::log(m_rm->pi()(j));
}

void ContractionState::schur_step(const Index j) {
    assert(j >= 0 && j < n());
    if (!m_active[static_cast<size_t>(j)]) {
        throw std::invalid_argument("state already contracted");
    }
    const Real pi_j = m_rm->pi()(j);
    const Real qjj = m_qdiag(j);
    const Real d_jj = -qjj / pi_j;
    if (!(std::abs(d_jj) > m_tol.pivot_floor)) {
        throw PivotBreakdown("pivot " + std::to_string(j) +
                             " is numerically zero");
    }

    // Snapshot of the pivot column; the factor columns and the M update read
    // the same data the Schur update consumes.
    const std::vector<QEntry> pivot_col = m_qcols[static_cast<size_t>(j)];
    std::vector<std::pair<Index, Real>> d_col;
    d_col.reserve(pivot_col.size());
    const Real inv_pi_j = 1.0 / pi_j;
    for (const QEntry &e : pivot_col) d_col.emplace_back(e.row, -e.val * inv_pi_j);

    m_chol.append(d_col, d_jj, j, m_tol.pivot_floor);
    if (m_mfac) m_mfac->rank_one_step(d_col, d_jj, j);

    // Rank-one Schur update on Q: Q'_il = Q_il - Q_ij (Q_jl / Q_jj) for
    // i, l in T' = T \ {j}. Factors Q_jl / Q_jj lie in [-1, 0], so the update
    // terms never overflow past |Q_ij| and only like-signed magnitudes
    // accumulate in the off-diagonals.
    for (const QEntry &piv : pivot_col) {
        const Index l = piv.row;
        const Real f = piv.val / qjj;
        assert(f <= 0 && f >= -1.0000000000000002);
        auto &col = m_qcols[static_cast<size_t>(l)];
        m_scratch.clear();
        m_scratch.reserve(col.size() + pivot_col.size());
        auto a = col.begin();
        auto b = pivot_col.begin();
        Real col_max = 0;
        const auto push = [&](Index row, Real val) {
            assert(val <= 0);
            if (val == 0) return;
            m_scratch.push_back({row, val});
            col_max = std::max(col_max, -val);
        };
        while (a != col.end() || b != pivot_col.end()) {
            if (b == pivot_col.end() || (a != col.end() && a->row < b->row)) {
                if (a->row != j) push(a->row, a->val);
                ++a;
            } else if (a == col.end() || b->row < a->row) {
                if (b->row != l && b->row != j) push(b->row, -f * b->val);
                ++b;
            } else {
                if (a->row != j && a->row != l) push(a->row, a->val - f * b->val);
                ++a;
                ++b;
            }
        }
        // Drop explicit zeros relative to the column max, then recompute the
        // diagonal from the surviving off-diagonals (stable diagonal rule).
        const Real floor = m_tol.truncation_ratio * col_max;
        Real s = 0;
        size_t out = 0;
        for (const QEntry &e : m_scratch) {
            if (-e.val < floor) continue;
            m_scratch[out++] = e;
            s -= e.val;
        }
        m_scratch.resize(out);
        col.assign(m_scratch.begin(), m_scratch.end());
        m_qdiag(l) = s;
    }

    m_qcols[static_cast<size_t>(j)].clear();
    m_qcols[static_cast<size_t>(j)].shrink_to_fit();
    m_qdiag(j) = 0;
    m_active[static_cast<size_t>(j)] = 0;
    m_pivots.push_back(j);

    if (++m_steps_since_compact >= 64) compact();
}

void ContractionState::compact() {
    m_steps_since_compact = 0;
    for (auto &col : m_qcols) {
        if (col.capacity() > 2 * col.size() + 8) col.shrink_to_fit();
    }
    m_scratch.shrink_to_fit();
}

Vector ContractionState::apply_d(const Vector &x) const {
    const std::vector<Index> t = transient();
    const Index m = static_cast<Index>(t.size());
    assert(x.size() == m);
    std::vector<Index> slot(static_cast<size_t>(n()), -1);
    for (Index c = 0; c < m; ++c) slot[static_cast<size_t>(t[static_cast<size_t>(c)])] = c;

    Vector y = Vector::Zero(m);
    for (Index c = 0; c < m; ++c) {
        const Index l = t[static_cast<size_t>(c)];
        const Real v = x(c) / m_rm->pi()(l);
        if (v == 0) continue;
        y(c) -= m_qdiag(l) * v;
        for (const QEntry &e : m_qcols[static_cast<size_t>(l)]) {
            y(slot[static_cast<size_t>(e.row)]) -= e.val * v;
        }
    }
    return y;
}

Real ContractionState::gershgorin_rho_d() const {
    // Column sums of |D| are exactly 2 |D_ll|; row sums are accumulated from
    // the stored pattern.
    Real max_col = 0;
    Vector row = Vector::Zero(n());
    for (Index l = 0; l < n(); ++l) {
        if (!m_active[static_cast<size_t>(l)]) continue;
        const Real inv_pi_l = 1.0 / m_rm->pi()(l);
        max_col = std::max(max_col, 2 * m_qdiag(l) * inv_pi_l);
        row(l) += m_qdiag(l) * inv_pi_l;
        for (const QEntry &e : m_qcols[static_cast<size_t>(l)]) {
            row(e.row) -= e.val * inv_pi_l;
        }
    }
    Real max_row = 0;
    for (Index i = 0; i < n(); ++i) {
        if (m_active[static_cast<size_t>(i)]) max_row = std::max(max_row, row(i));
    }
    return std::min(max_row, max_col);
}

SparseMatrix ContractionState::d_matrix(std::vector<Index> &t_out) const {
    t_out = transient();
    const Index m = static_cast<Index>(t_out.size());
    std::vector<Index> slot(static_cast<size_t>(n()), -1);
    for (Index c = 0; c < m; ++c) slot[static_cast<size_t>(t_out[static_cast<size_t>(c)])] = c;

    std::vector<Triplet> trips;
    for (Index c = 0; c < m; ++c) {
        const Index l = t_out[static_cast<size_t>(c)];
        const Real inv_pi_l = 1.0 / m_rm->pi()(l);
        if (m_qdiag(l) != 0) trips.emplace_back(c, c, -m_qdiag(l) * inv_pi_l);
        for (const QEntry &e : m_qcols[static_cast<size_t>(l)]) {
            trips.emplace_back(slot[static_cast<size_t>(e.row)], c,
                               -e.val * inv_pi_l);
        }
    }
    SparseMatrix D(m, m);
    D.setFromTriplets(trips.begin(), trips.end());
    D.makeCompressed();
    return D;
}

} // namespace rcmc
