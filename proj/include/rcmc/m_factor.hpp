#ifndef RCMC_M_FACTOR_HPP
#define RCMC_M_FACTOR_HPP

#include "rcmc/errors.hpp"
#include "rcmc/numdef.hpp"

#include <utility>
#include <vector>

namespace rcmc {

// Dense lower-triangular factor G of M = I_T + K_TS K_SS^{-2} K_ST in the
// pi_T-metric: G G* = M with G* = G^T Pi_T^{-1}. Equivalently G G^T is the
// plain Cholesky factorization of the symmetric matrix M Pi_T, which is what
// the rank-one machinery below works on.
//
// Rows are ordered by the full pivot plan j^(1), j^(2), ..., followed by the
// never-contracted states; the plan must therefore be known before the first
// step. Advancing a step drops the leading row and column and applies a
// Givens-based rank-one update, which cannot lose definiteness for a genuine
// update; a breakdown (non-finite or nonpositive diagonal) signals
// ill-conditioned inputs and the caller refactorizes from scratch.
class MCholeskyFactor {
  private:
    std::vector<Real> m_g; // column-major n x n, lower triangle of G
    std::vector<Index> m_order; // row slot -> state
    std::vector<Index> m_slot;  // state -> row slot
    Vector m_pi;
    Index m_n = 0;
    Index m_offset = 0; // current k; active block starts here

    Real &g(Index i, Index j) { return m_g[static_cast<size_t>(j * m_n + i)]; }
    Real g(Index i, Index j) const {
        return m_g[static_cast<size_t>(j * m_n + i)];
    }

  public:
    // G^(0) = Pi^{1/2} with rows in plan order (plan is the pivot sequence;
    // states missing from it are appended in ascending order).
    MCholeskyFactor(const Vector &pi, const std::vector<Index> &pivot_plan);

    Index offset() const { return m_offset; }

    Index active_size() const { return m_n - m_offset; }

    const std::vector<Index> &row_order() const { return m_order; }

    // Slot of a state within the active block, in [0, active_size).
    Index active_slot(const Index state) const {
        return m_slot[static_cast<size_t>(state)] - m_offset;
    }

    Index state_of_active_slot(const Index s) const {
        return m_order[static_cast<size_t>(s + m_offset)];
    }

    // Advances from M^(k-1) to M^(k) when state j (= next planned pivot) is
    // contracted: v = G_{T1} - (G_{j1}/D_jj) D_{Tj}, then the factor of
    // G_{TJ} G_{TJ}* + v v*. d_col_j is the off-diagonal Schur column over
    // T^(k), state-indexed.
    void rank_one_step(const std::vector<std::pair<Index, Real>> &d_col_j,
                       Real d_jj, Index j);

    // Rebuilds the active block from the dense symmetric matrix M Pi_T given
    // in active-slot coordinates (fallback after UpdateBreakdown).
    void refactorize(const Matrix &m_pi_t);

    // Solves M z = w over the active block; w and z use active slots.
    Vector solve(const Vector &w) const;

    // Dense G over the active block (test support).
    Matrix dense_g() const;
};

} // namespace rcmc

#endif
