#ifndef RCMC_CHOLESKY_HPP
#define RCMC_CHOLESKY_HPP

#include "rcmc/errors.hpp"
#include "rcmc/numdef.hpp"

#include <utility>
#include <vector>

namespace rcmc {

// Incremental Cholesky factor of -K_SS with respect to the pi-norm:
// C_SS (C_SS)* = -K_SS with (.)* = (.)^T Pi_S^{-1}. Columns are appended in
// contraction order; column k is zero on S^(k-1) and carries
// -sqrt(pi_j / |D_jj|) D^{(k-1)}_{T^{(k-1)} j} on the transient rows. The
// pivot order is dictated by the contraction and never revised.
//
// Sign pattern (exact, not a tolerance): diagonals > 0, off-diagonals <= 0.
class PiCholeskyFactor {
  public:
    struct Entry {
        Index row; // state index
        Real val;
    };

  private:
    std::vector<std::vector<Entry>> m_cols; // off-diagonal part of column k
    std::vector<Real> m_diag;               // diagonal of column k
    std::vector<Index> m_pivots;            // j^(1), ..., j^(k)
    std::vector<Index> m_pos;               // state -> pivot position, -1 if none
    Vector m_pi;

  public:
    explicit PiCholeskyFactor(Vector pi);

    Index n_states() const { return m_pi.size(); }

    Index size() const { return static_cast<Index>(m_pivots.size()); }

    const std::vector<Index> &pivot_order() const { return m_pivots; }

    Index position(const Index state) const { return m_pos[static_cast<size_t>(state)]; }

    Real diag(const Index k) const { return m_diag[static_cast<size_t>(k)]; }

    const std::vector<Entry> &off_column(const Index k) const {
        return m_cols[static_cast<size_t>(k)];
    }

    const Vector &pi() const { return m_pi; }

    // Appends the column for pivot j from the current Schur complement
    // column D_{T^(k-1) j} (off-diagonal part, state-indexed) and D_jj.
    // Throws PivotBreakdown when |D_jj| <= pivot_floor.
    void append(const std::vector<std::pair<Index, Real>> &d_col_j, Real d_jj,
                Index j, Real pivot_floor);

    // Solves K_SS x = b through -C_SS (C_SS)*. b and x are compact vectors in
    // pivot order.
    Vector solve(const Vector &b) const;

    // Dense C_SS in pivot order (test support).
    Matrix dense_css() const;
};

} // namespace rcmc

#endif
