#ifndef RCMC_CONTRACTION_HPP
#define RCMC_CONTRACTION_HPP

#include "rcmc/cholesky.hpp"
#include "rcmc/m_factor.hpp"
#include "rcmc/rate_matrix.hpp"
#include "rcmc/tolerances.hpp"

#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace rcmc {

// Evolving state of the contraction: the steady set S, the Schur complement
// D = K_TT - K_TS K_SS^{-1} K_ST on the transient set T, the incremental
// Cholesky factor of -K_SS and, for Type B runs, the factor of M.
//
// D is held as the symmetric Laplacian Q = -D Pi_T, so detailed balance is
// exact in stored form and 1^T D = 0 holds exactly because diagonals are
// recomputed from off-diagonal column sums after every step. Off-diagonal
// updates only ever add like-signed quantities.
class ContractionState {
  private:
    struct QEntry {
        Index row;
        Real val; // <= 0 off the diagonal
    };

    const RateMatrix *m_rm;
    Tolerances m_tol;
    std::vector<std::vector<QEntry>> m_qcols; // off-diagonal part, sorted rows
    Vector m_qdiag;                           // Q_jj = sum of |off-diagonals|
    std::vector<char> m_active;               // 1 while in T
    std::vector<Index> m_pivots;              // S in contraction order
    PiCholeskyFactor m_chol;
    std::unique_ptr<MCholeskyFactor> m_mfac;
    std::vector<QEntry> m_scratch;
    int m_steps_since_compact = 0;

    void compact();

  public:
    explicit ContractionState(const RateMatrix &rm, Tolerances tol = {});

    // Enables Type B bookkeeping. The plan must list every pivot that will be
    // contracted, in order (Appendix-F-style row ordering of the M factor);
    // callable only before the first step.
    void enable_m_factor(const std::vector<Index> &pivot_plan);

    const RateMatrix &rate_matrix() const { return *m_rm; }

    const Tolerances &tol() const { return m_tol; }

    Index n() const { return m_rm->n(); }

    Index k() const { return static_cast<Index>(m_pivots.size()); }

    bool in_steady(const Index j) const { return !m_active[static_cast<size_t>(j)]; }

    const std::vector<Index> &pivot_order() const { return m_pivots; }

    std::vector<Index> transient() const; // T in ascending state order

    // Index of the largest |D_jj| over T (ties to the smaller index), or
    // nullopt when every diagonal is at or below the pivot floor.
    std::optional<Index> select_steady() const;

    // One contraction step: extends the Cholesky factor, updates the M factor
    // when present, applies the rank-one Schur update with stable diagonal
    // recomputation, and moves j from T to S.
    void schur_step(Index j);

    // ln |D_jj|, the marginal log-determinant gain of adding j to S.
    Real marginal_logdet_gain(Index j) const;

    Real d_diag(const Index j) const {
        return -m_qdiag(j) / m_rm->pi()(j);
    }

    // Off-diagonal column D_{T \ {j}, j}, state-indexed, ascending.
    std::vector<std::pair<Index, Real>> d_column(Index j) const;

    // y = D x over T in ascending-state compact coordinates.
    Vector apply_d(const Vector &x) const;

    // Gershgorin bound on rho(D).
    Real gershgorin_rho_d() const;

    const PiCholeskyFactor &chol_k() const { return m_chol; }

    MCholeskyFactor *chol_m() { return m_mfac.get(); }

    const MCholeskyFactor *chol_m() const { return m_mfac.get(); }

    // D as a sparse matrix over T in ascending state order (test support);
    // t_out receives the state indices of the compact coordinates.
    SparseMatrix d_matrix(std::vector<Index> &t_out) const;
};

} // namespace rcmc

#endif
