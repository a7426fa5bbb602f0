#ifndef RCMC_PI_METRIC_HPP
#define RCMC_PI_METRIC_HPP

#include "rcmc/numdef.hpp"

#include <cmath>
#include <stdexcept>

namespace rcmc {

// Diagonal metric <a, b> = a^T diag(pi)^{-1} b on R^n. The weights must be
// positive but need not sum to one (the projection accepts any scale).
class PiMetric {
  private:
    Vector m_pi;
    Vector m_inv_pi;

  public:
    explicit PiMetric(Vector pi) : m_pi(std::move(pi)) {
        if ((m_pi.array() <= 0).any()) {
            throw std::invalid_argument("PiMetric weights must be positive");
        }
        m_inv_pi = m_pi.cwiseInverse();
    }

    Index size() const { return m_pi.size(); }

    const Vector &pi() const { return m_pi; }

    const Vector &inv_pi() const { return m_inv_pi; }

    Real pi(const Index i) const { return m_pi(i); }

    Real inv_pi(const Index i) const { return m_inv_pi(i); }

    PiMetric restricted(const std::vector<Index> &idx) const {
        Vector sub(static_cast<Index>(idx.size()));
        for (Index k = 0; k < sub.size(); ++k) sub(k) = m_pi(idx[k]);
        return PiMetric(std::move(sub));
    }
};

inline Real pi_inner(const Vector &a, const Vector &b, const PiMetric &m) {
    return (a.array() * b.array() * m.inv_pi().array()).sum();
}

inline Real pi_norm(const Vector &a, const PiMetric &m) {
    return std::sqrt(pi_inner(a, a, m));
}

// Adjoint of A : R^J -> R^I, explicitly Pi_J A^T Pi_I^{-1}.
Matrix adjoint(const Matrix &A, const PiMetric &row_metric,
               const PiMetric &col_metric);
SparseMatrix adjoint(const SparseMatrix &A, const PiMetric &row_metric,
                     const PiMetric &col_metric);

inline Matrix adjoint(const Matrix &A, const PiMetric &m) {
    return adjoint(A, m, m);
}

inline SparseMatrix adjoint(const SparseMatrix &A, const PiMetric &m) {
    return adjoint(A, m, m);
}

} // namespace rcmc

#endif
