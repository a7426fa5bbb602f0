#ifndef RCMC_RATE_MATRIX_HPP
#define RCMC_RATE_MATRIX_HPP

#include "rcmc/errors.hpp"
#include "rcmc/numdef.hpp"
#include "rcmc/pi_metric.hpp"
#include "rcmc/tolerances.hpp"

#include <string>
#include <vector>

namespace rcmc {

// Axioms of a rate constant matrix:
//   RCM1  off-diagonals nonnegative
//   RCM2  zero column sums
//   RCM3  detailed balance K_ij pi_j = K_ji pi_i
// plus pi in the interior of the simplex.
enum class Axiom {
    NegativeOffDiagonal,
    ColumnSumViolation,
    DetailedBalanceViolation,
    NonPositivePi,
};

std::string axiom_name(Axiom a);

struct Violation {
    Axiom axiom;
    Index i = -1;
    Index j = -1;
    Real magnitude = 0; // worst offending residual
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::string format() const;
};

struct ValidationError : RcmcError {
    ValidationReport report;
    explicit ValidationError(ValidationReport r)
        : RcmcError(r.format()), report(std::move(r)) {}
};

// A validated rate constant matrix together with its stationary distribution.
// Diagonals of K are recomputed as negated off-diagonal column sums on
// construction, so RCM2 holds exactly in stored form. Immutable afterwards.
class RateMatrix {
  private:
    SparseMatrix m_K;
    Vector m_pi;

    RateMatrix(SparseMatrix K, Vector pi)
        : m_K(std::move(K)), m_pi(std::move(pi)) {}

    friend RateMatrix validate(const SparseMatrix &, const Vector &,
                               const Tolerances &);

  public:
    Index n() const { return m_K.rows(); }

    const SparseMatrix &K() const { return m_K; }

    const Vector &pi() const { return m_pi; }

    PiMetric metric() const { return PiMetric(m_pi); }

    // Connected components of the support graph; entry i is the component id
    // of state i, ids are 0..num_components-1 in order of first appearance.
    std::vector<int> components() const;
};

// Checks RCM1-RCM3 and the simplex condition on pi. Returns the validated
// matrix with recomputed diagonals, or throws ValidationError listing every
// violated axiom with the worst offending index pair.
RateMatrix validate(const SparseMatrix &K, const Vector &pi,
                    const Tolerances &tol = Tolerances{});

// Same checks without throwing; the report lists all violations found.
ValidationReport validate_report(const SparseMatrix &K, const Vector &pi,
                                 const Tolerances &tol = Tolerances{});

// Recovers pi from K via detailed balance propagated along a spanning tree,
// verified on every non-tree edge. Works in log space to survive entries
// spanning hundreds of orders of magnitude.
Vector stationary_from_balance(const SparseMatrix &K,
                               const Tolerances &tol = Tolerances{});

} // namespace rcmc

#endif
