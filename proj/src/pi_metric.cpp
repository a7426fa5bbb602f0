#include "rcmc/pi_metric.hpp"

namespace rcmc {

Matrix adjoint(const Matrix &A, const PiMetric &row_metric,
               const PiMetric &col_metric) {
    return col_metric.pi().asDiagonal() * A.transpose() *
           row_metric.inv_pi().asDiagonal();
}

SparseMatrix adjoint(const SparseMatrix &A, const PiMetric &row_metric,
                     const PiMetric &col_metric) {
    SparseMatrix At = A.transpose();
    return col_metric.pi().asDiagonal() * At *
           row_metric.inv_pi().asDiagonal();
}

} // namespace rcmc
