#ifndef RCMC_ANALYSIS_HPP
#define RCMC_ANALYSIS_HPP

#include "rcmc/propagator.hpp"
#include "rcmc/rate_matrix.hpp"

#include <memory>
#include <vector>

namespace rcmc {

struct EigenbasisExt; // extended-precision payload, analysis.cpp only

// pi-orthonormal eigendecomposition of K: lambdas sorted 0 = l_1 >= ... >= l_n
// with u_1 = pi. When precision_digits > 17 the decomposition is carried out
// in software floats of that many decimal digits and kept alongside the
// double-rounded copy for exact_solution.
struct Eigenbasis {
    Vector lambdas;
    Matrix U; // columns are the eigenvectors
    Vector pi;
    int precision_digits = 17;
    std::shared_ptr<const EigenbasisExt> ext;
};

Eigenbasis dense_eigendecompose(const RateMatrix &rm, int precision_digits = 17,
                                Index dense_limit = 512,
                                std::vector<std::string> *warnings = nullptr);

// x(t) = exp(tK) p = sum_k exp(t l_k) <u_k, p> u_k. Accepts t = +inf.
Vector exact_solution(const Eigenbasis &eb, const Vector &p, Real t);

// Spectral inputs of the error bounds for a fixed bipartition {S, T}.
struct DSpectra {
    Real sigma_kss = 0; // smallest |eigenvalue| of K_SS
    Real rho_d = 0;     // largest |eigenvalue| of the Schur complement D
    Real offmax = 0;    // max off-diagonal of Pi^{-1} K
};

Real max_offdiag_pi_inv(const RateMatrix &rm);

// Theorem bound on Err_{S,t}(p): min(sum_k (|<u_k,p>|/||p||) min(1, a_k, b_k), 1)
// with a_k = rho(D)/|l_k| + e^{t l_k} (taken +inf at l_k = 0) and b_k the
// variant-specific term.
Real error_bound(const Eigenbasis &eb, const DSpectra &sp, Real t,
                 const Vector &p, Variant variant);

// Bound on the expectation over uniformly random vertex initial values:
// min(sqrt(mean_k min(1, a_k, b_k)^2), 1).
Real expected_error_bound(const Eigenbasis &eb, const DSpectra &sp, Real t,
                          Variant variant);

// t* = ln 2 / sqrt(a b) with a = rho(D), b = sigma(K_SS).
Real optimal_time(Real a, Real b);

// f(t) = max_{l<0} min(-a/l + e^{tl}, -l/b + 1 - e^{tl}), evaluated through
// bisection on the unique crossing of the two curves.
Real optimal_time_objective(Real a, Real b, Real t);

Real pi_error(const Vector &q, const Vector &x, const PiMetric &m,
              Real p_norm);

Real linf_error(const Vector &q, const Vector &x);

// Faithful dense transcription of the original RCMC procedure, used as an
// equivalence oracle. Selection can be forced to a given pivot sequence so
// both formulations contract identical states.
Trajectory original_rcmc(const RateMatrix &rm, const Vector &p, Real t_max,
                         const std::vector<Index> *forced_pivots = nullptr,
                         Index dense_limit = 200);

// Per-snapshot error records against the exact solution.
struct ErrorRecord {
    Index k = 0;
    Real t = 0;
    Real pi_err = 0;     // after projection (the reported error)
    Real pi_err_pre = 0; // before projection
    Real linf_err = 0;
    Real bound_a = 0;
    Real bound_b = 0;
    Real expected_bound = 0;
    bool precision_limited = false; // bound below the double-precision floor
};

struct ErrorReport {
    std::vector<ErrorRecord> records;
    std::vector<std::string> warnings;
};

// Runs the contraction with the given variant/time method and evaluates
// actual errors and both bounds at every snapshot. Snapshot evaluation is
// parallelized over up to max_threads workers.
ErrorReport error_report(const RateMatrix &rm, const Vector &p,
                         Variant variant, TimeMethod method, Real t_max,
                         int precision_digits = 17, int max_threads = 1,
                         const Tolerances &tol = {});

} // namespace rcmc

#endif
