#ifndef RCMC_SPECTRAL_HPP
#define RCMC_SPECTRAL_HPP

#include "rcmc/cholesky.hpp"
#include "rcmc/errors.hpp"
#include "rcmc/numdef.hpp"

#include <functional>

namespace rcmc {

// Gershgorin bound rho-hat(A) = min(max abs row sum, max abs column sum),
// an upper bound on the spectral radius.
Real gershgorin_rho(const SparseMatrix &A);
Real gershgorin_rho(const Matrix &A);

// sigma-hat(K_SS) = 1 / rho-hat(K_SS^{-1}) <= sigma(K_SS), computed from two
// linear solves against K_SS (the M-matrix shortcut: |K_SS^{-1}| = -K_SS^{-1}).
Real gershgorin_sigma_inv(const PiCholeskyFactor &chol);

struct SpectralOptions {
    Real tol = 1e-10;
    int max_iter = 5000;
};

// Largest |eigenvalue| of a self-adjoint operator given as a matvec, computed
// by Lanczos iteration on the symmetrized matrix Pi^{-1/2} A Pi^{1/2}. The
// start vector is the all-ones vector normalized in the pi-norm, so results
// are deterministic. Throws NoConvergence after max_iter matvecs.
Real spectral_radius(const std::function<void(const Vector &, Vector &)> &apply,
                     const Vector &pi_sub, const SpectralOptions &opt = {});

inline Real spectral_radius(const Matrix &A, const Vector &pi_sub,
                            const SpectralOptions &opt = {}) {
    return spectral_radius(
        [&A](const Vector &x, Vector &out) { out.noalias() = A * x; }, pi_sub,
        opt);
}

} // namespace rcmc

#endif
