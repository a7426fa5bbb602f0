#ifndef RCMC_TESTS_ORACLES_HPP
#define RCMC_TESTS_ORACLES_HPP

#include "rcmc/propagator.hpp"
#include "rcmc/rate_matrix.hpp"
#include "rcmc/simplex.hpp"

#include <cstdint>
#include <random>
#include <vector>

// Independent dense reference implementations used to freeze expected values.
// Everything here goes through Eigen dense factorizations and never touches
// the sparse production code paths it checks.
namespace rcmc::oracle {

// Dense Schur complement K_TT - K_TS K_SS^{-1} K_ST over the complement of s,
// rows/cols in ascending state order; t_out receives the state indices.
Matrix dense_schur(const Matrix &K, const std::vector<Index> &s,
                   std::vector<Index> &t_out);

// Dense assembly of the approximation matrix V for a bipartition {S, T}.
Matrix dense_v(const Matrix &K, const Vector &pi, const std::vector<Index> &s,
               Variant variant);

// Dense M = I_T + K_TS K_SS^{-2} K_ST (ascending T order).
Matrix dense_m(const Matrix &K, const Vector &pi, const std::vector<Index> &s);

// Dense Omega = (-K_TS K_SS^{-1} | I_T) with columns in original order.
Matrix dense_omega(const Matrix &K, const std::vector<Index> &s);

// Eigenvalues of a pi-self-adjoint matrix via the symmetrized form.
Vector dense_eigenvalues(const Matrix &A, const Vector &pi_sub);

Real dense_spectral_radius(const Matrix &A, const Vector &pi_sub);

// Smallest |eigenvalue|.
Real dense_sigma(const Matrix &A, const Vector &pi_sub);

// exp(tK) p through the dense symmetric eigendecomposition.
Vector dense_expm_apply(const Matrix &K, const Vector &pi, const Vector &p,
                        Real t);

// Exhaustive active-set KKT solver for the pi-norm simplex projection,
// every support set enumerated; n <= ~20.
Vector brute_force_projection(const Vector &w, const Vector &pi);

// Deterministic RNG helpers.
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    Real uniform() { return static_cast<Real>(gen() >> 11) * 0x1.0p-53; }
    Real uniform(Real lo, Real hi) { return lo + (hi - lo) * uniform(); }
    Index uniform_int(Index bound) {
        return static_cast<Index>(gen() % static_cast<std::uint64_t>(bound));
    }
};

// Random connected rate constant matrix built from a random Laplacian and a
// random interior pi. log_range controls the spread of edge weights (decades).
RateMatrix random_rate_matrix(std::uint64_t seed, Index n, Real density = 0.5,
                              Real log_range = 2.0, Real pi_log_range = 2.0);

// Random subset of size k avoiding the full set.
std::vector<Index> random_subset(Rng &rng, Index n, Index k);

} // namespace rcmc::oracle

#endif
