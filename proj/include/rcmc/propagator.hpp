#ifndef RCMC_PROPAGATOR_HPP
#define RCMC_PROPAGATOR_HPP

#include "rcmc/contraction.hpp"
#include "rcmc/numdef.hpp"

#include <string>
#include <vector>

namespace rcmc {

enum class Variant { TypeA, TypeB };

enum class TimeMethod { Diag, Eigen, Gershgorin };

std::string variant_name(Variant v);
std::string time_method_name(TimeMethod m);

struct TrajectoryEntry {
    Index k = 0;
    Real t = 0; // seconds; +inf on the terminal equilibrium record
    Vector q;
    TimeMethod time_method = TimeMethod::Diag;
    Variant variant = Variant::TypeA;
    bool synthetic = false; // terminal equilibrium record, not an output of V
};

struct Trajectory {
    std::vector<TrajectoryEntry> entries;
    std::vector<std::string> warnings;
};

// Omega p = p_T - K_TS K_SS^{-1} p_S, compact over T in ascending state order.
Vector omega_apply(const ContractionState &st, const Vector &p);

// Applies the approximation matrix V = Omega* V_TT Omega without forming it.
// Type A divides by the diagonal 1_T - (1_S^T K_SS^{-1} K_ST)^T (one extra
// solve); Type B solves M z = Omega p through the M factor. The result sums
// to sum(p) up to roundoff; Type A output is nonnegative up to roundoff.
Vector apply_v(const ContractionState &st, Variant variant, const Vector &p);

// Reference time for the snapshot after the k-th step. d_jj_prev is the
// magnitude of the pivot diagonal captured before the step ("diag" method).
// Returns +inf when rho(D) vanishes (the system is fully relaxed).
Real reference_time(const ContractionState &st, TimeMethod method,
                    Real d_jj_prev, std::vector<std::string> *warnings = nullptr);

// The contraction-and-propagation loop: emits (0, p), then one snapshot per
// contraction step until the reference time exceeds t_max or the contraction
// exhausts rank(K). On exhaustion (or an infinite reference time) a terminal
// record (+inf, limiting distribution) flagged synthetic is appended. Type B
// precomputes the full pivot sequence first, as the M factor row order
// requires.
Trajectory run(const RateMatrix &rm, const Vector &p, Variant variant,
               TimeMethod method, Real t_max, const Tolerances &tol = {});

// t -> infinity limit of exp(tK) p: per-component stationary mass.
Vector limiting_distribution(const RateMatrix &rm, const Vector &p);

} // namespace rcmc

#endif
