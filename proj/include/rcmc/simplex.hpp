#ifndef RCMC_SIMPLEX_HPP
#define RCMC_SIMPLEX_HPP

#include "rcmc/numdef.hpp"
#include "rcmc/pi_metric.hpp"

namespace rcmc {

struct ProjectionResult {
    Vector q;           // the projection, q >= 0 and sum(q) = 1
    Index support_size; // number of strictly positive components
    Real mu;            // Lagrange multiplier of the equality constraint
};

// pi-norm projection of w onto the probability simplex: the argmin over
// q in Delta_n of ||q - w||_pi. Sorts indices by w_i/pi_i descending (ties
// broken by smaller index), scans the threshold sequence with exact sign
// comparisons, then clips. O(n log n).
ProjectionResult project_pi(const Vector &w, const PiMetric &m);

} // namespace rcmc

#endif
