#ifndef RCMC_TOLERANCES_HPP
#define RCMC_TOLERANCES_HPP

#include "rcmc/numdef.hpp"

#include <stdexcept>

namespace rcmc {

struct Tolerances {
    Real tol_rel = 1e-10;           // relative tolerance for axiom checks
    Real tol_abs = 0.0;             // absolute slack for column sums
    Real pivot_floor = 1e-300;      // smallest |D_jj| treated as nonzero
    Real truncation_ratio = 1e-200; // drop threshold relative to column max

    void check() const {
        if (tol_rel < 0 || tol_abs < 0 || pivot_floor < 0 ||
            truncation_ratio < 0) {
            throw std::invalid_argument("Tolerances must be nonnegative");
        }
    }
};

} // namespace rcmc

#endif
