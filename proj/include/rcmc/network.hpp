#ifndef RCMC_NETWORK_HPP
#define RCMC_NETWORK_HPP

#include "rcmc/rate_matrix.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rcmc {

// Source form of a kinetic system: states with free energies plus
// transition-state edges. Energies are in J/mol.
struct KineticNetwork {
    struct Edge {
        Index i = 0;
        Index j = 0;
        Real barrier_Jmol = 0;
    };

    std::vector<long long> ids; // external state identifiers
    Vector state_energies_Jmol;
    std::vector<Edge> edges;
    Real temperature_K = 300.0;
    Real transmission = 1.0; // Gamma

    Index size() const { return state_energies_Jmol.size(); }

    // Structural checks: valid distinct endpoints, one edge per pair, finite
    // energies. Throws std::invalid_argument on failure.
    void check() const;
};

// Exact SI values.
inline constexpr Real kBoltzmann = 1.380649e-23;        // J/K
inline constexpr Real kPlanck = 6.62607015e-34;         // J s
inline constexpr Real kGasConstant = 8.31446261815324;  // J/(mol K)

struct BuildResult {
    RateMatrix matrix;
    std::vector<Index> index_map;  // surviving row -> original state index
    std::vector<long long> ids;    // surviving row -> original identifier
    std::vector<std::string> warnings;
};

// Canonical-ensemble rates K_ij = Gamma (k_B T / h) exp(-(E_ij - E_j)/(R T))
// with the Boltzmann stationary distribution, computed in log space. Edge
// pairs whose detailed-balance flux ratio falls below tol.truncation_ratio
// are zeroed, then all-zero rows/columns are eliminated; the index map links
// surviving rows to the original states.
BuildResult build_canonical(const KineticNetwork &net,
                            const Tolerances &tol = Tolerances{});

// K = -L Pi^{-1} from a graph Laplacian and an interior distribution.
RateMatrix build_from_laplacian(const SparseMatrix &L, const Vector &pi,
                                const Tolerances &tol = Tolerances{});

// Reproducible random network: a spanning-tree backbone plus extra edges up
// to edge_density (fraction of all unordered pairs). Energies are uniform in
// [0, spread]; barriers sit above the higher endpoint by up to the barrier
// spread.
KineticNetwork synthesize(Index n, Real edge_density, Real energy_spread_kJmol,
                          Real barrier_spread_kJmol, Real temperature_K,
                          std::uint64_t seed);

} // namespace rcmc

#endif
