#ifndef RCMC_IO_HPP
#define RCMC_IO_HPP

#include "rcmc/analysis.hpp"
#include "rcmc/network.hpp"
#include "rcmc/propagator.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace rcmc {

// Matrix file: header "n nnz", one 1-based "i j value" triplet per line, then
// a literal "pi" line followed by n values. 17 significant digits throughout.
void write_matrix_file(std::ostream &os, const RateMatrix &rm);
RateMatrix read_matrix_file(std::istream &is,
                            const Tolerances &tol = Tolerances{});

// Network JSON: {"states": [{"id", "energy_Jmol"}], "edges": [{"i", "j",
// "barrier_Jmol"}], "temperature_K", "gamma"}. Energies may instead use the
// kJ/mol fields when "energy_unit" is "kJ/mol"; edge endpoints are state ids.
void write_network_json(std::ostream &os, const KineticNetwork &net);
KineticNetwork read_network_json(std::istream &is);

// Trajectory CSV in long format: k,t_seconds,state_id,q.
void write_trajectory_csv(std::ostream &os, const Trajectory &traj,
                          const std::vector<long long> &ids);

// Error report CSV: k,t,pi_err,linf_err,boundA,boundB,flag.
void write_error_report_csv(std::ostream &os, const ErrorReport &rep);

// Plain vector file: one value per line.
Vector read_vector_file(std::istream &is);
void write_vector_file(std::ostream &os, const Vector &v);

std::string format_real(Real v); // shortest form with 17 significant digits

} // namespace rcmc

#endif
