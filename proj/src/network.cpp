#include "rcmc/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace rcmc {

void KineticNetwork::check() const {
    const Index n = size();
    if (static_cast<Index>(ids.size()) != n) {
        throw std::invalid_argument("ids and energies disagree in length");
    }
    if (!(temperature_K > 0)) {
        throw std::invalid_argument("temperature must be positive");
    }
    if (!(transmission > 0)) {
        throw std::invalid_argument("transmission coefficient must be positive");
    }
    if (!state_energies_Jmol.allFinite()) {
        throw std::invalid_argument("state energies must be finite");
    }
    std::set<std::pair<Index, Index>> seen;
    for (const Edge &e : edges) {
        if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n || e.i == e.j) {
            throw std::invalid_argument("edge endpoints invalid");
        }
        if (!std::isfinite(e.barrier_Jmol)) {
            throw std::invalid_argument("barrier energy must be finite");
        }
        const auto key = std::minmax(e.i, e.j);
        if (!seen.insert(key).second) {
            throw std::invalid_argument(
                "duplicate edge between states " + std::to_string(key.first) +
                " and " + std::to_string(key.second));
        }
    }
}

BuildResult build_canonical(const KineticNetwork &net, const Tolerances &tol) {
    net.check();
    tol.check();
    const Index n = net.size();
    const Real rt = kGasConstant * net.temperature_K;
    const Real log_prefactor = std::log(net.transmission) +
                               std::log(kBoltzmann * net.temperature_K / kPlanck);

    std::vector<std::string> warnings;

    // log pi via log-sum-exp over -E_i / RT.
    Vector neg_e = -net.state_energies_Jmol / rt;
    const Real shift = neg_e.maxCoeff();
    const Real log_z = shift + std::log((neg_e.array() - shift).exp().sum());
    const Vector log_pi = neg_e.array() - log_z;

    // Pairwise truncation on the symmetric detailed-balance quantity
    // K_ij / pi_i = K_ji / pi_j, evaluated in log space.
    const Real log_floor = std::log(tol.truncation_ratio);
    struct Rate {
        Index i, j;
        Real log_kij; // rate j -> i
        Real log_kji; // rate i -> j
    };
    std::vector<Rate> rates;
    rates.reserve(net.edges.size());
    for (const auto &e : net.edges) {
        const Real ei = net.state_energies_Jmol(e.i);
        const Real ej = net.state_energies_Jmol(e.j);
        if (e.barrier_Jmol < std::max(ei, ej)) {
            std::ostringstream os;
            os << "barrier between states " << e.i << " and " << e.j
               << " lies below an endpoint energy; rates exceed the prefactor";
            warnings.push_back(os.str());
        }
        const Real log_kij = log_prefactor - (e.barrier_Jmol - ej) / rt;
        const Real log_kji = log_prefactor - (e.barrier_Jmol - ei) / rt;
        const Real log_sym = log_kij - log_pi(e.i); // == log_kji - log_pi(e.j)
        if (log_sym < log_floor) continue;
        rates.push_back({e.i, e.j, log_kij, log_kji});
    }

    std::vector<char> alive(static_cast<size_t>(n), 0);
    for (const Rate &r : rates) {
        alive[static_cast<size_t>(r.i)] = 1;
        alive[static_cast<size_t>(r.j)] = 1;
    }
    std::vector<Index> index_map;
    std::vector<Index> new_of(static_cast<size_t>(n), -1);
    for (Index i = 0; i < n; ++i) {
        if (alive[static_cast<size_t>(i)]) {
            new_of[static_cast<size_t>(i)] = static_cast<Index>(index_map.size());
            index_map.push_back(i);
        }
    }
    const Index m = static_cast<Index>(index_map.size());
    if (m == 0) {
        throw EmptyAfterTruncation(
            "no edges survive truncation; the system is empty");
    }
    if (m < n) {
        std::ostringstream os;
        os << (n - m) << " state(s) dropped as all-zero rows/columns";
        warnings.push_back(os.str());
    }

    // Boltzmann weights renormalized over the survivors.
    Vector sub_neg_e(m);
    for (Index r = 0; r < m; ++r) {
        sub_neg_e(r) = -net.state_energies_Jmol(index_map[static_cast<size_t>(r)]) / rt;
    }
    const Real sub_shift = sub_neg_e.maxCoeff();
    const Real sub_log_z =
        sub_shift + std::log((sub_neg_e.array() - sub_shift).exp().sum());
    Vector pi = (sub_neg_e.array() - sub_log_z).exp();
    pi /= pi.sum();

    std::vector<Triplet> trips;
    Vector diag = Vector::Zero(m);
    for (const Rate &r : rates) {
        const Index i = new_of[static_cast<size_t>(r.i)];
        const Index j = new_of[static_cast<size_t>(r.j)];
        const Real kij = std::exp(r.log_kij);
        const Real kji = std::exp(r.log_kji);
        trips.emplace_back(i, j, kij);
        trips.emplace_back(j, i, kji);
        diag(j) -= kij;
        diag(i) -= kji;
    }
    for (Index j = 0; j < m; ++j) {
        if (diag(j) != 0) trips.emplace_back(j, j, diag(j));
    }
    SparseMatrix K(m, m);
    K.setFromTriplets(trips.begin(), trips.end());
    K.makeCompressed();

    BuildResult out{validate(K, pi, tol), index_map, {}, std::move(warnings)};
    out.ids.reserve(static_cast<size_t>(m));
    for (const Index orig : index_map) {
        out.ids.push_back(net.ids[static_cast<size_t>(orig)]);
    }
    return out;
}

RateMatrix build_from_laplacian(const SparseMatrix &L, const Vector &pi,
                                const Tolerances &tol) {
    const Index n = L.rows();
    if (L.cols() != n || pi.size() != n) {
        throw std::invalid_argument("dimension mismatch");
    }
    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(L.nonZeros()));
    for (Index j = 0; j < L.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(L, j); it; ++it) {
            trips.emplace_back(it.row(), j, -it.value() / pi(j));
        }
    }
    SparseMatrix K(n, n);
    K.setFromTriplets(trips.begin(), trips.end());
    K.makeCompressed();
    return validate(K, pi, tol);
}

KineticNetwork synthesize(const Index n, const Real edge_density,
                          const Real energy_spread_kJmol,
                          const Real barrier_spread_kJmol,
                          const Real temperature_K, const std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("need at least two states");
    if (!(edge_density > 0) || !(energy_spread_kJmol > 0) ||
        !(barrier_spread_kJmol > 0) || !(temperature_K > 0)) {
        throw std::invalid_argument("parameters must be positive");
    }

    std::mt19937_64 gen(seed);
    // Explicit uniform construction keeps output identical across platforms.
    const auto uniform = [&gen]() {
        return static_cast<Real>(gen() >> 11) * 0x1.0p-53;
    };
    const auto uniform_int = [&](Index bound) {
        return static_cast<Index>(gen() % static_cast<std::uint64_t>(bound));
    };

    KineticNetwork net;
    net.temperature_K = temperature_K;
    net.transmission = 1.0;
    net.state_energies_Jmol.resize(n);
    net.ids.resize(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) {
        net.ids[static_cast<size_t>(i)] = i + 1;
        net.state_energies_Jmol(i) = uniform() * energy_spread_kJmol * 1000.0;
    }

    std::set<std::pair<Index, Index>> used;
    const auto add_edge = [&](Index a, Index b) {
        const auto key = std::minmax(a, b);
        if (!used.insert(key).second) return false;
        const Real base =
            std::max(net.state_energies_Jmol(a), net.state_energies_Jmol(b));
        net.edges.push_back(
            {key.first, key.second,
             base + uniform() * barrier_spread_kJmol * 1000.0});
        return true;
    };

    // Spanning-tree backbone keeps the network connected.
    for (Index v = 1; v < n; ++v) add_edge(v, uniform_int(v));

    const Real all_pairs = static_cast<Real>(n) * static_cast<Real>(n - 1) / 2;
    const auto target = static_cast<size_t>(
        std::min(all_pairs, std::ceil(edge_density * all_pairs)));
    size_t guard = 0;
    while (net.edges.size() < target && guard < 64 * target + 1024) {
        ++guard;
        const Index a = uniform_int(n);
        const Index b = uniform_int(n);
        if (a == b) continue;
        add_edge(a, b);
    }
    return net;
}

} // namespace rcmc
