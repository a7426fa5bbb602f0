#include "rcmc/io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace rcmc {

using nlohmann::json;

std::string format_real(const Real v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_matrix_file(std::ostream &os, const RateMatrix &rm) {
    const SparseMatrix &K = rm.K();
    os << rm.n() << ' ' << K.nonZeros() << '\n';
    for (Index j = 0; j < K.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(K, j); it; ++it) {
            os << (it.row() + 1) << ' ' << (j + 1) << ' '
               << format_real(it.value()) << '\n';
        }
    }
    os << "pi\n";
    for (Index i = 0; i < rm.n(); ++i) os << format_real(rm.pi()(i)) << '\n';
}

RateMatrix read_matrix_file(std::istream &is, const Tolerances &tol) {
    Index n = 0;
    Index count = 0;
    if (!(is >> n >> count) || n <= 0 || count < 0) {
        throw std::invalid_argument("matrix file: bad header");
    }
    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(count));
    for (Index e = 0; e < count; ++e) {
        Index i = 0, j = 0;
        Real v = 0;
        if (!(is >> i >> j >> v) || i < 1 || i > n || j < 1 || j > n) {
            throw std::invalid_argument("matrix file: bad triplet");
        }
        trips.emplace_back(i - 1, j - 1, v);
    }
    std::string tag;
    if (!(is >> tag) || tag != "pi") {
        throw std::invalid_argument("matrix file: missing pi block");
    }
    Vector pi(n);
    for (Index i = 0; i < n; ++i) {
        if (!(is >> pi(i))) {
            throw std::invalid_argument("matrix file: short pi block");
        }
    }
    SparseMatrix K(n, n);
    K.setFromTriplets(trips.begin(), trips.end());
    K.makeCompressed();
    return validate(K, pi, tol);
}

void write_network_json(std::ostream &os, const KineticNetwork &net) {
    json j;
    j["temperature_K"] = net.temperature_K;
    j["gamma"] = net.transmission;
    j["states"] = json::array();
    for (Index i = 0; i < net.size(); ++i) {
        j["states"].push_back({{"id", net.ids[static_cast<size_t>(i)]},
                               {"energy_Jmol", net.state_energies_Jmol(i)}});
    }
    j["edges"] = json::array();
    for (const auto &e : net.edges) {
        j["edges"].push_back({{"i", net.ids[static_cast<size_t>(e.i)]},
                              {"j", net.ids[static_cast<size_t>(e.j)]},
                              {"barrier_Jmol", e.barrier_Jmol}});
    }
    os << j.dump(2) << '\n';
}

KineticNetwork read_network_json(std::istream &is) {
    json j;
    is >> j;
    KineticNetwork net;
    net.temperature_K = j.at("temperature_K").get<Real>();
    net.transmission = j.value("gamma", 1.0);

    Real unit = 1.0;
    std::string energy_key = "energy_Jmol";
    std::string barrier_key = "barrier_Jmol";
    if (j.contains("energy_unit")) {
        const std::string u = j["energy_unit"].get<std::string>();
        if (u == "kJ/mol") {
            unit = 1000.0;
            energy_key = "energy_kJmol";
            barrier_key = "barrier_kJmol";
        } else if (u != "J/mol") {
            throw std::invalid_argument("unknown energy_unit: " + u);
        }
    }

    const auto &states = j.at("states");
    net.state_energies_Jmol.resize(static_cast<Index>(states.size()));
    std::map<long long, Index> of_id;
    Index idx = 0;
    for (const auto &s : states) {
        const long long id = s.at("id").get<long long>();
        if (!of_id.emplace(id, idx).second) {
            throw std::invalid_argument("duplicate state id " +
                                        std::to_string(id));
        }
        net.ids.push_back(id);
        net.state_energies_Jmol(idx) = s.at(energy_key).get<Real>() * unit;
        ++idx;
    }
    for (const auto &e : j.at("edges")) {
        const long long a = e.at("i").get<long long>();
        const long long b = e.at("j").get<long long>();
        const auto ia = of_id.find(a), ib = of_id.find(b);
        if (ia == of_id.end() || ib == of_id.end()) {
            throw std::invalid_argument("edge references unknown state id");
        }
        net.edges.push_back(
            {ia->second, ib->second, e.at(barrier_key).get<Real>() * unit});
    }
    net.check();
    return net;
}

void write_trajectory_csv(std::ostream &os, const Trajectory &traj,
                          const std::vector<long long> &ids) {
    os << "k,t_seconds,state_id,q\n";
    for (const auto &entry : traj.entries) {
        for (Index i = 0; i < entry.q.size(); ++i) {
            os << entry.k << ',' << format_real(entry.t) << ','
               << ids[static_cast<size_t>(i)] << ',' << format_real(entry.q(i))
               << '\n';
        }
    }
}

void write_error_report_csv(std::ostream &os, const ErrorReport &rep) {
    os << "k,t,pi_err,linf_err,boundA,boundB,flag\n";
    for (const auto &r : rep.records) {
        os << r.k << ',' << format_real(r.t) << ',' << format_real(r.pi_err)
           << ',' << format_real(r.linf_err) << ',' << format_real(r.bound_a)
           << ',' << format_real(r.bound_b) << ','
           << (r.precision_limited ? "precision-limited" : "ok") << '\n';
    }
}

Vector read_vector_file(std::istream &is) {
    std::vector<Real> vals;
    Real v = 0;
    while (is >> v) vals.push_back(v);
    Vector out(static_cast<Index>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i) out(static_cast<Index>(i)) = vals[i];
    return out;
}

void write_vector_file(std::ostream &os, const Vector &v) {
    for (Index i = 0; i < v.size(); ++i) os << format_real(v(i)) << '\n';
}

} // namespace rcmc
