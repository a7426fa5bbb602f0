#include "rcmc/analysis.hpp"
#include "rcmc/io.hpp"
#include "rcmc/network.hpp"
#include "rcmc/propagator.hpp"
#include "rcmc/simplex.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace {

using namespace rcmc;

struct LoadedSystem {
    RateMatrix matrix;
    std::vector<long long> ids;
    std::vector<std::string> warnings;
};

bool looks_like_json(const std::string &path) {
    std::ifstream f(path);
    char c = 0;
    while (f.get(c)) {
        if (!std::isspace(static_cast<unsigned char>(c))) return c == '{';
    }
    return false;
}

LoadedSystem load_system(const std::string &path, const Tolerances &tol) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open " + path);
    if (looks_like_json(path)) {
        const KineticNetwork net = read_network_json(f);
        BuildResult res = build_canonical(net, tol);
        return {std::move(res.matrix), std::move(res.ids),
                std::move(res.warnings)};
    }
    RateMatrix rm = read_matrix_file(f, tol);
    std::vector<long long> ids;
    for (Index i = 0; i < rm.n(); ++i) ids.push_back(i + 1);
    return {std::move(rm), std::move(ids), {}};
}

Vector initial_vector(const LoadedSystem &sys, const std::optional<long long> &id,
                      const std::string &file) {
    if (!file.empty()) {
        std::ifstream f(file);
        if (!f) throw std::invalid_argument("cannot open " + file);
        Vector p = read_vector_file(f);
        if (p.size() != sys.matrix.n()) {
            throw std::invalid_argument("initial vector length mismatch");
        }
        return p;
    }
    if (!id) throw std::invalid_argument("--initial or --initial-file required");
    for (size_t i = 0; i < sys.ids.size(); ++i) {
        if (sys.ids[i] == *id) {
            Vector p = Vector::Zero(sys.matrix.n());
            p(static_cast<Index>(i)) = 1.0;
            return p;
        }
    }
    throw std::invalid_argument("initial state id " + std::to_string(*id) +
                                " not found");
}

Variant parse_variant(const std::string &s) {
    if (s == "A" || s == "a") return Variant::TypeA;
    if (s == "B" || s == "b") return Variant::TypeB;
    throw std::invalid_argument("--type must be A or B");
}

TimeMethod parse_method(const std::string &s) {
    if (s == "diag") return TimeMethod::Diag;
    if (s == "eigen") return TimeMethod::Eigen;
    if (s == "gershgorin") return TimeMethod::Gershgorin;
    throw std::invalid_argument("--time-method must be diag, eigen or gershgorin");
}

std::ofstream open_out(const std::string &path) {
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot open " + path + " for writing");
    return f;
}

void emit_warnings(const std::vector<std::string> &warnings) {
    for (const auto &w : warnings) std::cerr << "warning: " << w << '\n';
}

int thread_budget() {
    int budget = static_cast<int>(std::thread::hardware_concurrency());
    if (budget <= 0) budget = 1;
    if (const char *env = std::getenv("RCMC_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) budget = std::min(budget, cap);
    }
    return budget;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Fast approximate solutions to stiff master equations with "
                 "detailed balance (rate constant matrix contraction)"};
    app.require_subcommand(1);

    Tolerances tol;

    auto *cmd_run = app.add_subcommand("run", "contract and emit a trajectory");
    std::string run_input, run_out, run_type = "A", run_method = "gershgorin";
    std::string run_init_file;
    std::optional<long long> run_init;
    Real run_tmax = std::numeric_limits<Real>::infinity();
    cmd_run->add_option("input", run_input, "network json or matrix file")
        ->required();
    cmd_run->add_option("--type", run_type, "A or B");
    cmd_run->add_option("--time-method", run_method, "diag|eigen|gershgorin");
    cmd_run->add_option("--t-max", run_tmax, "end time in seconds");
    cmd_run->add_option("--initial", run_init, "initial state id");
    cmd_run->add_option("--initial-file", run_init_file, "initial vector file");
    cmd_run->add_option("-o,--output", run_out, "trajectory csv (default stdout)");

    auto *cmd_validate = app.add_subcommand("validate", "check the axioms");
    std::string val_input;
    cmd_validate->add_option("input", val_input, "network json or matrix file")
        ->required();

    auto *cmd_bounds =
        app.add_subcommand("bounds", "error report against the exact solution");
    std::string b_input, b_out, b_type = "B", b_method = "eigen", b_init_file;
    std::optional<long long> b_init;
    Real b_tmax = std::numeric_limits<Real>::infinity();
    int b_digits = 17;
    cmd_bounds->add_option("input", b_input, "network json or matrix file")
        ->required();
    cmd_bounds->add_option("--type", b_type, "A or B");
    cmd_bounds->add_option("--time-method", b_method, "diag|eigen|gershgorin");
    cmd_bounds->add_option("--t-max", b_tmax, "end time in seconds");
    cmd_bounds->add_option("--initial", b_init, "initial state id");
    cmd_bounds->add_option("--initial-file", b_init_file, "initial vector file");
    cmd_bounds->add_option("--digits", b_digits,
                           "precision digits for the exact oracle");
    cmd_bounds->add_option("-o,--output", b_out, "report csv (default stdout)");

    auto *cmd_project =
        app.add_subcommand("project", "pi-norm projection onto the simplex");
    std::string p_input, p_vector, p_out;
    cmd_project->add_option("input", p_input, "matrix file providing pi")
        ->required();
    cmd_project->add_option("--vector", p_vector, "vector file to project")
        ->required();
    cmd_project->add_option("-o,--output", p_out, "output vector file");

    auto *cmd_synth = app.add_subcommand("synth", "generate a random network");
    Index s_n = 0;
    Real s_density = 0.1, s_espread = 30.0, s_bspread = 30.0, s_temp = 300.0;
    std::uint64_t s_seed = 0;
    std::string s_out;
    cmd_synth->add_option("--n", s_n, "number of states")->required();
    cmd_synth->add_option("--edge-density", s_density,
                          "fraction of all state pairs");
    cmd_synth->add_option("--energy-spread", s_espread, "kJ/mol");
    cmd_synth->add_option("--barrier-spread", s_bspread, "kJ/mol");
    cmd_synth->add_option("--temperature", s_temp, "K");
    cmd_synth->add_option("--seed", s_seed, "rng seed")->required();
    cmd_synth->add_option("-o,--output", s_out, "network json (default stdout)");

    auto *cmd_convert =
        app.add_subcommand("convert", "network json to matrix file");
    std::string c_input, c_out;
    cmd_convert->add_option("input", c_input, "network json")->required();
    cmd_convert->add_option("-o,--output", c_out, "matrix file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_run->parsed()) {
            const LoadedSystem sys = load_system(run_input, tol);
            emit_warnings(sys.warnings);
            const Vector p = initial_vector(sys, run_init, run_init_file);
            const Trajectory traj =
                run(sys.matrix, p, parse_variant(run_type),
                    parse_method(run_method), run_tmax, tol);
            emit_warnings(traj.warnings);
            if (run_out.empty()) {
                write_trajectory_csv(std::cout, traj, sys.ids);
            } else {
                auto f = open_out(run_out);
                write_trajectory_csv(f, traj, sys.ids);
            }
            return 0;
        }

        if (cmd_validate->parsed()) {
            std::ifstream f(val_input);
            if (!f) throw std::invalid_argument("cannot open " + val_input);
            if (looks_like_json(val_input)) {
                const KineticNetwork net = read_network_json(f);
                const BuildResult res = build_canonical(net, tol);
                emit_warnings(res.warnings);
                std::cout << "valid rate constant matrix (n = "
                          << res.matrix.n() << ")\n";
                return 0;
            }
            // Parse the raw blocks and report every violated axiom instead of
            // stopping at the first.
            Index n = 0, count = 0;
            f >> n >> count;
            if (!f || n <= 0) throw std::invalid_argument("bad matrix file");
            std::vector<Triplet> trips;
            for (Index e = 0; e < count; ++e) {
                Index i = 0, j = 0;
                Real v = 0;
                f >> i >> j >> v;
                trips.emplace_back(i - 1, j - 1, v);
            }
            std::string tag;
            f >> tag;
            Vector pi(n);
            for (Index i = 0; i < n; ++i) f >> pi(i);
            if (!f) throw std::invalid_argument("bad matrix file");
            SparseMatrix K(n, n);
            K.setFromTriplets(trips.begin(), trips.end());
            const ValidationReport rep = validate_report(K, pi, tol);
            std::cout << rep.format() << '\n';
            return rep.ok() ? 0 : 1;
        }

        if (cmd_bounds->parsed()) {
            const LoadedSystem sys = load_system(b_input, tol);
            emit_warnings(sys.warnings);
            const Vector p = initial_vector(sys, b_init, b_init_file);
            const ErrorReport rep =
                error_report(sys.matrix, p, parse_variant(b_type),
                             parse_method(b_method), b_tmax, b_digits,
                             thread_budget(), tol);
            emit_warnings(rep.warnings);
            if (b_out.empty()) {
                write_error_report_csv(std::cout, rep);
            } else {
                auto f = open_out(b_out);
                write_error_report_csv(f, rep);
            }
            return 0;
        }

        if (cmd_project->parsed()) {
            std::ifstream f(p_input);
            if (!f) throw std::invalid_argument("cannot open " + p_input);
            const RateMatrix rm = read_matrix_file(f, tol);
            std::ifstream vf(p_vector);
            if (!vf) throw std::invalid_argument("cannot open " + p_vector);
            const Vector w = read_vector_file(vf);
            if (w.size() != rm.n()) {
                throw std::invalid_argument("vector length mismatch");
            }
            const ProjectionResult res = project_pi(w, rm.metric());
            std::cerr << "support " << res.support_size << ", mu " << res.mu
                      << '\n';
            if (p_out.empty()) {
                write_vector_file(std::cout, res.q);
            } else {
                auto f2 = open_out(p_out);
                write_vector_file(f2, res.q);
            }
            return 0;
        }

        if (cmd_synth->parsed()) {
            const KineticNetwork net = synthesize(s_n, s_density, s_espread,
                                                  s_bspread, s_temp, s_seed);
            if (s_out.empty()) {
                write_network_json(std::cout, net);
            } else {
                auto f = open_out(s_out);
                write_network_json(f, net);
            }
            return 0;
        }

        if (cmd_convert->parsed()) {
            std::ifstream f(c_input);
            if (!f) throw std::invalid_argument("cannot open " + c_input);
            const KineticNetwork net = read_network_json(f);
            const BuildResult res = build_canonical(net, tol);
            emit_warnings(res.warnings);
            if (res.matrix.n() < net.size()) {
                std::cerr << "note: matrix rows follow the surviving-state "
                             "order; the id map is lost in this format\n";
            }
            if (c_out.empty()) {
                write_matrix_file(std::cout, res.matrix);
            } else {
                auto f2 = open_out(c_out);
                write_matrix_file(f2, res.matrix);
            }
            return 0;
        }
    } catch (const ValidationError &e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
