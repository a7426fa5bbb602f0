#include "rcmc/propagator.hpp"

#include "rcmc/simplex.hpp"
#include "rcmc/spectral.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace rcmc {

namespace {

constexpr Real kInf = std::numeric_limits<Real>::infinity();

// Compact coordinates of T (ascending states) with a state->slot map.
struct TransientMap {
    std::vector<Index> states;
    std::vector<Index> slot;

    explicit TransientMap(const ContractionState &st)
        : states(st.transient()), slot(static_cast<size_t>(st.n()), -1) {
        for (size_t c = 0; c < states.size(); ++c) {
            slot[static_cast<size_t>(states[c])] = static_cast<Index>(c);
        }
    }
};

// x on S (pivot order) -> K_TS x, compact over tm.
Vector k_ts_times(const ContractionState &st, const TransientMap &tm,
                  const Vector &x_s) {
    const SparseMatrix &K = st.rate_matrix().K();
    const PiCholeskyFactor &chol = st.chol_k();
    Vector out = Vector::Zero(static_cast<Index>(tm.states.size()));
    for (Index c = 0; c < chol.size(); ++c) {
        const Index j = chol.pivot_order()[static_cast<size_t>(c)];
        const Real xj = x_s(c);
        if (xj == 0) continue;
        for (SparseMatrix::InnerIterator it(K, j); it; ++it) {
            const Index s = tm.slot[static_cast<size_t>(it.row())];
            if (s >= 0) out(s) += it.value() * xj;
        }
    }
    return out;
}

// z on T (compact over tm) -> K_ST z on S (pivot order).
Vector k_st_times(const ContractionState &st, const TransientMap &tm,
                  const Vector &z_t) {
    const SparseMatrix &K = st.rate_matrix().K();
    const PiCholeskyFactor &chol = st.chol_k();
    Vector out = Vector::Zero(chol.size());
    for (size_t c = 0; c < tm.states.size(); ++c) {
        const Index l = tm.states[c];
        const Real zl = z_t(static_cast<Index>(c));
        if (zl == 0) continue;
        for (SparseMatrix::InnerIterator it(K, l); it; ++it) {
            const Index p = chol.position(it.row());
            if (p >= 0) out(p) += it.value() * zl;
        }
    }
    return out;
}

Vector omega_apply_impl(const ContractionState &st, const TransientMap &tm,
                        const Vector &p) {
    const PiCholeskyFactor &chol = st.chol_k();
    Vector w(static_cast<Index>(tm.states.size()));
    for (size_t c = 0; c < tm.states.size(); ++c) {
        w(static_cast<Index>(c)) = p(tm.states[c]);
    }
    if (chol.size() == 0) return w;
    Vector p_s(chol.size());
    for (Index c = 0; c < chol.size(); ++c) {
        p_s(c) = p(chol.pivot_order()[static_cast<size_t>(c)]);
    }
    w -= k_ts_times(st, tm, chol.solve(p_s));
    return w;
}

// Type A divisor d = 1_T - (1_S^T K_SS^{-1} K_ST)^T, entrywise >= 1. The row
// vector is obtained from one solve: K_SS^T y = 1_S gives
// y = Pi_S^{-1} K_SS^{-1} pi_S.
Vector type_a_divisor(const ContractionState &st, const TransientMap &tm) {
    const PiCholeskyFactor &chol = st.chol_k();
    const SparseMatrix &K = st.rate_matrix().K();
    Vector d = Vector::Ones(static_cast<Index>(tm.states.size()));
    if (chol.size() == 0) return d;
    Vector pi_s(chol.size());
    for (Index c = 0; c < chol.size(); ++c) {
        pi_s(c) = st.rate_matrix().pi()(chol.pivot_order()[static_cast<size_t>(c)]);
    }
    const Vector y = chol.solve(pi_s).cwiseQuotient(pi_s);
    for (size_t c = 0; c < tm.states.size(); ++c) {
        const Index l = tm.states[c];
        Real acc = 0;
        for (SparseMatrix::InnerIterator it(K, l); it; ++it) {
            const Index p = chol.position(it.row());
            if (p >= 0) acc += y(p) * it.value();
        }
        d(static_cast<Index>(c)) -= acc;
    }
    return d;
}

Vector apply_v_impl(const ContractionState &st, const TransientMap &tm,
                    const Variant variant, const Vector &p) {
    const PiCholeskyFactor &chol = st.chol_k();
    const Vector w = omega_apply_impl(st, tm, p);

    Vector z;
    if (variant == Variant::TypeA) {
        z = w.cwiseQuotient(type_a_divisor(st, tm));
    } else {
        const MCholeskyFactor *mf = st.chol_m();
        if (mf == nullptr) {
            throw TypeBWithoutMFactor(
                "Type B application requires the M factor; enable it with the "
                "full pivot plan before stepping");
        }
        assert(mf->offset() == st.k());
        // Permute into the factor's row order, solve M z = w, permute back.
        Vector w_perm(w.size());
        for (size_t c = 0; c < tm.states.size(); ++c) {
            w_perm(mf->active_slot(tm.states[c])) = w(static_cast<Index>(c));
        }
        const Vector z_perm = mf->solve(w_perm);
        z.resize(w.size());
        for (size_t c = 0; c < tm.states.size(); ++c) {
            z(static_cast<Index>(c)) = z_perm(mf->active_slot(tm.states[c]));
        }
    }

    // Omega* z: S-part is -K_SS^{-1} K_ST z, T-part is z.
    Vector out = Vector::Zero(st.n());
    for (size_t c = 0; c < tm.states.size(); ++c) {
        out(tm.states[c]) = z(static_cast<Index>(c));
    }
    if (chol.size() > 0) {
        const Vector x = chol.solve(k_st_times(st, tm, z));
        for (Index c = 0; c < chol.size(); ++c) {
            out(chol.pivot_order()[static_cast<size_t>(c)]) = -x(c);
        }
    }
    return out;
}

} // namespace

std::string variant_name(Variant v) {
    return v == Variant::TypeA ? "A" : "B";
}

std::string time_method_name(TimeMethod m) {
    switch (m) {
    case TimeMethod::Diag: return "diag";
    case TimeMethod::Eigen: return "eigen";
    case TimeMethod::Gershgorin: return "gershgorin";
    }
    return "?";
}

Vector omega_apply(const ContractionState &st, const Vector &p) {
    const TransientMap tm(st);
    return omega_apply_impl(st, tm, p);
}

Vector apply_v(const ContractionState &st, const Variant variant,
               const Vector &p) {
    const TransientMap tm(st);
    return apply_v_impl(st, tm, variant, p);
}

Real reference_time(const ContractionState &st, const TimeMethod method,
                    const Real d_jj_prev, std::vector<std::string> *warnings) {
    if (method == TimeMethod::Diag) {
        return 1.0 / std::abs(d_jj_prev);
    }
    if (method == TimeMethod::Gershgorin) {
        const Real rho_hat = st.gershgorin_rho_d();
        if (!(rho_hat > 0)) return kInf;
        const Real sigma_hat = gershgorin_sigma_inv(st.chol_k());
        return std::numbers::ln2 / std::sqrt(sigma_hat * rho_hat);
    }

    // "eigen": sigma(K_SS) through solves, rho(D) through the sparse Schur
    // complement; fall back to the Gershgorin surrogates on non-convergence.
    const SpectralOptions opt{1e-10, 5000};
    try {
        std::vector<Index> t_states;
        const SparseMatrix D = st.d_matrix(t_states);
        Vector pi_t(static_cast<Index>(t_states.size()));
        for (size_t c = 0; c < t_states.size(); ++c) {
            pi_t(static_cast<Index>(c)) = st.rate_matrix().pi()(t_states[c]);
        }
        const Real rho = spectral_radius(D, pi_t, opt);
        if (!(rho > 0)) return kInf;

        const PiCholeskyFactor &chol = st.chol_k();
        Vector pi_s(chol.size());
        for (Index c = 0; c < chol.size(); ++c) {
            pi_s(c) = st.rate_matrix().pi()(chol.pivot_order()[static_cast<size_t>(c)]);
        }
        const Real rho_inv = spectral_radius(
            [&chol](const Vector &x, Vector &out) { out = chol.solve(x); },
            pi_s, opt);
        if (!(rho_inv > 0)) return kInf;
        const Real sigma = 1.0 / rho_inv;
        return std::numbers::ln2 / std::sqrt(sigma * rho);
    } catch (const NoConvergence &e) {
        if (warnings != nullptr) {
            std::ostringstream os;
            os << "eigen reference time at k=" << st.k()
               << " fell back to gershgorin: " << e.what();
            warnings->push_back(os.str());
        }
        return reference_time(st, TimeMethod::Gershgorin, d_jj_prev, warnings);
    }
}

Vector limiting_distribution(const RateMatrix &rm, const Vector &p) {
    const std::vector<int> comp = rm.components();
    int ncomp = 0;
    for (const int c : comp) ncomp = std::max(ncomp, c + 1);
    Vector mass_p = Vector::Zero(ncomp), mass_pi = Vector::Zero(ncomp);
    for (Index i = 0; i < rm.n(); ++i) {
        mass_p(comp[static_cast<size_t>(i)]) += p(i);
        mass_pi(comp[static_cast<size_t>(i)]) += rm.pi()(i);
    }
    Vector q(rm.n());
    for (Index i = 0; i < rm.n(); ++i) {
        const int c = comp[static_cast<size_t>(i)];
        q(i) = rm.pi()(i) * mass_p(c) / mass_pi(c);
    }
    return q;
}

namespace {

// Type A output is nonnegative up to roundoff: clamp stray negatives, run the
// simplex projection only when the violation exceeds tolerance. Type B always
// projects.
Vector postprocess(const Vector &v, const Variant variant, const PiMetric &m) {
    if (variant == Variant::TypeB) return project_pi(v, m).q;
    const Real vmax = v.maxCoeff();
    const Real vmin = v.minCoeff();
    if (vmin < -1e-14 * std::max(vmax, Real{0})) return project_pi(v, m).q;
    if (vmin >= 0) {
        Vector q = v;
        const Real s = q.sum();
        if (std::abs(s - 1.0) > 1e-13 && s > 0) q /= s;
        return q;
    }
    Vector q = v.cwiseMax(0.0);
    const Real s = q.sum();
    if (std::abs(s - 1.0) > 1e-13 && s > 0) q /= s;
    return q;
}

} // namespace

Trajectory run(const RateMatrix &rm, const Vector &p, const Variant variant,
               const TimeMethod method, const Real t_max,
               const Tolerances &tol) {
    if (p.size() != rm.n()) throw std::invalid_argument("initial vector size");
    if (p.minCoeff() < -1e-12 || std::abs(p.sum() - 1.0) > 1e-9) {
        throw std::invalid_argument(
            "initial vector must lie on the probability simplex");
    }
    if (t_max < 0) throw std::invalid_argument("t_max must be nonnegative");

    Trajectory traj;
    traj.entries.push_back({0, 0.0, p, method, variant, false});

    ContractionState st(rm, tol);
    if (variant == Variant::TypeB) {
        // The M factor rows must be ordered by the full pivot sequence, so
        // Type B first runs the contraction to exhaustion to obtain it.
        std::vector<Index> plan;
        {
            ContractionState scout(rm, tol);
            while (auto j = scout.select_steady()) {
                scout.schur_step(*j);
                plan.push_back(*j);
            }
        }
        st.enable_m_factor(plan);
    }

    const PiMetric metric = rm.metric();
    Real prev_t = 0;
    bool relaxed = false;
    while (true) {
        const auto j = st.select_steady();
        if (!j) {
            relaxed = true;
            break;
        }
        const Real d_jj_prev = std::abs(st.d_diag(*j));
        st.schur_step(*j);
        const Real t = reference_time(st, method, d_jj_prev, &traj.warnings);
        if (std::isinf(t)) {
            relaxed = true;
            break;
        }
        if (t > t_max) break;
        if (t <= prev_t) {
            std::ostringstream os;
            os << "reference time not increasing at k=" << st.k() << " (t="
               << t << ", previous " << prev_t << ")";
            traj.warnings.push_back(os.str());
        }
        prev_t = t;
        const Vector q = postprocess(apply_v(st, variant, p), variant, metric);
        traj.entries.push_back({st.k(), t, q, method, variant, false});
    }

    if (relaxed) {
        traj.entries.push_back({st.k(), kInf, limiting_distribution(rm, p),
                                method, variant, true});
    }
    return traj;
}

} // namespace rcmc
