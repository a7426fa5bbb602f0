#include "rcmc/analysis.hpp"

#include "rcmc/simplex.hpp"
#include "rcmc/spectral.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace rcmc {

using BigFloat = boost::multiprecision::mpfr_float;

struct EigenbasisExt {
    Index n = 0;
    std::vector<BigFloat> lambdas;
    std::vector<BigFloat> U; // column-major n x n
    std::vector<BigFloat> pi;
    unsigned digits = 50;
};

namespace {

constexpr Real kInf = std::numeric_limits<Real>::infinity();

// Cyclic Jacobi eigensolver for a symmetric matrix held as a column-major
// flat array. Rotations stop once the off-diagonal mass falls below
// eps * ||A||_F.
void jacobi_eigen(std::vector<BigFloat> &A, std::vector<BigFloat> &V,
                  const Index n, const BigFloat &eps) {
    auto at = [n](std::vector<BigFloat> &M, Index i, Index j) -> BigFloat & {
        return M[static_cast<size_t>(j * n + i)];
    };
    V.assign(static_cast<size_t>(n) * static_cast<size_t>(n), BigFloat(0));
    for (Index i = 0; i < n; ++i) at(V, i, i) = 1;

    BigFloat fro = 0;
    for (const BigFloat &x : A) fro += x * x;
    fro = sqrt(fro);
    const BigFloat thresh = eps * fro;

    for (int sweep = 0; sweep < 100; ++sweep) {
        BigFloat off = 0;
        for (Index p = 0; p < n; ++p) {
            for (Index q = p + 1; q < n; ++q) off += at(A, p, q) * at(A, p, q);
        }
        if (sqrt(2 * off) <= thresh) break;

        for (Index p = 0; p < n; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                const BigFloat apq = at(A, p, q);
                if (apq == 0) continue;
                const BigFloat theta = (at(A, q, q) - at(A, p, p)) / (2 * apq);
                BigFloat t;
                if (theta >= 0) {
                    t = 1 / (theta + sqrt(1 + theta * theta));
                } else {
                    t = -1 / (-theta + sqrt(1 + theta * theta));
                }
                const BigFloat c = 1 / sqrt(1 + t * t);
                const BigFloat s = t * c;

                for (Index i = 0; i < n; ++i) {
                    const BigFloat aip = at(A, i, p), aiq = at(A, i, q);
                    at(A, i, p) = c * aip - s * aiq;
                    at(A, i, q) = s * aip + c * aiq;
                }
                for (Index i = 0; i < n; ++i) {
                    const BigFloat api = at(A, p, i), aqi = at(A, q, i);
                    at(A, p, i) = c * api - s * aqi;
                    at(A, q, i) = s * api + c * aqi;
                }
                for (Index i = 0; i < n; ++i) {
                    const BigFloat vip = at(V, i, p), viq = at(V, i, q);
                    at(V, i, p) = c * vip - s * viq;
                    at(V, i, q) = s * vip + c * viq;
                }
            }
        }
    }
}

// Symmetrized matrix entry B_ij = K_ij sqrt(pi_j / pi_i) computed in log
// space; the ratio under the root can overflow double even when the product
// K_ij sqrt(pi_j/pi_i) = sqrt(K_ij K_ji) is well in range.
Real symmetrized_entry(const Real k_ij, const Real log_pi_i,
                       const Real log_pi_j) {
    if (k_ij == 0) return 0;
    assert(k_ij > 0);
    return std::exp(std::log(k_ij) + 0.5 * (log_pi_j - log_pi_i));
}

void finalize_basis(Eigenbasis &eb, const Real lambda_scale,
                    std::vector<std::string> *warnings) {
    const Index n = eb.lambdas.size();
    // Deterministic eigenvector signs: largest-magnitude entry positive.
    for (Index k = 0; k < n; ++k) {
        Index imax = 0;
        eb.U.col(k).cwiseAbs().maxCoeff(&imax);
        if (eb.U(imax, k) < 0) eb.U.col(k) = -eb.U.col(k);
    }
    for (Index k = 0; k < n; ++k) {
        if (eb.lambdas(k) > 0) {
            if (warnings != nullptr && eb.lambdas(k) > 1e-10 * lambda_scale) {
                std::ostringstream os;
                os << "positive eigenvalue " << eb.lambdas(k)
                   << " clamped to 0";
                warnings->push_back(os.str());
            }
            eb.lambdas(k) = 0;
        }
    }
    // With a simple zero eigenvalue the stationary eigenvector is pi exactly.
    if (n == 1 || eb.lambdas(1) < -1e-12 * std::max(lambda_scale, Real{1})) {
        eb.U.col(0) = eb.pi;
    }
}

} // namespace

Eigenbasis dense_eigendecompose(const RateMatrix &rm,
                                const int precision_digits,
                                const Index dense_limit,
                                std::vector<std::string> *warnings) {
    const Index n = rm.n();
    if (precision_digits <= 17 && n > dense_limit) {
        throw DenseLimitExceeded("n = " + std::to_string(n) +
                                 " exceeds the dense eigensolver limit " +
                                 std::to_string(dense_limit));
    }
    const Vector &pi = rm.pi();
    const Vector log_pi = pi.array().log();

    Eigenbasis eb;
    eb.pi = pi;
    eb.precision_digits = precision_digits;

    if (precision_digits <= 17) {
        Matrix B = Matrix::Zero(n, n);
        for (Index j = 0; j < rm.K().outerSize(); ++j) {
            for (SparseMatrix::InnerIterator it(rm.K(), j); it; ++it) {
                const Index i = it.row();
                if (i == j) {
                    B(i, i) = it.value();
                } else {
                    B(i, j) = symmetrized_entry(it.value(), log_pi(i), log_pi(j));
                }
            }
        }
        B = 0.5 * (B + B.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Matrix> es(B);
        if (es.info() != Eigen::Success) {
            throw RcmcError("dense symmetric eigensolver failed");
        }
        eb.lambdas = es.eigenvalues().reverse();
        const Vector sqrt_pi = pi.cwiseSqrt();
        eb.U = sqrt_pi.asDiagonal() * es.eigenvectors().rowwise().reverse();
        finalize_basis(eb, eb.lambdas.cwiseAbs().maxCoeff(), warnings);
        return eb;
    }

    // Extended-precision path: the whole decomposition in mpfr floats.
    const unsigned digits = static_cast<unsigned>(precision_digits);
    BigFloat::default_precision(digits);
    auto ext = std::make_shared<EigenbasisExt>();
    ext->n = n;
    ext->digits = digits;
    ext->pi.resize(static_cast<size_t>(n));
    std::vector<BigFloat> sqrt_pi(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) {
        ext->pi[static_cast<size_t>(i)] = BigFloat(pi(i));
        sqrt_pi[static_cast<size_t>(i)] = sqrt(ext->pi[static_cast<size_t>(i)]);
    }

    std::vector<BigFloat> B(static_cast<size_t>(n) * static_cast<size_t>(n),
                            BigFloat(0));
    auto bat = [n, &B](Index i, Index j) -> BigFloat & {
        return B[static_cast<size_t>(j * n + i)];
    };
    for (Index j = 0; j < rm.K().outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(rm.K(), j); it; ++it) {
            const Index i = it.row();
            if (i == j) {
                bat(i, i) = BigFloat(it.value());
            } else {
                bat(i, j) = BigFloat(it.value()) *
                            sqrt_pi[static_cast<size_t>(j)] /
                            sqrt_pi[static_cast<size_t>(i)];
            }
        }
    }
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const BigFloat avg = (bat(i, j) + bat(j, i)) / 2;
            bat(i, j) = avg;
            bat(j, i) = avg;
        }
    }

    std::vector<BigFloat> V;
    const BigFloat eps = pow(BigFloat(10), -static_cast<int>(digits));
    jacobi_eigen(B, V, n, eps);

    // Sort eigenpairs descending.
    std::vector<Index> order(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        return B[static_cast<size_t>(a * n + a)] > B[static_cast<size_t>(b * n + b)];
    });

    ext->lambdas.resize(static_cast<size_t>(n));
    ext->U.assign(static_cast<size_t>(n) * static_cast<size_t>(n), BigFloat(0));
    for (Index k = 0; k < n; ++k) {
        const Index src = order[static_cast<size_t>(k)];
        BigFloat lam = B[static_cast<size_t>(src * n + src)];
        if (lam > 0) lam = 0;
        ext->lambdas[static_cast<size_t>(k)] = lam;
        for (Index i = 0; i < n; ++i) {
            ext->U[static_cast<size_t>(k * n + i)] =
                sqrt_pi[static_cast<size_t>(i)] *
                V[static_cast<size_t>(src * n + i)];
        }
    }

    eb.lambdas.resize(n);
    eb.U.resize(n, n);
    for (Index k = 0; k < n; ++k) {
        eb.lambdas(k) = ext->lambdas[static_cast<size_t>(k)].convert_to<Real>();
        for (Index i = 0; i < n; ++i) {
            eb.U(i, k) =
                ext->U[static_cast<size_t>(k * n + i)].convert_to<Real>();
        }
    }
    finalize_basis(eb, eb.lambdas.cwiseAbs().maxCoeff(), warnings);
    // Mirror the sign convention and the exact stationary column into the
    // extended copy so both paths agree.
    for (Index k = 0; k < n; ++k) {
        Index imax = 0;
        Vector col = eb.U.col(k);
        col.cwiseAbs().maxCoeff(&imax);
        if (ext->U[static_cast<size_t>(k * n + imax)] * col(imax) < 0) {
            for (Index i = 0; i < n; ++i) {
                ext->U[static_cast<size_t>(k * n + i)] =
                    -ext->U[static_cast<size_t>(k * n + i)];
            }
        }
    }
    if (n == 1 || eb.lambdas(1) < 0) {
        for (Index i = 0; i < n; ++i) {
            ext->U[static_cast<size_t>(i)] = ext->pi[static_cast<size_t>(i)];
        }
    }
    eb.ext = std::move(ext);
    return eb;
}

Vector exact_solution(const Eigenbasis &eb, const Vector &p, const Real t) {
    if (t < 0) throw std::invalid_argument("t must be nonnegative");
    const Index n = eb.pi.size();

    if (eb.ext) {
        const EigenbasisExt &x = *eb.ext;
        BigFloat::default_precision(x.digits);
        std::vector<BigFloat> acc(static_cast<size_t>(n), BigFloat(0));
        const BigFloat tb(t);
        for (Index k = 0; k < n; ++k) {
            const BigFloat &lam = x.lambdas[static_cast<size_t>(k)];
            BigFloat c = 0;
            for (Index i = 0; i < n; ++i) {
                c += x.U[static_cast<size_t>(k * n + i)] * BigFloat(p(i)) /
                     x.pi[static_cast<size_t>(i)];
            }
            BigFloat w;
            if (lam == 0) {
                w = c;
            } else if (std::isinf(t)) {
                w = 0;
            } else {
                w = c * exp(tb * lam);
            }
            if (w == 0) continue;
            for (Index i = 0; i < n; ++i) {
                acc[static_cast<size_t>(i)] +=
                    w * x.U[static_cast<size_t>(k * n + i)];
            }
        }
        Vector out(n);
        for (Index i = 0; i < n; ++i) {
            out(i) = acc[static_cast<size_t>(i)].convert_to<Real>();
        }
        return out;
    }

    Vector out = Vector::Zero(n);
    for (Index k = 0; k < n; ++k) {
        const Real lam = eb.lambdas(k);
        const Real c = (eb.U.col(k).array() * p.array() / eb.pi.array()).sum();
        Real w;
        if (lam == 0) {
            w = c;
        } else if (std::isinf(t)) {
            w = 0;
        } else {
            w = c * std::exp(t * lam);
        }
        if (w != 0) out += w * eb.U.col(k);
    }
    return out;
}

Real max_offdiag_pi_inv(const RateMatrix &rm) {
    Real best = 0;
    for (Index j = 0; j < rm.K().outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(rm.K(), j); it; ++it) {
            if (it.row() == j) continue;
            best = std::max(best, it.value() / rm.pi()(it.row()));
        }
    }
    return best;
}

namespace {

Real exp_term(const Real t, const Real lam) {
    if (lam == 0) return 1;
    if (std::isinf(t)) return 0;
    return std::exp(t * lam);
}

Real min_one_alpha_beta(const DSpectra &sp, const Real t, const Real lam,
                        const Variant variant) {
    const Real e = exp_term(t, lam);
    const Real alpha = lam == 0 ? kInf : sp.rho_d / std::abs(lam) + e;
    Real beta;
    const Real abs_lam = std::abs(lam);
    if (variant == Variant::TypeB) {
        beta = abs_lam / sp.sigma_kss + 1 - e;
    } else {
        beta = (abs_lam + std::sqrt(2 * sp.offmax * abs_lam)) / sp.sigma_kss +
               1 - e;
    }
    return std::min({Real{1}, alpha, beta});
}

} // namespace

Real error_bound(const Eigenbasis &eb, const DSpectra &sp, const Real t,
                 const Vector &p, const Variant variant) {
    const PiMetric m(eb.pi);
    const Real p_norm = pi_norm(p, m);
    Real sum = 0;
    for (Index k = 0; k < eb.lambdas.size(); ++k) {
        const Real c = std::abs(pi_inner(eb.U.col(k), p, m)) / p_norm;
        sum += c * min_one_alpha_beta(sp, t, eb.lambdas(k), variant);
    }
    return std::min(sum, Real{1});
}

Real expected_error_bound(const Eigenbasis &eb, const DSpectra &sp,
                          const Real t, const Variant variant) {
    const Index n = eb.lambdas.size();
    Real sum = 0;
    for (Index k = 0; k < n; ++k) {
        const Real v = min_one_alpha_beta(sp, t, eb.lambdas(k), variant);
        sum += v * v;
    }
    return std::min(std::sqrt(sum / static_cast<Real>(n)), Real{1});
}

Real optimal_time(const Real a, const Real b) {
    if (!(a > 0) || !(b > 0)) throw std::invalid_argument("a, b must be positive");
    return std::numbers::ln2 / std::sqrt(a * b);
}

Real optimal_time_objective(const Real a, const Real b, const Real t) {
    if (!(a > 0) || !(b > 0)) throw std::invalid_argument("a, b must be positive");
    if (!(t >= 0)) throw std::invalid_argument("t must be nonnegative");

    const auto alpha = [&](Real lam) { return -a / lam + std::exp(t * lam); };
    const auto beta = [&](Real lam) { return -lam / b + 1 - std::exp(t * lam); };
    const auto g = [&](Real lam) { return alpha(lam) - beta(lam); };

    // alpha is strictly increasing and beta strictly decreasing on (-inf, 0),
    // so g has a unique root; bracket it by doubling outward from the natural
    // scale -sqrt(ab).
    Real lo = -std::sqrt(a * b), hi = lo;
    if (g(lo) < 0) {
        while (g(hi) < 0) {
            hi *= 0.5;
            if (hi > -1e-300) return kInf; // alpha explodes; cannot happen for finite a
        }
    } else {
        while (g(lo) >= 0) {
            lo *= 2;
            if (std::isinf(lo)) break;
        }
    }
    for (int it = 0; it < 200; ++it) {
        const Real mid = 0.5 * (lo + hi);
        if (!(mid < 0) || mid == lo || mid == hi) break;
        if (g(mid) < 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const Real lam = 0.5 * (lo + hi);
    return std::max(std::min(alpha(lam), beta(lam)),
                    std::min(alpha(lo), beta(lo)));
}

Real pi_error(const Vector &q, const Vector &x, const PiMetric &m,
              const Real p_norm) {
    return pi_norm(q - x, m) / p_norm;
}

Real linf_error(const Vector &q, const Vector &x) {
    return (q - x).cwiseAbs().maxCoeff();
}

Trajectory original_rcmc(const RateMatrix &rm, const Vector &p,
                         const Real t_max,
                         const std::vector<Index> *forced_pivots,
                         const Index dense_limit) {
    const Index n = rm.n();
    if (n > dense_limit) {
        throw DenseLimitExceeded("original form keeps Omega dense; n = " +
                                 std::to_string(n) + " exceeds " +
                                 std::to_string(dense_limit));
    }
    Matrix K = Matrix(rm.K());
    Matrix Omega = Matrix::Identity(n, n);
    Vector pvec = p;
    const Vector &pi = rm.pi();
    std::vector<char> active(static_cast<size_t>(n), 1);

    Trajectory traj;
    traj.entries.push_back({0, 0.0, p, TimeMethod::Diag, Variant::TypeA, false});

    for (Index step = 1;; ++step) {
        // Steady-state selection: maximum off-diagonal of K^(k-1), or the
        // forced pivot with the best matching row.
        Index jsel = -1, isel = -1;
        Real best = 0;
        if (forced_pivots != nullptr) {
            if (static_cast<size_t>(step - 1) >= forced_pivots->size()) break;
            jsel = (*forced_pivots)[static_cast<size_t>(step - 1)];
            if (!active[static_cast<size_t>(jsel)]) {
                throw ZeroPivot("forced pivot already contracted");
            }
            for (Index i = 0; i < n; ++i) {
                if (i == jsel || !active[static_cast<size_t>(i)]) continue;
                if (K(i, jsel) > best) {
                    best = K(i, jsel);
                    isel = i;
                }
            }
            if (isel < 0) throw ZeroPivot("forced pivot has a zero column");
        } else {
            for (Index j = 0; j < n; ++j) {
                if (!active[static_cast<size_t>(j)]) continue;
                for (Index i = 0; i < n; ++i) {
                    if (i == j || !active[static_cast<size_t>(i)]) continue;
                    if (K(i, j) > best) {
                        best = K(i, j);
                        isel = i;
                        jsel = j;
                    }
                }
            }
            if (isel < 0) break; // no positive rate left: rank reached
        }

        const Real t = 1.0 / K(isel, jsel);
        if (t > t_max) break;

        active[static_cast<size_t>(jsel)] = 0;
        Real denom = 0;
        for (Index i = 0; i < n; ++i) {
            if (active[static_cast<size_t>(i)]) denom += K(i, jsel);
        }
        if (!(denom > 0)) throw ZeroPivot("sigma undefined: zero column sum");
        const Real sigma = 1.0 / denom;

        for (Index i = 0; i < n; ++i) {
            if (!active[static_cast<size_t>(i)] || K(i, jsel) == 0) continue;
            Omega.row(i) += sigma * K(i, jsel) * Omega.row(jsel);
            pvec(i) += sigma * K(i, jsel) * pvec(jsel);
        }

        Vector q = Vector::Zero(n);
        for (Index i = 0; i < n; ++i) {
            if (!active[static_cast<size_t>(i)]) continue;
            const Real rowsum = Omega.row(i).dot(pi);
            if (rowsum == 0) continue;
            const Real w = pvec(i) / rowsum;
            q += w * (Omega.row(i).transpose().array() * pi.array()).matrix();
        }
        traj.entries.push_back(
            {step, t, q, TimeMethod::Diag, Variant::TypeA, false});

        Matrix Knew = K;
        for (Index l = 0; l < n; ++l) {
            if (!active[static_cast<size_t>(l)]) continue;
            const Real scale = 1.0 / (1.0 + sigma * K(jsel, l));
            for (Index i = 0; i < n; ++i) {
                if (!active[static_cast<size_t>(i)]) continue;
                Knew(i, l) = (K(i, l) + sigma * K(i, jsel) * K(jsel, l)) * scale;
            }
        }
        K = std::move(Knew);
    }
    return traj;
}

ErrorReport error_report(const RateMatrix &rm, const Vector &p,
                         const Variant variant, const TimeMethod method,
                         const Real t_max, const int precision_digits,
                         const int max_threads, const Tolerances &tol) {
    ErrorReport rep;
    const Eigenbasis eb =
        dense_eigendecompose(rm, precision_digits, 512, &rep.warnings);
    const PiMetric metric = rm.metric();
    const Real p_norm = pi_norm(p, metric);
    const Real offmax = max_offdiag_pi_inv(rm);
    const SpectralOptions sopt{1e-10, 5000};

    struct Snapshot {
        Index k;
        Real t;
        Vector q_raw;
        Vector q_post;
        DSpectra sp;
    };
    std::vector<Snapshot> snaps;

    ContractionState st(rm, tol);
    std::vector<Index> plan;
    if (variant == Variant::TypeB) {
        ContractionState scout(rm, tol);
        while (auto j = scout.select_steady()) {
            scout.schur_step(*j);
            plan.push_back(*j);
        }
        st.enable_m_factor(plan);
    }

    while (auto j = st.select_steady()) {
        const Real d_jj_prev = std::abs(st.d_diag(*j));
        st.schur_step(*j);

        DSpectra sp;
        sp.offmax = offmax;
        std::vector<Index> t_states;
        const SparseMatrix D = st.d_matrix(t_states);
        Vector pi_t(static_cast<Index>(t_states.size()));
        for (size_t c = 0; c < t_states.size(); ++c) {
            pi_t(static_cast<Index>(c)) = rm.pi()(t_states[c]);
        }
        try {
            sp.rho_d = spectral_radius(D, pi_t, sopt);
        } catch (const NoConvergence &) {
            sp.rho_d = st.gershgorin_rho_d();
            rep.warnings.push_back("rho(D) fell back to the Gershgorin bound");
        }
        const PiCholeskyFactor &chol = st.chol_k();
        Vector pi_s(chol.size());
        for (Index c = 0; c < chol.size(); ++c) {
            pi_s(c) = rm.pi()(chol.pivot_order()[static_cast<size_t>(c)]);
        }
        try {
            const Real rho_inv = spectral_radius(
                [&chol](const Vector &x, Vector &out) { out = chol.solve(x); },
                pi_s, sopt);
            sp.sigma_kss = rho_inv > 0 ? 1.0 / rho_inv : kInf;
        } catch (const NoConvergence &) {
            sp.sigma_kss = gershgorin_sigma_inv(chol);
            rep.warnings.push_back(
                "sigma(K_SS) fell back to the Gershgorin bound");
        }

        Real t;
        switch (method) {
        case TimeMethod::Diag: t = 1.0 / d_jj_prev; break;
        case TimeMethod::Eigen:
            t = sp.rho_d > 0
                    ? std::numbers::ln2 / std::sqrt(sp.sigma_kss * sp.rho_d)
                    : kInf;
            break;
        case TimeMethod::Gershgorin:
        default:
            t = reference_time(st, TimeMethod::Gershgorin, d_jj_prev);
            break;
        }
        if (std::isinf(t) || t > t_max) break;

        Snapshot snap;
        snap.k = st.k();
        snap.t = t;
        snap.q_raw = apply_v(st, variant, p);
        snap.q_post = project_pi(snap.q_raw, metric).q;
        snap.sp = sp;
        snaps.push_back(std::move(snap));
    }

    rep.records.resize(snaps.size());
    std::atomic<size_t> cursor{0};
    const int nthreads = std::max(
        1, std::min<int>(max_threads, static_cast<int>(snaps.size())));
    auto worker = [&]() {
        for (;;) {
            const size_t i = cursor.fetch_add(1);
            if (i >= snaps.size()) return;
            const Snapshot &s = snaps[i];
            ErrorRecord rec;
            rec.k = s.k;
            rec.t = s.t;
            const Vector x = exact_solution(eb, p, s.t);
            rec.pi_err = pi_error(s.q_post, x, metric, p_norm);
            rec.pi_err_pre = pi_error(s.q_raw, x, metric, p_norm);
            rec.linf_err = linf_error(s.q_post, x);
            rec.bound_a = error_bound(eb, s.sp, s.t, p, Variant::TypeA);
            rec.bound_b = error_bound(eb, s.sp, s.t, p, Variant::TypeB);
            rec.expected_bound = expected_error_bound(eb, s.sp, s.t, variant);
            rec.precision_limited = rec.bound_b < 1e-12;
            rep.records[i] = rec;
        }
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto &th : pool) th.join();
    }
    return rep;
}

} // namespace rcmc
