#include "rcmc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rcmc {

Real gershgorin_rho(const SparseMatrix &A) {
    const Index n = A.rows();
    Vector row = Vector::Zero(n), col = Vector::Zero(n);
    for (Index j = 0; j < A.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(A, j); it; ++it) {
            const Real a = std::abs(it.value());
            row(it.row()) += a;
            col(j) += a;
        }
    }
    if (n == 0) return 0;
    return std::min(row.maxCoeff(), col.maxCoeff());
}

Real gershgorin_rho(const Matrix &A) {
    if (A.rows() == 0) return 0;
    const Matrix absA = A.cwiseAbs();
    return std::min(absA.rowwise().sum().maxCoeff(),
                    absA.colwise().sum().maxCoeff());
}

Real gershgorin_sigma_inv(const PiCholeskyFactor &chol) {
    const Index k = chol.size();
    if (k == 0) return std::numeric_limits<Real>::infinity();

    // Row sums of |K_SS^{-1}| = -K_SS^{-1} 1; column sums via the adjoint:
    // K_SS^T y = 1 reduces to y = Pi_S^{-1} K_SS^{-1} pi_S.
    Vector ones = Vector::Ones(k);
    Vector pi_s(k);
    for (Index c = 0; c < k; ++c) pi_s(c) = chol.pi()(chol.pivot_order()[static_cast<size_t>(c)]);

    const Vector x = -chol.solve(ones);
    const Vector y = -(chol.solve(pi_s).cwiseQuotient(pi_s));
    const Real rho_inv = std::min(x.maxCoeff(), y.maxCoeff());
    if (!(rho_inv > 0)) return std::numeric_limits<Real>::infinity();
    return 1.0 / rho_inv;
}

namespace {

// Max-|eigenvalue| of a symmetric tridiagonal (alpha, beta) together with the
// residual weight |beta_last * s_last| of the corresponding Ritz vector.
struct RitzTop {
    Real theta = 0;
    Real weight = 1; // |last component of the eigenvector|
    Vector s;        // eigenvector in Krylov coordinates
};

RitzTop top_ritz(const std::vector<Real> &alpha, const std::vector<Real> &beta) {
    const Index k = static_cast<Index>(alpha.size());
    Matrix T = Matrix::Zero(k, k);
    for (Index i = 0; i < k; ++i) {
        T(i, i) = alpha[static_cast<size_t>(i)];
        if (i + 1 < k) {
            T(i, i + 1) = beta[static_cast<size_t>(i)];
            T(i + 1, i) = beta[static_cast<size_t>(i)];
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(T);
    Index best = 0;
    es.eigenvalues().cwiseAbs().maxCoeff(&best);
    RitzTop out;
    out.theta = es.eigenvalues()(best);
    out.s = es.eigenvectors().col(best);
    out.weight = std::abs(out.s(k - 1));
    return out;
}

} // namespace

Real spectral_radius(const std::function<void(const Vector &, Vector &)> &apply,
                     const Vector &pi_sub, const SpectralOptions &opt) {
    const Index m = pi_sub.size();
    if (m == 0) return 0;

    const Vector sqrt_pi = pi_sub.cwiseSqrt();
    // B = Pi^{-1/2} A Pi^{1/2} is symmetric; matvec through the A callback.
    Vector scratch_in(m), scratch_out(m);
    auto apply_b = [&](const Vector &w, Vector &out) {
        scratch_in = w.cwiseProduct(sqrt_pi);
        apply(scratch_in, scratch_out);
        out = scratch_out.cwiseQuotient(sqrt_pi);
    };

    // Start direction 1/||1||_pi mapped to w-space, scaled safely against
    // overflow for very small weights.
    const Real pi_min = pi_sub.minCoeff();
    Vector w(m);
    for (Index i = 0; i < m; ++i) w(i) = std::sqrt(pi_min / pi_sub(i));
    w /= w.norm();

    const Index max_dim = std::min<Index>(m, 400);
    int matvecs = 0;
    Real best_theta = 0;
    bool have_prev = false;
    Real prev_theta = 0;

    while (true) {
        std::vector<Vector> basis;
        std::vector<Real> alpha, beta;
        basis.push_back(w);
        Vector v = w;
        Real scale_est = 0;

        for (Index it = 0; it < max_dim; ++it) {
            Vector av(m);
            apply_b(v, av);
            ++matvecs;
            const Real a = v.dot(av);
            alpha.push_back(a);
            av -= a * v;
            if (it > 0) av -= beta.back() * basis[basis.size() - 2];
            // full reorthogonalization
            for (const Vector &u : basis) av -= u.dot(av) * u;
            const Real b = av.norm();
            scale_est = std::max(scale_est, std::abs(a) + b);

            const bool breakdown =
                !(b > scale_est * 1e2 * std::numeric_limits<Real>::epsilon());
            const bool check = breakdown || it + 1 >= max_dim ||
                               (it % 4 == 3) || matvecs >= opt.max_iter;
            if (check) {
                const RitzTop top = top_ritz(alpha, beta);
                best_theta = top.theta;
                const Real resid = breakdown ? 0 : b * top.weight;
                const Real scale = std::max(std::abs(top.theta),
                                            std::numeric_limits<Real>::min());
                const bool theta_stable =
                    have_prev && std::abs(top.theta - prev_theta) <=
                                     opt.tol * scale;
                have_prev = true;
                prev_theta = top.theta;
                if (breakdown || (resid <= opt.tol * scale && theta_stable)) {
                    return std::abs(top.theta);
                }
                if (matvecs >= opt.max_iter) {
                    throw NoConvergence(
                        "Lanczos did not reach the requested tolerance in " +
                        std::to_string(opt.max_iter) + " matvecs");
                }
            }
            if (breakdown) return std::abs(best_theta);
            beta.push_back(b);
            v = av / b;
            basis.push_back(v);
        }

        // Restart from the best Ritz vector of the exhausted Krylov space.
        const RitzTop top = top_ritz(alpha, beta);
        Vector restart = Vector::Zero(m);
        for (size_t i = 0; i < basis.size() && i < static_cast<size_t>(top.s.size()); ++i) {
            restart += top.s(static_cast<Index>(i)) * basis[i];
        }
        const Real nrm = restart.norm();
        if (!(nrm > 0)) return std::abs(top.theta);
        w = restart / nrm;
        have_prev = true;
        prev_theta = top.theta;
    }
}

} // namespace rcmc
