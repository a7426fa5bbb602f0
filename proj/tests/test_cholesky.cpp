#include "doctest.h"

#include "rcmc/cholesky.hpp"
#include "rcmc/contraction.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace rcmc;

namespace {

Matrix dense_css_product(const PiCholeskyFactor &chol) {
    const Matrix C = chol.dense_css();
    Vector pi_s(chol.size());
    for (Index c = 0; c < chol.size(); ++c) {
        pi_s(c) = chol.pi()(chol.pivot_order()[static_cast<size_t>(c)]);
    }
    return C * (C.transpose() * pi_s.cwiseInverse().asDiagonal());
}

} // namespace

TEST_CASE("two-state append reproduces the closed-form column") {
    Vector pi(2);
    pi << 0.5, 0.5;
    PiCholeskyFactor chol(pi);
    // D = K = [[-1, 1], [1, -1]], pivot j = 0.
    chol.append({{1, 1.0}}, -1.0, 0, 1e-300);
    CHECK(chol.diag(0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    REQUIRE(chol.off_column(0).size() == 1);
    CHECK(chol.off_column(0)[0].row == 1);
    CHECK(chol.off_column(0)[0].val ==
          doctest::Approx(-std::sqrt(0.5)).epsilon(1e-15));

    // C_SS (C_SS)* = -K_SS = 1.
    const Matrix prod = dense_css_product(chol);
    CHECK(prod(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("first append diagonal is sqrt(pi_j |K_jj|)") {
    const RateMatrix rm = oracle::random_rate_matrix(31, 8);
    ContractionState st(rm);
    const Index j = *st.select_steady();
    const Real d_jj = st.d_diag(j);
    st.schur_step(j);
    CHECK(st.chol_k().diag(0) ==
          doctest::Approx(std::sqrt(rm.pi()(j) * std::abs(d_jj)))
              .epsilon(1e-14));
}

TEST_CASE("append rejects pivots at the floor") {
    Vector pi(2);
    pi << 0.5, 0.5;
    PiCholeskyFactor chol(pi);
    CHECK_THROWS_AS(chol.append({}, 0.0, 0, 1e-300), PivotBreakdown);
    CHECK_THROWS_AS(chol.append({}, -1e-301, 0, 1e-300), PivotBreakdown);
}

TEST_CASE("factor invariant and solves match the dense oracle") {
    for (std::uint64_t seed = 40; seed < 52; ++seed) {
        const Index n = 4 + static_cast<Index>(seed % 7);
        const RateMatrix rm = oracle::random_rate_matrix(seed, n);
        const Matrix K = Matrix(rm.K());
        ContractionState st(rm);
        oracle::Rng rng(seed * 17);

        while (st.k() + 1 < n) {
            const auto j = st.select_steady();
            if (!j) break;
            st.schur_step(*j);
            const PiCholeskyFactor &chol = st.chol_k();

            // C_SS (C_SS)* = -K_SS against the dense assembly.
            Matrix kss(st.k(), st.k());
            for (Index r = 0; r < st.k(); ++r) {
                for (Index c = 0; c < st.k(); ++c) {
                    kss(r, c) = K(chol.pivot_order()[static_cast<size_t>(r)],
                                  chol.pivot_order()[static_cast<size_t>(c)]);
                }
            }
            const Matrix prod = dense_css_product(chol);
            CHECK((prod + kss).cwiseAbs().maxCoeff() <=
                  1e-9 * kss.cwiseAbs().maxCoeff());

            // Random right-hand side against the dense solve.
            Vector b(st.k());
            for (Index i = 0; i < st.k(); ++i) b(i) = rng.uniform(-1, 1);
            const Vector x = chol.solve(b);
            const Vector want = kss.partialPivLu().solve(b);
            CHECK((x - want).cwiseAbs().maxCoeff() <=
                  1e-10 * (want.cwiseAbs().maxCoeff() + 1));
        }
    }
}

TEST_CASE("sign pattern is exact: positive diagonal, nonpositive off-diagonals") {
    for (std::uint64_t seed = 60; seed < 70; ++seed) {
        const RateMatrix rm = oracle::random_rate_matrix(seed, 12, 0.4, 6.0, 5.0);
        ContractionState st(rm);
        while (auto j = st.select_steady()) {
            st.schur_step(*j);
            const PiCholeskyFactor &chol = st.chol_k();
            const Index k = st.k() - 1;
            CHECK(chol.diag(k) > 0);
            for (const auto &e : chol.off_column(k)) CHECK(e.val <= 0);
        }
    }
}

TEST_CASE("zero right-hand side solves to zero") {
    const RateMatrix rm = oracle::random_rate_matrix(71, 6);
    ContractionState st(rm);
    st.schur_step(*st.select_steady());
    st.schur_step(*st.select_steady());
    const Vector x = st.chol_k().solve(Vector::Zero(2));
    CHECK(x.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scalar system inverse") {
    // S = {0} in K = [[-1, 2], [1, -2]]: K_SS = [-1], so x = -b.
    Vector pi(2);
    pi << 2.0 / 3.0, 1.0 / 3.0;
    PiCholeskyFactor chol(pi);
    chol.append({{1, 1.0}}, -1.0, 0, 1e-300);
    Vector b(1);
    b << 1.0;
    CHECK(chol.solve(b)(0) == doctest::Approx(-1.0).epsilon(1e-15));
}
