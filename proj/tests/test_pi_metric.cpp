#include "doctest.h"

#include "rcmc/pi_metric.hpp"
#include "support/oracles.hpp"

using namespace rcmc;

TEST_CASE("pi inner product basics") {
    Vector pi(3);
    pi << 0.5, 0.25, 0.25;
    const PiMetric m(pi);

    CHECK(pi_inner(pi, pi, m) == doctest::Approx(1.0).epsilon(1e-15));

    Vector e0 = Vector::Zero(3), e1 = Vector::Zero(3);
    e0(0) = 1;
    e1(1) = 1;
    CHECK(pi_inner(e0, e1, m) == 0.0);
    CHECK(pi_inner(e1, e1, m) == doctest::Approx(4.0)); // 1 / pi_1
}

TEST_CASE("adjoint of the identity is the identity") {
    Vector pi(4);
    pi << 0.1, 0.2, 0.3, 0.4;
    const PiMetric m(pi);
    const Matrix I = Matrix::Identity(4, 4);
    CHECK((adjoint(I, m) - I).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a validated rate matrix is self-adjoint") {
    const RateMatrix rm = oracle::random_rate_matrix(7, 12);
    const PiMetric m = rm.metric();
    const Matrix K = Matrix(rm.K());
    const Matrix Kstar = adjoint(K, m);
    CHECK((K - Kstar).cwiseAbs().maxCoeff() <
          1e-12 * K.cwiseAbs().maxCoeff());

    // <a, Kb> = <Ka, b> on random vectors.
    oracle::Rng rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        Vector a(rm.n()), b(rm.n());
        for (Index i = 0; i < rm.n(); ++i) {
            a(i) = rng.uniform(-1, 1);
            b(i) = rng.uniform(-1, 1);
        }
        const Real lhs = pi_inner(a, K * b, m);
        const Real rhs = pi_inner(K * a, b, m);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("block adjoint swaps K_ST and K_TS") {
    const RateMatrix rm = oracle::random_rate_matrix(13, 10);
    const Matrix K = Matrix(rm.K());
    std::vector<Index> s{1, 4, 7};
    std::vector<Index> t;
    for (Index i = 0; i < rm.n(); ++i) {
        if (i != 1 && i != 4 && i != 7) t.push_back(i);
    }
    Matrix kst(s.size(), t.size()), kts(t.size(), s.size());
    Vector pi_s(3), pi_t(static_cast<Index>(t.size()));
    for (size_t r = 0; r < s.size(); ++r) pi_s(static_cast<Index>(r)) = rm.pi()(s[r]);
    for (size_t r = 0; r < t.size(); ++r) pi_t(static_cast<Index>(r)) = rm.pi()(t[r]);
    for (size_t r = 0; r < s.size(); ++r) {
        for (size_t c = 0; c < t.size(); ++c) {
            kst(static_cast<Index>(r), static_cast<Index>(c)) = K(s[r], t[c]);
            kts(static_cast<Index>(c), static_cast<Index>(r)) = K(t[c], s[r]);
        }
    }
    const Matrix kst_star = adjoint(kst, PiMetric(pi_s), PiMetric(pi_t));
    CHECK((kst_star - kts).cwiseAbs().maxCoeff() <
          1e-12 * K.cwiseAbs().maxCoeff());
}

TEST_CASE("adjoint is an involution, bitwise for power-of-two weights") {
    Vector pi(3);
    pi << 0.5, 0.25, 0.125;
    const PiMetric m(pi);
    oracle::Rng rng(3);
    Matrix A(3, 3);
    for (Index i = 0; i < 9; ++i) A(i / 3, i % 3) = rng.uniform(-2, 2);
    const Matrix back = adjoint(adjoint(A, m), m);
    CHECK((back - A).cwiseAbs().maxCoeff() == 0.0);
}
