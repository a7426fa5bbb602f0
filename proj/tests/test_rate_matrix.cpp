#include "doctest.h"

#include "rcmc/network.hpp"
#include "rcmc/rate_matrix.hpp"
#include "support/oracles.hpp"

using namespace rcmc;

namespace {

SparseMatrix dense_to_sparse(const Matrix &A) {
    SparseMatrix S(A.rows(), A.cols());
    std::vector<Triplet> trips;
    for (Index j = 0; j < A.cols(); ++j) {
        for (Index i = 0; i < A.rows(); ++i) {
            if (A(i, j) != 0) trips.emplace_back(i, j, A(i, j));
        }
    }
    S.setFromTriplets(trips.begin(), trips.end());
    return S;
}

SparseMatrix k2() {
    Matrix K(2, 2);
    K << -1, 2, 1, -2;
    return dense_to_sparse(K);
}

SparseMatrix k3() {
    Matrix K(3, 3);
    K << -1, 2, 0, 1, -3, 1, 0, 1, -1;
    return dense_to_sparse(K);
}

} // namespace

TEST_CASE("validate accepts the 2-state example") {
    Vector pi(2);
    pi << 2.0 / 3.0, 1.0 / 3.0;
    const RateMatrix rm = validate(k2(), pi);
    CHECK(rm.n() == 2);
    CHECK(rm.K().coeff(0, 1) == 2.0);
    CHECK(rm.K().coeff(0, 0) == -1.0); // diagonal recomputed from off-diagonals
}

TEST_CASE("validate accepts the zero matrix with uniform pi") {
    SparseMatrix K(3, 3);
    const Vector pi = Vector::Constant(3, 1.0 / 3.0);
    CHECK_NOTHROW(validate(K, pi));
}

TEST_CASE("validate reports a detailed balance violation") {
    Matrix Kd(2, 2);
    Kd << -1, 1, 1, -1;
    Vector pi(2);
    pi << 2.0 / 3.0, 1.0 / 3.0;
    const ValidationReport rep = validate_report(dense_to_sparse(Kd), pi);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].axiom == Axiom::DetailedBalanceViolation);
    CHECK(rep.violations[0].i == 0);
    CHECK(rep.violations[0].j == 1);
    CHECK_THROWS_AS(validate(dense_to_sparse(Kd), pi), ValidationError);
}

TEST_CASE("validate reports every violated axiom at once") {
    Matrix Kd(2, 2);
    Kd << -1, -2, 1, -1; // negative off-diagonal and broken column sums
    Vector pi(2);
    pi << 0.5, -0.5;
    const ValidationReport rep = validate_report(dense_to_sparse(Kd), pi);
    CHECK(rep.violations.size() == 3);
    CHECK(!rep.format().empty());
}

TEST_CASE("stationary_from_balance recovers the 2-state distribution") {
    const Vector pi = stationary_from_balance(k2());
    CHECK(pi(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(pi(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("symmetric K forces the uniform distribution") {
    Matrix Kd(3, 3);
    Kd << -3, 1, 2, 1, -2, 1, 2, 1, -3;
    const Vector pi = stationary_from_balance(dense_to_sparse(Kd));
    for (Index i = 0; i < 3; ++i) {
        CHECK(pi(i) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    }
}

TEST_CASE("3-state chain distribution") {
    const Vector pi = stationary_from_balance(k3());
    CHECK(pi(0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(pi(1) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(pi(2) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("disconnected graphs are rejected with the components named") {
    Matrix Kd = Matrix::Zero(4, 4);
    Kd(0, 1) = 1;
    Kd(1, 0) = 1;
    Kd(2, 3) = 2;
    Kd(3, 2) = 1;
    Kd.diagonal() = -Kd.colwise().sum();
    CHECK_THROWS_AS(stationary_from_balance(dense_to_sparse(Kd)),
                    DisconnectedGraph);
}

TEST_CASE("cycle inconsistency is detected") {
    // Triangle whose rate products around the cycle disagree: no interior pi
    // satisfies detailed balance.
    Matrix Kd = Matrix::Zero(3, 3);
    Kd(1, 0) = 1;
    Kd(0, 1) = 1;
    Kd(2, 1) = 1;
    Kd(1, 2) = 1;
    Kd(0, 2) = 1;
    Kd(2, 0) = 3;
    Kd.diagonal() = -Kd.colwise().sum();
    CHECK_THROWS_AS(stationary_from_balance(dense_to_sparse(Kd)),
                    BalanceInconsistent);
}

TEST_CASE("one-sided edges admit no interior stationary distribution") {
    Matrix Kd = Matrix::Zero(2, 2);
    Kd(1, 0) = 1;
    Kd.diagonal() = -Kd.colwise().sum();
    CHECK_THROWS_AS(stationary_from_balance(dense_to_sparse(Kd)),
                    BalanceInconsistent);
}

TEST_CASE("laplacian construction always validates and pi round-trips") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const RateMatrix rm =
            oracle::random_rate_matrix(seed, 2 + static_cast<Index>(seed % 29));
        const Vector rec = stationary_from_balance(rm.K());
        CHECK((rec - rm.pi()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("components are labeled in order of first appearance") {
    Matrix Kd = Matrix::Zero(4, 4);
    Kd(0, 2) = 1;
    Kd(2, 0) = 1;
    Kd(1, 3) = 1;
    Kd(3, 1) = 1;
    Kd.diagonal() = -Kd.colwise().sum();
    Vector pi = Vector::Constant(4, 0.25);
    const RateMatrix rm = validate(dense_to_sparse(Kd), pi);
    const std::vector<int> comp = rm.components();
    CHECK(comp == std::vector<int>{0, 1, 0, 1});
}
