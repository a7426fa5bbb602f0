#include "doctest.h"

#include "rcmc/propagator.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <numbers>

using namespace rcmc;

namespace {

RateMatrix chain3() {
    SparseMatrix S(3, 3);
    std::vector<Triplet> trips{{0, 0, -1}, {1, 0, 1},  {0, 1, 2}, {1, 1, -3},
                               {2, 1, 1},  {1, 2, 1},  {2, 2, -1}};
    S.setFromTriplets(trips.begin(), trips.end());
    Vector pi(3);
    pi << 0.5, 0.25, 0.25;
    return validate(S, pi);
}

RateMatrix two_state() {
    SparseMatrix S(2, 2);
    std::vector<Triplet> trips{{0, 0, -1}, {1, 0, 1}, {0, 1, 2}, {1, 1, -2}};
    S.setFromTriplets(trips.begin(), trips.end());
    Vector pi(2);
    pi << 2.0 / 3.0, 1.0 / 3.0;
    return validate(S, pi);
}

// Assembles V by applying it to every basis vector.
Matrix assemble_v(const ContractionState &st, Variant variant) {
    const Index n = st.n();
    Matrix V(n, n);
    for (Index i = 0; i < n; ++i) {
        Vector e = Vector::Zero(n);
        e(i) = 1;
        V.col(i) = apply_v(st, variant, e);
    }
    return V;
}

ContractionState contracted(const RateMatrix &rm, const std::vector<Index> &s,
                            bool with_m) {
    ContractionState st(rm);
    if (with_m) {
        std::vector<Index> plan = s;
        ContractionState scout(rm);
        for (const Index j : s) scout.schur_step(j);
        while (auto j = scout.select_steady()) {
            scout.schur_step(*j);
            plan.push_back(*j);
        }
        st.enable_m_factor(plan);
    }
    for (const Index j : s) st.schur_step(j);
    return st;
}

} // namespace

TEST_CASE("omega is the identity before any contraction") {
    const RateMatrix rm = chain3();
    ContractionState st(rm);
    Vector p(3);
    p << 0.2, 0.5, 0.3;
    CHECK((omega_apply(st, p) - p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("omega drops p_T unchanged when p_S vanishes") {
    const RateMatrix rm = chain3();
    ContractionState st(rm);
    st.schur_step(1);
    Vector p = Vector::Zero(3);
    p(0) = 1;
    const Vector w = omega_apply(st, p);
    CHECK(w(0) == 1.0);
    CHECK(w(1) == 0.0);
}

TEST_CASE("omega maps pi to M pi_T") {
    for (std::uint64_t seed = 500; seed < 508; ++seed) {
        const Index n = 5 + static_cast<Index>(seed % 5);
        const RateMatrix rm = oracle::random_rate_matrix(seed, n);
        const Matrix K = Matrix(rm.K());
        oracle::Rng rng(seed);
        const auto s = oracle::random_subset(rng, n, 1 + rng.uniform_int(n - 2));
        const ContractionState st = contracted(rm, s, false);

        const Vector got = omega_apply(st, rm.pi());
        std::vector<Index> sorted_s = st.pivot_order();
        std::sort(sorted_s.begin(), sorted_s.end());
        const Matrix M = oracle::dense_m(K, rm.pi(), sorted_s);
        Vector pi_t(got.size());
        const std::vector<Index> t = st.transient();
        for (size_t c = 0; c < t.size(); ++c) pi_t(static_cast<Index>(c)) = rm.pi()(t[c]);
        const Vector want = M * pi_t;
        CHECK((got - want).cwiseAbs().maxCoeff() <=
              1e-10 * want.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("apply_v is the identity with an empty steady set") {
    const RateMatrix rm = chain3();
    ContractionState st(rm);
    Vector p(3);
    p << 0.2, 0.5, 0.3;
    CHECK((apply_v(st, Variant::TypeA, p) - p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pi is a fixed point of V for both types") {
    for (std::uint64_t seed = 510; seed < 516; ++seed) {
        const Index n = 6;
        const RateMatrix rm = oracle::random_rate_matrix(seed, n);
        oracle::Rng rng(seed);
        const auto s = oracle::random_subset(rng, n, 2);
        for (const Variant variant : {Variant::TypeA, Variant::TypeB}) {
            const ContractionState st =
                contracted(rm, s, variant == Variant::TypeB);
            const Vector got = apply_v(st, variant, rm.pi());
            CHECK((got - rm.pi()).cwiseAbs().maxCoeff() <=
                  1e-10 * rm.pi().maxCoeff());
        }
    }
}

TEST_CASE("contraction to a single transient state maps onto pi") {
    const RateMatrix rm = chain3();
    for (const Variant variant : {Variant::TypeA, Variant::TypeB}) {
        const ContractionState st = contracted(rm, {1, 0}, variant == Variant::TypeB);
        Vector p = Vector::Zero(3);
        p(0) = 1;
        const Vector got = apply_v(st, variant, p);
        CHECK((got - rm.pi()).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("apply_v matches the dense block assembly on the chain") {
    const RateMatrix rm = chain3();
    const Matrix K = Matrix(rm.K());
    Vector p = Vector::Zero(3);
    p(0) = 1;
    for (const Variant variant : {Variant::TypeA, Variant::TypeB}) {
        const ContractionState st = contracted(rm, {1}, variant == Variant::TypeB);
        const Vector got = apply_v(st, variant, p);
        CHECK(got.sum() == doctest::Approx(1.0).epsilon(1e-12));
        const Matrix V = oracle::dense_v(K, rm.pi(), {1}, variant);
        const Vector want = V * p;
        CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("type B without its factor is rejected") {
    const RateMatrix rm = chain3();
    const ContractionState st = contracted(rm, {1}, false);
    Vector p = Vector::Zero(3);
    p(0) = 1;
    CHECK_THROWS_AS(apply_v(st, Variant::TypeB, p), TypeBWithoutMFactor);
}

TEST_CASE("V-properties hold on random instances and bipartitions") {
    for (std::uint64_t seed = 520; seed < 540; ++seed) {
        const Index n = 4 + static_cast<Index>(seed % 12);
        const RateMatrix rm = oracle::random_rate_matrix(seed, n, 0.5, 2.5);
        const Matrix K = Matrix(rm.K());
        const PiMetric metric = rm.metric();
        oracle::Rng rng(seed ^ 0xabc);
        const auto s = oracle::random_subset(rng, n, 1 + rng.uniform_int(n - 1));

        for (const Variant variant : {Variant::TypeA, Variant::TypeB}) {
            const ContractionState st =
                contracted(rm, s, variant == Variant::TypeB);
            const Matrix V = assemble_v(st, variant);

            // V1 for Type A.
            if (variant == Variant::TypeA) {
                CHECK(V.minCoeff() >= -1e-12);
            }
            // V2: column sums are one.
            CHECK((V.colwise().sum().array() - 1).abs().maxCoeff() <= 1e-10);
            // V3: self-adjointness.
            const Matrix resid =
                V * rm.pi().asDiagonal() -
                rm.pi().asDiagonal() * Matrix(V.transpose());
            CHECK(resid.cwiseAbs().maxCoeff() <=
                  1e-9 * (V.cwiseAbs().maxCoeff() + 1));
            // V4: image inside the QSSA subspace.
            Matrix ks(st.k(), n);
            Index r = 0;
            std::vector<Index> sorted_s = st.pivot_order();
            std::sort(sorted_s.begin(), sorted_s.end());
            for (const Index i : sorted_s) {
                ks.row(r++) = K.row(i);
            }
            const Matrix qssa = ks * V;
            CHECK(qssa.cwiseAbs().maxCoeff() <=
                  1e-9 * K.cwiseAbs().maxCoeff());
            // Spectral box [0, 1].
            const Vector evs = oracle::dense_eigenvalues(V, rm.pi());
            CHECK(evs.minCoeff() >= -1e-9);
            CHECK(evs.maxCoeff() <= 1 + 1e-9);
            // Type B idempotence.
            if (variant == Variant::TypeB) {
                const Matrix vv = V * V - V;
                CHECK(oracle::dense_spectral_radius(vv, rm.pi()) <= 1e-8);
            }
            // Self-adjointness through random vectors.
            Vector a(n), b(n);
            for (Index i = 0; i < n; ++i) {
                a(i) = rng.uniform(-1, 1);
                b(i) = rng.uniform(-1, 1);
            }
            CHECK(pi_inner(a, V * b, metric) ==
                  doctest::Approx(pi_inner(V * a, b, metric)).epsilon(1e-9));
        }
    }
}

TEST_CASE("reference times on the chain") {
    const RateMatrix rm = chain3();
    ContractionState st(rm);
    const Index j = *st.select_steady();
    const Real captured = std::abs(st.d_diag(j));
    st.schur_step(j);

    CHECK(reference_time(st, TimeMethod::Diag, captured) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(reference_time(st, TimeMethod::Eigen, captured) ==
          doctest::Approx(std::numbers::ln2 / std::sqrt(3.0)).epsilon(1e-9));

    // Gershgorin surrogates: sigma-hat <= sigma, rho-hat >= rho, so the
    // surrogate time cannot be shorter than ln2 / sqrt(sigma rho-hat) etc.
    const Real tg = reference_time(st, TimeMethod::Gershgorin, captured);
    CHECK(tg > 0);
    CHECK(std::isfinite(tg));
}

TEST_CASE("equal spectra give ln2 / a") {
    // sigma = rho = a: the eigen formula collapses.
    const Real a = 3.7;
    CHECK(std::numbers::ln2 / std::sqrt(a * a) ==
          doctest::Approx(std::numbers::ln2 / a));
}

TEST_CASE("run with t_max = 0 emits only the initial snapshot") {
    const RateMatrix rm = chain3();
    Vector p = Vector::Zero(3);
    p(0) = 1;
    const Trajectory traj = run(rm, p, Variant::TypeA, TimeMethod::Diag, 0.0);
    REQUIRE(traj.entries.size() == 1);
    CHECK(traj.entries[0].t == 0.0);
    CHECK((traj.entries[0].q - p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rank-one system under eigen times ends at equilibrium immediately") {
    const RateMatrix rm = two_state();
    Vector p = Vector::Zero(2);
    p(0) = 1;
    for (const Variant variant : {Variant::TypeA, Variant::TypeB}) {
        const Trajectory traj = run(rm, p, variant, TimeMethod::Eigen,
                                    std::numeric_limits<Real>::infinity());
        REQUIRE(traj.entries.size() == 2);
        CHECK(traj.entries[0].t == 0.0);
        CHECK(std::isinf(traj.entries[1].t));
        CHECK(traj.entries[1].synthetic);
        CHECK((traj.entries[1].q - rm.pi()).cwiseAbs().maxCoeff() <= 1e-15);
    }
}

TEST_CASE("chain run emits the frozen diag snapshot") {
    const RateMatrix rm = chain3();
    const Matrix K = Matrix(rm.K());
    Vector p = Vector::Zero(3);
    p(0) = 1;
    const Trajectory traj = run(rm, p, Variant::TypeB, TimeMethod::Diag,
                                std::numeric_limits<Real>::infinity());
    REQUIRE(traj.entries.size() >= 2);
    CHECK(traj.entries[1].k == 1);
    CHECK(traj.entries[1].t == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    const Matrix V = oracle::dense_v(K, rm.pi(), {1}, Variant::TypeB);
    const Vector want = project_pi(V * p, rm.metric()).q;
    CHECK((traj.entries[1].q - want).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("conservation and nonnegativity along full runs") {
    for (std::uint64_t seed = 560; seed < 568; ++seed) {
        const Index n = 6 + static_cast<Index>(seed % 10);
        const RateMatrix rm = oracle::random_rate_matrix(seed, n, 0.4, 3.0);
        Vector p = Vector::Zero(n);
        p(static_cast<Index>(seed % static_cast<std::uint64_t>(n))) = 1;
        for (const Variant variant : {Variant::TypeA, Variant::TypeB}) {
            const Trajectory traj =
                run(rm, p, variant, TimeMethod::Gershgorin,
                    std::numeric_limits<Real>::infinity());
            for (const auto &e : traj.entries) {
                CHECK(std::abs(e.q.sum() - 1.0) <= 1e-12);
                CHECK(e.q.minCoeff() >= 0.0);
            }
            CHECK(traj.entries.back().synthetic);
        }
    }
}

TEST_CASE("type A raw outputs are nonnegative up to roundoff") {
    for (std::uint64_t seed = 570; seed < 578; ++seed) {
        const Index n = 8;
        const RateMatrix rm = oracle::random_rate_matrix(seed, n, 0.5, 2.0);
        oracle::Rng rng(seed);
        const auto s = oracle::random_subset(rng, n, 3);
        const ContractionState st = contracted(rm, s, false);
        Vector p = Vector::Zero(n);
        p(st.transient()[0]) = 1;
        const Vector v = apply_v(st, Variant::TypeA, p);
        CHECK(v.minCoeff() >= -1e-14 * v.maxCoeff());
        CHECK(v.sum() == doctest::Approx(1.0).epsilon(1e-11));
    }
}

TEST_CASE("limiting distribution respects connected components") {
    SparseMatrix S(4, 4);
    std::vector<Triplet> trips{{0, 0, -1}, {1, 0, 1},  {0, 1, 1}, {1, 1, -1},
                               {2, 2, -2}, {3, 2, 2},  {2, 3, 1}, {3, 3, -1}};
    S.setFromTriplets(trips.begin(), trips.end());
    Vector pi(4);
    // Components {0,1} uniform and {2,3} with balance 2:1 toward state 3.
    pi << 0.25, 0.25, 1.0 / 6.0, 2.0 / 6.0;
    const RateMatrix rm = validate(S, pi);
    Vector p(4);
    p << 1.0, 0.0, 0.0, 0.0;
    const Vector q = limiting_distribution(rm, p);
    CHECK(q(0) == doctest::Approx(0.5));
    CHECK(q(1) == doctest::Approx(0.5));
    CHECK(q(2) == 0.0);
    CHECK(q(3) == 0.0);
}
