#include "rcmc/rate_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace rcmc {

std::string axiom_name(Axiom a) {
    switch (a) {
    case Axiom::NegativeOffDiagonal: return "NegativeOffDiagonal";
    case Axiom::ColumnSumViolation: return "ColumnSumViolation";
    case Axiom::DetailedBalanceViolation: return "DetailedBalanceViolation";
    case Axiom::NonPositivePi: return "NonPositivePi";
    }
    return "Unknown";
}

std::string ValidationReport::format() const {
    if (ok()) return "valid rate constant matrix";
    std::ostringstream os;
    os << "rate constant matrix validation failed:";
    for (const auto &v : violations) {
        os << "\n  " << axiom_name(v.axiom) << " worst at (" << v.i << ", "
           << v.j << "), residual " << v.magnitude;
    }
    return os.str();
}

namespace {

// Worst-offender accumulator for one axiom.
struct Worst {
    bool hit = false;
    Index i = -1, j = -1;
    Real mag = 0;

    void update(Index ii, Index jj, Real m) {
        if (!hit || m > mag) {
            hit = true;
            i = ii;
            j = jj;
            mag = m;
        }
    }
};

} // namespace

ValidationReport validate_report(const SparseMatrix &K, const Vector &pi,
                                 const Tolerances &tol) {
    tol.check();
    const Index n = K.rows();
    if (K.cols() != n) throw std::invalid_argument("K must be square");
    if (pi.size() != n) throw std::invalid_argument("pi dimension mismatch");

    ValidationReport rep;

    Worst bad_pi;
    bool pi_positive = true;
    for (Index i = 0; i < n; ++i) {
        if (!(pi(i) > 0) || !std::isfinite(pi(i))) {
            pi_positive = false;
            bad_pi.update(i, i, pi(i) > 0 ? 0 : -pi(i));
        }
    }
    const Real sum_pi = pi.sum();
    if (std::abs(sum_pi - 1.0) > tol.tol_rel) {
        bad_pi.update(-1, -1, std::abs(sum_pi - 1.0));
    }
    if (bad_pi.hit) {
        rep.violations.push_back(
            {Axiom::NonPositivePi, bad_pi.i, bad_pi.j, bad_pi.mag});
    }

    Worst neg_off, col_sum, balance;
    Vector col_abs_max = Vector::Zero(n);
    Vector col_total = Vector::Zero(n);
    for (Index j = 0; j < K.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(K, j); it; ++it) {
            const Index i = it.row();
            const Real v = it.value();
            if (!std::isfinite(v)) {
                neg_off.update(i, j, std::numeric_limits<Real>::infinity());
                continue;
            }
            col_abs_max(j) = std::max(col_abs_max(j), std::abs(v));
            col_total(j) += v;
            if (i != j) {
                if (v < 0) neg_off.update(i, j, -v);
                if (i < j && pi_positive) {
                    const Real fwd = v * pi(j);
                    const Real bwd = K.coeff(j, i) * pi(i);
                    const Real scale = std::max(std::abs(fwd), std::abs(bwd));
                    const Real resid = std::abs(fwd - bwd);
                    if (resid > tol.tol_rel * scale) {
                        balance.update(i, j, resid);
                    }
                }
            }
        }
    }
    for (Index j = 0; j < n; ++j) {
        const Real resid = std::abs(col_total(j));
        if (resid > tol.tol_abs + tol.tol_rel * col_abs_max(j)) {
            col_sum.update(-1, j, resid);
        }
    }

    if (neg_off.hit) {
        rep.violations.push_back(
            {Axiom::NegativeOffDiagonal, neg_off.i, neg_off.j, neg_off.mag});
    }
    if (col_sum.hit) {
        rep.violations.push_back(
            {Axiom::ColumnSumViolation, col_sum.i, col_sum.j, col_sum.mag});
    }
    if (balance.hit) {
        rep.violations.push_back({Axiom::DetailedBalanceViolation, balance.i,
                                  balance.j, balance.mag});
    }
    return rep;
}

RateMatrix validate(const SparseMatrix &K, const Vector &pi,
                    const Tolerances &tol) {
    ValidationReport rep = validate_report(K, pi, tol);
    if (!rep.ok()) throw ValidationError(std::move(rep));

    // Rebuild with diagonals as negated off-diagonal column sums so that
    // RCM2 holds exactly in stored form.
    const Index n = K.rows();
    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(K.nonZeros()) + static_cast<size_t>(n));
    Vector diag = Vector::Zero(n);
    for (Index j = 0; j < K.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(K, j); it; ++it) {
            if (it.row() == j) continue;
            if (it.value() == 0) continue;
            trips.emplace_back(it.row(), j, it.value());
            diag(j) -= it.value();
        }
    }
    for (Index j = 0; j < n; ++j) {
        if (diag(j) != 0) trips.emplace_back(j, j, diag(j));
    }
    SparseMatrix clean(n, n);
    clean.setFromTriplets(trips.begin(), trips.end());
    clean.makeCompressed();
    return RateMatrix(std::move(clean), pi);
}

std::vector<int> RateMatrix::components() const {
    const Index n = m_K.rows();
    std::vector<int> comp(static_cast<size_t>(n), -1);
    int next = 0;
    for (Index s = 0; s < n; ++s) {
        if (comp[static_cast<size_t>(s)] >= 0) continue;
        comp[static_cast<size_t>(s)] = next;
        std::queue<Index> q;
        q.push(s);
        while (!q.empty()) {
            const Index j = q.front();
            q.pop();
            for (SparseMatrix::InnerIterator it(m_K, j); it; ++it) {
                const Index i = it.row();
                if (i == j || it.value() == 0) continue;
                if (comp[static_cast<size_t>(i)] < 0) {
                    comp[static_cast<size_t>(i)] = next;
                    q.push(i);
                }
            }
        }
        ++next;
    }
    return comp;
}

Vector stationary_from_balance(const SparseMatrix &K, const Tolerances &tol) {
    tol.check();
    const Index n = K.rows();
    if (K.cols() != n) throw std::invalid_argument("K must be square");
    if (n == 0) throw std::invalid_argument("empty matrix");

    // Undirected adjacency from stored off-diagonal pattern.
    std::vector<std::vector<Index>> adj(static_cast<size_t>(n));
    for (Index j = 0; j < K.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(K, j); it; ++it) {
            const Index i = it.row();
            if (i == j || it.value() == 0) continue;
            if (it.value() < 0) {
                throw BalanceInconsistent(
                    "negative off-diagonal entry; not a rate constant matrix");
            }
            adj[static_cast<size_t>(j)].push_back(i);
        }
    }

    // BFS from state 0, propagating log pi_i = log pi_j + log K_ij - log K_ji
    // along tree edges.
    Vector log_pi = Vector::Constant(n, std::nan(""));
    std::vector<char> seen(static_cast<size_t>(n), 0);
    log_pi(0) = 0;
    seen[0] = 1;
    Index reached = 1;
    std::queue<Index> q;
    q.push(0);
    while (!q.empty()) {
        const Index j = q.front();
        q.pop();
        for (const Index i : adj[static_cast<size_t>(j)]) {
            if (seen[static_cast<size_t>(i)]) continue;
            const Real kij = K.coeff(i, j);
            const Real kji = K.coeff(j, i);
            if (!(kij > 0) || !(kji > 0)) {
                throw BalanceInconsistent(
                    "one-sided edge (" + std::to_string(i) + ", " +
                    std::to_string(j) +
                    "): detailed balance admits no interior pi");
            }
            log_pi(i) = log_pi(j) + std::log(kij) - std::log(kji);
            seen[static_cast<size_t>(i)] = 1;
            ++reached;
            q.push(i);
        }
    }
    if (reached < n) {
        std::vector<Index> missing;
        for (Index i = 0; i < n; ++i) {
            if (!seen[static_cast<size_t>(i)]) missing.push_back(i);
        }
        std::ostringstream os;
        os << "supporting graph is disconnected; " << (n - reached)
           << " states unreachable from state 0 (first few:";
        for (size_t k = 0; k < missing.size() && k < 8; ++k) {
            os << ' ' << missing[k];
        }
        os << ")";
        throw DisconnectedGraph(os.str());
    }

    // Every stored edge must be consistent with the tree-propagated pi.
    for (Index j = 0; j < K.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(K, j); it; ++it) {
            const Index i = it.row();
            if (i >= j || it.value() == 0) continue;
            const Real kij = it.value();
            const Real kji = K.coeff(j, i);
            if (!(kij > 0) || !(kji > 0)) {
                throw BalanceInconsistent(
                    "one-sided edge (" + std::to_string(i) + ", " +
                    std::to_string(j) +
                    "): detailed balance admits no interior pi");
            }
            // log K_ij + log pi_j == log K_ji + log pi_i up to tol_rel.
            const Real lhs = std::log(kij) + log_pi(j);
            const Real rhs = std::log(kji) + log_pi(i);
            if (std::abs(lhs - rhs) >
                tol.tol_rel + 16 * std::numeric_limits<Real>::epsilon() *
                                  std::max(std::abs(lhs), std::abs(rhs))) {
                throw BalanceInconsistent(
                    "cycle product mismatch on edge (" + std::to_string(i) +
                    ", " + std::to_string(j) + "); K admits no detailed-balance pi");
            }
        }
    }

    // Normalize via log-sum-exp.
    const Real shift = log_pi.maxCoeff();
    Vector pi = (log_pi.array() - shift).exp();
    pi /= pi.sum();
    return pi;
}

} // namespace rcmc
