#include "rcmc/simplex.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace rcmc {

ProjectionResult project_pi(const Vector &w, const PiMetric &m) {
    const Index n = w.size();
    if (m.size() != n) throw std::invalid_argument("metric dimension mismatch");
    if (!w.allFinite()) throw std::invalid_argument("w must be finite");

    std::vector<Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        const Real ra = w(a) * m.inv_pi(a);
        const Real rb = w(b) * m.inv_pi(b);
        if (ra != rb) return ra > rb;
        return a < b;
    });

    // ell = max{ j : w_(j) + pi_(j) (1 - sum_{i<=j} w_(i)) / sum_{i<=j} pi_(i) > 0 },
    // evaluated with incremental prefix sums and a strict comparison.
    Real sum_w = 0, sum_pi = 0;
    Index ell = 0;
    Real mu = 0;
    for (Index j = 0; j < n; ++j) {
        const Index idx = order[static_cast<size_t>(j)];
        sum_w += w(idx);
        sum_pi += m.pi(idx);
        const Real t = w(idx) + m.pi(idx) * (1.0 - sum_w) / sum_pi;
        if (t > 0) {
            ell = j + 1;
            mu = (1.0 - sum_w) / sum_pi;
        }
    }

    ProjectionResult res;
    res.support_size = ell;
    res.mu = mu;
    res.q = Vector::Zero(n);
    for (Index j = 0; j < ell; ++j) {
        const Index idx = order[static_cast<size_t>(j)];
        res.q(idx) = std::max(w(idx) + m.pi(idx) * mu, 0.0);
    }
    return res;
}

} // namespace rcmc
