#pragma once

// Brute-force references shared by the unit tests and the acceptance run.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lpfp/metrics.hpp"
#include "lpfp/model.hpp"

namespace lpfp::oracle {

// sup over 1-Lipschitz phi with phi(x0) = 0 of int phi d(a - b), plus the mass
// gap. Between consecutive breakpoints (atoms and x0) an extremal phi has
// slope +1 or -1; every sign pattern is tried.
inline double w1_prime_dual(const DiscreteSubprob& a, const DiscreteSubprob& b, double x0) {
    std::vector<double> pts = a.x;
    pts.insert(pts.end(), b.x.begin(), b.x.end());
    pts.push_back(x0);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t gaps = pts.size() - 1;
    const std::size_t origin = static_cast<std::size_t>(std::find(pts.begin(), pts.end(), x0) - pts.begin());
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> phi(pts.size());
    for (unsigned long signs = 0; signs < (1ul << gaps); ++signs) {
        phi[origin] = 0.0;
        for (std::size_t k = origin; k < gaps; ++k)
            phi[k + 1] = phi[k] + (((signs >> k) & 1ul) ? 1.0 : -1.0) * (pts[k + 1] - pts[k]);
        for (std::size_t k = origin; k > 0; --k)
            phi[k - 1] = phi[k] - (((signs >> (k - 1)) & 1ul) ? 1.0 : -1.0) * (pts[k] - pts[k - 1]);
        double value = 0.0;
        const auto at = [&](double x) {
            return phi[static_cast<std::size_t>(std::lower_bound(pts.begin(), pts.end(), x) - pts.begin())];
        };
        for (std::size_t n = 0; n < a.x.size(); ++n) value += at(a.x[n]) * a.mass[n];
        for (std::size_t n = 0; n < b.x.size(); ++n) value -= at(b.x[n]) * b.mass[n];
        best = std::max(best, value);
    }
    double ma = 0.0, mb = 0.0;
    for (double m : a.mass) ma += m;
    for (double m : b.mass) mb += m;
    return best + std::abs(ma - mb);
}

// W1 between measures whose atoms carry integer multiples of 1/K: split every
// atom into unit pieces and minimize over all K! matchings.
inline double w1_assignment(const std::vector<double>& ta, const std::vector<double>& xa,
                            const std::vector<int>& units_a, const std::vector<double>& tb,
                            const std::vector<double>& xb, const std::vector<int>& units_b) {
    std::vector<std::size_t> from, to;
    for (std::size_t n = 0; n < units_a.size(); ++n) from.insert(from.end(), static_cast<std::size_t>(units_a[n]), n);
    for (std::size_t n = 0; n < units_b.size(); ++n) to.insert(to.end(), static_cast<std::size_t>(units_b[n]), n);
    const double unit = 1.0 / static_cast<double>(from.size());
    std::sort(to.begin(), to.end());
    double best = std::numeric_limits<double>::infinity();
    do {
        double cost = 0.0;
        for (std::size_t u = 0; u < from.size(); ++u)
            cost += std::hypot(ta[from[u]] - tb[to[u]], xa[from[u]] - xb[to[u]]);
        best = std::min(best, cost * unit);
    } while (std::next_permutation(to.begin(), to.end()));
    return best;
}

} // namespace lpfp::oracle
