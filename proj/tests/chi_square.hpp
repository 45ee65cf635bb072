#pragma once
// Pearson goodness-of-fit against exact cell probabilities, shared by the statistical tests.

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <numeric>
#include <vector>

namespace oracle {

/// p-value of observed counts against probabilities. Cells are pooled from the smallest expectation
/// upward until every bin expects at least 5; a leftover pool joins the next-smallest bin.
inline double chi_square_p(const std::vector<double>& probs, const std::vector<double>& counts, double n) {
    std::vector<std::size_t> order(probs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return probs[a] < probs[b]; });
    std::vector<std::pair<double, double>> bins; // (expected, observed)
    double pe = 0.0, po = 0.0;
    for (std::size_t i : order) {
        pe += probs[i] * n;
        po += counts[i];
        if (pe >= 5.0) {
            bins.emplace_back(pe, po);
            pe = po = 0.0;
        }
    }
    if (pe > 0.0 || po > 0.0) {
        if (bins.empty()) return 1.0;
        bins.front().first += pe;
        bins.front().second += po;
    }
    if (bins.size() < 2) return 1.0;
    double stat = 0.0;
    for (const auto& [e, o] : bins) stat += (o - e) * (o - e) / e;
    const boost::math::chi_squared dist(static_cast<double>(bins.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

} // namespace oracle
