#pragma once
// Brute-force references used only by the tests.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

/// P(tau_1 = n, eps_1 = j) for j = 0, +1, -1 by enumerating all 2^n paths.
/// T = 0 stands for "no interfaces besides 0".
struct FirstHit {
    double q0 = 0, qp = 0, qm = 0;
};

inline FirstHit first_hit(long T, long n) {
    FirstHit out;
    const double w = std::ldexp(1.0, -static_cast<int>(n));
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        long S = 0;
        for (long i = 1; i <= n; ++i) {
            S += (mask >> (i - 1)) & 1ULL ? 1 : -1;
            const bool hit = T == 0 ? S == 0 : S % T == 0;
            if (hit) {
                if (i == n) {
                    if (S == 0) out.q0 += w;
                    else if (S > 0) out.qp += w;
                    else out.qm += w;
                }
                break;
            }
        }
    }
    return out;
}

/// Exact binomial coefficient as double (n <= 60).
inline double binom(long n, long k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (long i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

/// O(n^2) double sum for a 2-fold convolution at one point: sum_m a(m) b(n - m).
template <class A, class B>
double double_sum(const A& a, const B& b, long n) {
    double s = 0.0;
    for (long m = 0; m <= n; m += 2) s += a(m) * b(n - m);
    return s;
}

} // namespace oracle
