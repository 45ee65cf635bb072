#include "polypin/enumeration.hpp"

#include "polypin/errors.hpp"

#include <cmath>

namespace polypin {

namespace {

long floor_div(long x, long T) { return x >= 0 ? x / T : -((-x + T - 1) / T); }

} // namespace

EnumeratedPolymer enumerate_polymer(long T, double delta, long N, bool with_skeletons) {
    if (T < 2 || T % 2 != 0) throw ParameterError("T must be even >= 2");
    if (N < 2 || N % 2 != 0 || N > 24) throw ParameterError("enumeration needs even N in [2, 24]");
    EnumeratedPolymer out;
    out.T = T;
    out.N = N;
    out.delta = delta;

    // Up to 2^24 terms: accumulate in extended precision so the oracle stays good to ~1e-15.
    using ld = long double;
    std::vector<ld> weight(static_cast<std::size_t>(N + 1));
    for (long L = 0; L <= N; ++L)
        weight[static_cast<std::size_t>(L)] = std::ldexp(std::exp(-static_cast<ld>(delta) * L), -static_cast<int>(N));
    ld Z = 0;
    std::vector<ld> last(static_cast<std::size_t>(N / 2 + 1), 0), end(static_cast<std::size_t>(N + 1), 0);
    std::map<std::tuple<long, long, long, long>, ld> joint;
    std::map<std::vector<long>, ld> skeletons;

    const unsigned long total = 1UL << N;
    std::vector<long> skeleton;
    for (unsigned long mask = 0; mask < total; ++mask) {
        long S = 0, level = 0, L = 0, m = 0, t_last = 0;
        skeleton.clear();
        for (long i = 1; i <= N; ++i) {
            S += (mask >> (i - 1)) & 1UL ? 1 : -1;
            if (S % T == 0) {
                const long lev = floor_div(S, T);
                const long eps = lev - level;
                level = lev;
                ++L;
                if (eps != 0) ++m;
                t_last = i;
                if (with_skeletons) {
                    skeleton.push_back(i);
                    skeleton.push_back(eps);
                }
            }
        }
        const ld w = weight[static_cast<std::size_t>(L)];
        Z += w;
        last[static_cast<std::size_t>(t_last / 2)] += w;
        joint[{t_last, L, m, S}] += w;
        end[static_cast<std::size_t>((S + N) / 2)] += w;
        if (with_skeletons) skeletons[skeleton] += w;
    }
    out.Z = static_cast<double>(Z);
    for (ld p : last) out.last_contact.push_back(static_cast<double>(p / Z));
    for (ld p : end) out.endpoint.push_back(static_cast<double>(p / Z));
    for (const auto& [k, p] : joint) out.joint.emplace(k, static_cast<double>(p / Z));
    for (const auto& [k, p] : skeletons) out.skeletons.emplace(k, static_cast<double>(p / Z));
    return out;
}

double enumerate_contact_weight(long T, double delta, long k) {
    if (T < 2 || T % 2 != 0) throw ParameterError("T must be even >= 2");
    if (k < 0 || k > 24) throw ParameterError("enumeration needs k in [0, 24]");
    if (k == 0) return 1.0;
    const long double base = std::ldexp(1.0L, -static_cast<int>(k));
    long double sum = 0.0;
    for (unsigned long mask = 0; mask < (1UL << k); ++mask) {
        long S = 0, L = 0;
        for (long i = 1; i <= k; ++i) {
            S += (mask >> (i - 1)) & 1UL ? 1 : -1;
            if (S % T == 0) ++L;
        }
        if (S % T == 0) sum += base * std::exp(-static_cast<long double>(delta) * L);
    }
    return static_cast<double>(sum);
}

} // namespace polypin
