#pragma once

#include <map>
#include <tuple>
#include <vector>

namespace polypin {

/// Brute-force reference over all 2^N simple-random-walk paths (N <= 24).
///
/// Contacts are the times 1 <= i <= N with S_i in T·Z; each contact carries the jump
/// eps in {-1, 0, +1} between consecutive visited interfaces.
struct EnumeratedPolymer {
    long T = 0;
    long N = 0;
    double delta = 0.0;
    double Z = 0.0;                   ///< E[exp(-delta #contacts)]
    std::vector<double> last_contact; ///< P(tau_L = r), indexed by r/2
    /// Joint law of (tau_L, L, m, S_N) under the polymer measure.
    std::map<std::tuple<long, long, long, long>, double> joint;
    /// Law of the skeleton: contact times and signs, encoded as a vector.
    std::map<std::vector<long>, double> skeletons;
    std::vector<double> endpoint; ///< P(S_N = x), indexed by (x + N)/2
};

EnumeratedPolymer enumerate_polymer(long T, double delta, long N, bool with_skeletons = false);

/// E[exp(-delta #contacts up to k) 1{S_k in T·Z}] by enumeration (k <= 24).
double enumerate_contact_weight(long T, double delta, long k);

} // namespace polypin
