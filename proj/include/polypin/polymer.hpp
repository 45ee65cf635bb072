#pragma once

#include "polypin/renewal.hpp"
#include "polypin/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace polypin {

/// Everything needed for exact Z and exact sampling at one (T, delta, N).
struct PolymerInstance {
    ModelParams params;
    long N = 0;
    RenewalModel renewal;
    std::vector<double> u;            ///< renewal mass, indexed by n/2
    double log_z = 0.0;
    std::vector<double> last_contact; ///< P(tau_L = r), indexed by r/2
    std::vector<double> last_contact_cdf;

    /// P(tau_1 > j) under the free walk (j even), from the tilted tail.
    double srw_tail(long j) const;
};

/// Builds the renewal model to horizon N, the mass function and the last-contact law.
PolymerInstance make_instance(const ModelParams& params, long N, MassMethod method = MassMethod::automatic);

struct PartitionFunction {
    double Z = 0.0;
    double log_z = 0.0;
};

/// Z = sum_r e^{phi r} u(r) P(tau_1 > N - r), evaluated in log space.
PartitionFunction partition_function(const PolymerInstance& inst);

/// Independent route: cyclic transfer matrix over heights mod T, rescaled every step.
PartitionFunction partition_function_transfer(const ModelParams& params, long N);

/// Exact P(tau_L = r) over even r (index r/2).
const std::vector<double>& last_contact_law(const PolymerInstance& inst);

/// SRW last-contact law via P(r in tau^T) P(tau_1 > N - r) with binomial visit probabilities.
std::vector<double> srw_last_contact_law(long T, long N);

struct ContactSkeleton {
    std::vector<long> contacts;      ///< increasing contact times
    std::vector<std::int8_t> signs;  ///< eps_i for each contact
    long last_contact = 0;
    long L = 0;
    long m = 0;
    long level() const noexcept;     ///< sum of signs = interface index of the last contact
};

struct TrajectoryStats {
    long S_N = 0;
    long tau_last = 0;
    long L = 0;
    long m = 0;
    bool visited_other_interface = false;
};

/// Draws the last contact from the exact law, then the renewal bridge backwards.
ContactSkeleton sample_skeleton(const PolymerInstance& inst, Rng& rng);

/// Draws the final-excursion offset and assembles the observables.
TrajectoryStats sample_endpoint(const PolymerInstance& inst, const ContactSkeleton& sk, Rng& rng);

/// n samples with per-sample streams Rng::stream(seed, i). Skeletons are drawn in
/// parallel; the shared endpoint tables are built in one sweep afterwards. The output
/// is identical for any thread count and equal to calling sample_skeleton and
/// sample_endpoint on each stream in turn.
std::vector<TrajectoryStats> sample_batch(const PolymerInstance& inst, std::size_t n, std::uint64_t seed,
                                          int threads = 1);

/// CSV "sample_id,S_N,tau_last,L,m,visited_other".
void write_samples_csv(std::ostream& os, const std::vector<TrajectoryStats>& samples);

/// Full height path S_0..S_N consistent with the skeleton and endpoint (N <= 1e4).
/// Each excursion is a uniform bridge avoiding the interfaces in its interior.
std::vector<long> fill_trajectory(const PolymerInstance& inst, const ContactSkeleton& sk, long S_N, Rng& rng);

} // namespace polypin
