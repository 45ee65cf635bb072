#pragma once

#include "polypin/free_energy.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polypin {

enum class RegimeLabel : std::uint8_t {
    TH1_LOCALIZED,
    R1_SUBDIFFUSIVE,
    R2_DIFFUSIVE,
    R3_SRW,
    BC1_DIAGONAL,
    BC2_HALFLINE,
    BC3_CRITICAL,
};

std::string to_string(RegimeLabel label);

struct Classification {
    RegimeLabel label = RegimeLabel::R3_SRW;
    /// Finer tag inside a label: "localized" / "weakly_depinned" for TH1.
    std::string sub_tag;
    /// Which statement of the theory the region comes from, and any competing claim.
    std::string provenance;
};

/// Total classification of a > 0, b >= 0. Border sets are tested before open regions.
Classification classify(const Exponent& a, const Exponent& b);

struct Prediction {
    double endpoint_scale = 0.0;     ///< v_N
    double last_contact_scale = 0.0;
    double contacts_scale = 0.0;     ///< summary-table cell
    double contacts_renewal = 0.0;   ///< N / E[tau_1]
    std::optional<double> constant;  ///< pi for R1, kappa(beta) for BC1
    std::string endpoint_formula;
    std::string last_contact_formula;
    std::string contacts_formula;
};

Prediction predicted_orders(const ScalingPoint& point);

/// Desk-scale guardrails for experiments.
inline constexpr long kMaxN = 2'000'000;
inline constexpr long kMaxT = 2000;
inline constexpr std::size_t kMaxSamples = 100'000;

struct ExperimentConfig {
    ScalingPoint point;
    std::size_t n_samples = 10000;
    std::uint64_t seed = 0;
    int threads = 1;
    /// Restrict to these criterion names (empty: all criteria of the label).
    std::vector<std::string> criteria;
    double nu = 0.05;
    double M = 20.0;
    std::vector<double> windows{0.05, 0.1, 0.2};
};

struct CriterionResult {
    std::string name;
    double statistic = 0.0;
    std::string threshold;
    bool pass = false;
};

struct BandCell {
    double lo = 0.0;
    double hi = 0.0;
    double empirical = 0.0;
    double normal = 0.0;
};

struct WindowStat {
    double eps = 0.0;
    double measured = 0.0;    ///< fraction of samples with a contact in [(1-eps)N, N]
    double exact = 0.0;       ///< same from the exact last-contact law
    double srw_contrast = -1; ///< free-walk value (only for a < 1/2)
};

struct ExperimentReport {
    ScalingPoint point;
    Classification classification;
    Prediction prediction;
    long T = 0;
    double delta = 0.0;
    double phi = 0.0;
    double log_z = 0.0;
    double mean_tau = 0.0;
    double switch_prob = 0.0;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    double cost_estimate = 0.0;

    // Endpoint S_N / v_N.
    double v_N = 0.0;
    double mean_x = 0.0;
    double var_x = 0.0;
    std::vector<double> tail_fraction; ///< P(|X| > k), k = 1, 2, 3
    std::vector<BandCell> bands;
    double band_C = 0.0;

    // Last contact.
    double mean_last_over_N = 0.0;
    double frac_last_in_window = 0.0;  ///< tau_L in [nu/delta^2, M/delta^2]
    double frac_last_below_M = 0.0;    ///< tau_L <= M/delta^2
    double exact_last_below_M = 0.0;
    double frac_visited_other = 0.0;

    // Interface switches.
    std::vector<std::size_t> m_histogram;
    std::vector<double> m_ratios; ///< P(m >= k+1)/P(m >= k), k = 1, 2, 3
    double theta_fit = 0.0;

    std::vector<WindowStat> windows;

    // Free-walk comparison.
    double abs_z_minus_1 = 0.0;
    double mean_L = 0.0;
    double mean_L_srw = 0.0;

    std::vector<CriterionResult> criteria;
};

/// Operation estimate for an experiment (instance build plus sampling).
double experiment_cost(const ScalingPoint& point, std::size_t n_samples);

/// Throws InfeasibleError beyond the guardrails; statistical failures only flip verdicts.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Free-walk P(tau^T meets [ceil((1-eps)N), N]) (time 0 counts as a contact) by a cyclic DP.
double srw_window_contact_prob(long T, long N, double eps);

/// srw_window_contact_prob at the point's (T_N, N). Requires a < 1/2.
double srw_contrast(const ScalingPoint& point, double eps);

/// Standard normal CDF.
double normal_cdf(double x) noexcept;

} // namespace polypin
