#pragma once

#include "polypin/free_energy.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace polypin {

/// Tilted gap law f_j(n) = e^{-delta} q_T^j(n) e^{-phi n}. Arrays are indexed by n/2.
struct RenewalModel {
    ModelParams params;
    FreeEnergyResult fe;
    long horizon = 0;
    std::vector<double> f0; ///< eps = 0 part
    std::vector<double> f1; ///< eps = +1 part (the eps = -1 part is identical)
    /// Tilted survival A(n) = P(tau_1 > n) e^{-phi n}, indexed by n/2.
    std::vector<double> tilted_tail;
    /// Mass beyond the horizon, e^{-delta} sum_x v_H(x) h(x) (exact harmonic tail).
    double truncated_mass = 0.0;
    /// |1 - (sum_{n <= H} f(n) + truncated_mass)|.
    double normalization_defect = 0.0;
    /// Last index n/2 kept for convolutions; beyond it the tail is < 1e-15 of the mass.
    std::size_t support = 0;

    double f_at(long n) const noexcept;
    double f1_at(long n) const noexcept;
    /// f0 + 2 f1 as an array.
    std::vector<double> total() const;
};

/// Builds the tilted law up to `horizon`. When `tail_tol` is finite and the mass beyond the
/// horizon exceeds it, throws HorizonError carrying the achievable defect.
RenewalModel build_renewal(const ModelParams& params, long horizon,
                           double tail_tol = std::numeric_limits<double>::infinity());

/// Smallest even horizon with truncated mass <= tail_tol (the tail rule).
long horizon_for_tail(const ModelParams& params, double tail_tol);

enum class MassMethod : std::uint8_t { automatic, direct, fft };

/// Renewal mass u = 1/(1 - f) up to the model horizon (index n/2), u(0) = 1.
std::vector<double> mass_function(const RenewalModel& model, MassMethod method = MassMethod::automatic);

/// Operation estimate of the direct series inversion; above 1e9 the FFT path is used.
double direct_inversion_cost(const RenewalModel& model) noexcept;

enum class ProfileFamily : std::uint8_t {
    automatic,   ///< three ranges when T delta > 1, else min{sqrt n, T}
    three_range, ///< 1/sqrt(n), 1/(delta^2 n^{3/2}), 1/(T^3 delta^2)
    min_sqrt_T,  ///< 1/min{sqrt(n), T}
};

struct ProfileRange {
    std::string name;
    long n_lo = 0;
    long n_hi = 0;
    bool covered = false; ///< horizon reaches n_hi
    bool partial = false; ///< horizon reaches n_lo only
    double sup = 0.0;     ///< sup of u(n)/profile(n) on the covered part
    double inf = 0.0;
    double band() const noexcept { return inf > 0.0 ? sup / inf : std::numeric_limits<double>::infinity(); }
};

struct ProfileReport {
    ProfileFamily family = ProfileFamily::automatic;
    std::vector<ProfileRange> ranges;
    double mean_tau = 0.0;
    /// u(n) E[tau_1]/2 at the even n nearest to 20 E[tau_1] (0 when beyond the horizon).
    double stationary_check = 0.0;
    long stationary_n = 0;
    bool finite_positive = false;
};

ProfileReport regime_profile_report(const RenewalModel& model, const std::vector<double>& u,
                                    ProfileFamily family = ProfileFamily::automatic);

/// Largest ratio max(sup1/sup2, sup2/sup1, inf1/inf2, inf2/inf1) over ranges covered in both.
double profile_stability(const ProfileReport& a, const ProfileReport& b);

/// E[e^{-H_k} 1{k in tau}] for k = 0..k_max (index k, odd entries zero) by the cyclic
/// transfer matrix over heights mod T.
std::vector<double> contact_weights_transfer(const ModelParams& params, long k_max);

struct TiltIdentityReport {
    double max_defect_transfer = 0.0;
    double max_defect_enumeration = 0.0; ///< only for k_max <= 16, else 0
    bool enumerated = false;
};

/// max over even k <= k_max of |LHS - e^{phi k} u(k)| / (e^{phi k} u(k)).
TiltIdentityReport tilt_identity_check(const ModelParams& params, long k_max);

/// CSV dump "n,f,u" over even n up to the horizon.
void write_renewal_csv(std::ostream& os, const RenewalModel& model, const std::vector<double>& u);

} // namespace polypin
