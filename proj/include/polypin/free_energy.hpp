#pragma once

#include "polypin/rational.hpp"

#include <cstdint>
#include <string>

namespace polypin {

/// Interface spacing and repulsion strength of one model instance.
struct ModelParams {
    long T = 2;
    double delta = 0.0;

    /// Throws ParameterError unless T is even >= 2 and delta >= 0 is finite.
    void validate() const;
};

/// Phase-diagram coordinate: T_N = N^a (nearest even, at least 2), delta_N = beta N^{-b}.
struct ScalingPoint {
    Exponent a;
    Exponent b;
    double beta = 1.0;
    long N = 2;

    long T_N() const;
    double delta_N() const;
    ModelParams params() const { return ModelParams{T_N(), delta_N()}; }
    void validate() const;
};

struct FreeEnergyResult {
    double phi = 0.0;      ///< free energy, <= 0
    double gamma = 0.0;    ///< root of tan(g) tan(T g/2) = e^delta - 1 in [0, pi/T)
    double g = 0.0;        ///< -log cos(pi/T)
    double residual = 0.0; ///< |Q~_T(gamma) - e^delta|
    int iterations = 0;
};

/// Q_T(lambda) = E[e^{-lambda tau_1}] in closed form. Throws DomainError past the pole.
double laplace_Q(long T, double lambda);

/// Contribution of the eps = +1 part: sum_n q_T^1(n) e^{-lambda n}.
double laplace_Q1(long T, double lambda);

/// Bisection on gamma. Converges when the residual is <= tol or the bracket has
/// collapsed to adjacent doubles (the conditioning floor |Q~'| ulp(gamma)).
FreeEnergyResult free_energy(const ModelParams& params, double tol = 1e-13);

/// sum_n q_T(n) e^{-phi n} computed by the strip DP until the surviving mass is below
/// `cutoff`, plus the exact harmonic tail. Independent of the closed form Q~.
double laplace_sum_dp(long T, double phi, double cutoff = 1e-9);

enum class PhiBranch : std::uint8_t { a_less_b, a_equals_b, a_greater_b };
std::string to_string(PhiBranch b);

struct AsymptoticPhi {
    double approx = 0.0;
    double exact = 0.0;
    double rel_error = 0.0;
    PhiBranch branch = PhiBranch::a_less_b;
};

AsymptoticPhi asymptotic_phi(const ScalingPoint& point);

/// Root of beta sin(x)/(1 - cos x) = x on (0, pi).
double x_beta(double beta, double tol = 1e-15);
/// sqrt(x^3 / (beta (x + sin x))) at x = x_beta.
double kappa(double beta);

enum class MomentMethod : std::uint8_t { closed_form, direct_sum };
std::string to_string(MomentMethod m);

struct RenewalMoments {
    double mean_tau = 0.0;
    double second_tau = 0.0;
    double switch_prob = 0.0; ///< P(eps_1^2 = 1)
    MomentMethod method = MomentMethod::closed_form;
};

RenewalMoments renewal_moments(const ModelParams& params, MomentMethod method);

} // namespace polypin
