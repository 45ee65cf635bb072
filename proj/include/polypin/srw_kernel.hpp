#pragma once

#include <cstdint>
#include <vector>

namespace polypin {

/// Interface spacing: an even T >= 2, or no interfaces besides 0.
class InterfaceSpec {
public:
    enum class Kind : std::uint8_t { finite, infinite };

    static InterfaceSpec finite(long T);
    static InterfaceSpec infinite() noexcept { return InterfaceSpec(Kind::infinite, 0); }

    Kind kind() const noexcept { return kind_; }
    bool is_infinite() const noexcept { return kind_ == Kind::infinite; }
    /// Spacing; only meaningful for finite specs.
    long T() const noexcept { return T_; }

    friend bool operator==(const InterfaceSpec&, const InterfaceSpec&) = default;

private:
    InterfaceSpec(Kind k, long T) noexcept : kind_(k), T_(T) {}
    Kind kind_;
    long T_;
};

/// Exact law of (tau_1, eps_1) up to an even horizon. Arrays are indexed by n/2.
struct HittingLaw {
    InterfaceSpec spec;
    long horizon = 0;
    std::vector<double> q0;  ///< P(tau_1 = n, eps_1 = 0)
    std::vector<double> q1;  ///< P(tau_1 = n, eps_1 = +1), computed on its own sweep side
    std::vector<double> qm1; ///< P(tau_1 = n, eps_1 = -1); equals q1 exactly
    double tail_mass = 0.0;  ///< P(tau_1 > horizon)

    double q0_at(long n) const noexcept;
    double q1_at(long n) const noexcept;
    /// q0 + 2 q1.
    double q_at(long n) const noexcept;
    /// Total law q(n) as an array indexed by n/2.
    std::vector<double> total() const;
};

/// Law of the k-th contact time, optionally with every gap restricted to <= T^2.
struct KFoldLaw {
    InterfaceSpec spec;
    int k = 1;
    long horizon = 0;
    bool constrained = false;
    std::vector<double> mass; ///< indexed by n/2

    double at(long n) const noexcept;
};

/// Decay rate of the strip survival probability, -log cos(pi/T). Infinite for T = 2.
double g_of_T(long T) noexcept;

/// Forward DP over the strictly interior heights (or closed form for T = infinity).
HittingLaw hitting_law(const InterfaceSpec& spec, long horizon);

/// k-fold convolution power of the hitting law (gap-truncated at T^2 when constrained).
KFoldLaw k_fold_hitting(const InterfaceSpec& spec, int k, long horizon, bool constrained);

/// All convolution powers 1..k_max at once (entry i is the (i+1)-fold law).
std::vector<KFoldLaw> k_fold_hitting_all(const InterfaceSpec& spec, int k_max, long horizon,
                                         bool constrained);

/// Grid for the Theorem-4-type bound verification.
struct BoundGrid {
    std::vector<long> T_values;
    int k_max = 20;
    /// Unconstrained part covers n < 2T^2; constrained part covers [2T^2, constrained_span*T^2].
    long constrained_span = 4;
    int threads = 1;
};

/// Grid maximum for one spacing T.
struct BoundRow {
    long T = 0;
    double max_ratio = 0.0;     ///< max over k, n < 2T^2 of K_k(n) min(T^3, n^1.5) e^{n g}/k
    int arg_k = 0;
    long arg_n = 0;
    double fitted_C = 0.0;       ///< constrained part: prefactor of the fitted geometric growth
    double fitted_C_prime = 0.0; ///< constrained part: (1 + C'/T)^k growth rate
    double max_ratio_constrained = 0.0;
    int arg_k_constrained = 0;
    long arg_n_constrained = 0;
};

struct BoundReport {
    std::vector<BoundRow> rows;
    double max_ratio = 0.0;
    long arg_T = 0;
    int arg_k = 0;
    long arg_n = 0;
    /// True when the maximum sits strictly inside the grid in k and n and T.
    bool interior = false;
    double max_ratio_constrained = 0.0;
};

/// Theorem-4 style ratio for one entry; T = 2 drops the (infinite) exponential weight.
double hitting_bound_ratio(const InterfaceSpec& spec, int k, long n, double mass) noexcept;

BoundReport verify_hitting_bounds(const BoundGrid& grid);

/// P(S_n in T·Z) by summing binomial terms.
double interface_visit_prob(const InterfaceSpec& spec, long n);

/// min and max over the given n of P(S_n in T·Z) * min(sqrt(n), T).
struct VisitBand {
    double lo = 0.0;
    double hi = 0.0;
};
VisitBand interface_visit_band(const InterfaceSpec& spec, const std::vector<long>& n_values);

/// One row of the return-to-origin expansion check.
struct ExpansionRow {
    long n = 0;
    double p_return = 0.0;          ///< P(n in tau^inf)
    double p_first = 0.0;           ///< P(tau_1^inf = n)
    double p_first_le = 0.0;        ///< P(tau_1^inf <= n), i.e. l = n/2
    double residual_return = 0.0;   ///< P(n in tau) sqrt(pi n/2) - (1 - 1/(4n))
    double residual_first = 0.0;    ///< P(tau_1 = n) sqrt(pi/2) n^{3/2} - (1 + 3/(4n))
    double residual_first_le = 0.0; ///< P(tau_1 <= 2l) - (1 - 1/sqrt(pi l) - 3/(8 sqrt(pi) l^{3/2}))
    double residual_first_le_corrected = 0.0; ///< same against + 1/(8 sqrt(pi) l^{3/2})
};

struct ExpansionReport {
    std::vector<ExpansionRow> rows;
    /// Fitted slopes of log|residual| against log n (last two rows).
    double order_return = 0.0;
    double order_first = 0.0;
    double order_first_le = 0.0;
    double order_first_le_corrected = 0.0;
    /// Whether P(tau_1 <= 2l) stays below the stated three-term upper expansion on every row.
    bool stated_bound_holds = true;
};

ExpansionReport return_origin_expansions(const std::vector<long>& n_values);

/// max_n |2 q_T^1(n) - q_T^0(n) + q_{T/2}^0(n)| over even n <= horizon.
double reflection_identity_check(long T, long horizon);

} // namespace polypin
