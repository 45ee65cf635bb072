#pragma once

#include <cstddef>
#include <vector>

namespace polypin {

/// Mass absorbed on the interfaces at one even time.
struct Absorbed {
    double zero = 0.0;  ///< back on the starting interface
    double plus = 0.0;  ///< on +T
    double minus = 0.0; ///< on -T
};

/// Simple random walk started at 0 on the heights (-T, T), killed on T·Z after time 0.
///
/// Heights are split by parity: `even_[j]` holds height -T + 2j (j = 0..T) and
/// `odd_[j]` holds -T + 1 + 2j (j = 0..T-1), so each half-step is a contiguous
/// two-point average. Every step multiplies the mass by `step_weight`, which lets
/// the same sweep produce untilted laws (weight 1) and the e^{-phi n} tilt.
class StripWalk {
public:
    StripWalk(long T, double step_weight = 1.0);

    /// Two steps forward; returns the mass absorbed at the new (even) time.
    Absorbed advance2() noexcept;

    /// Steps taken so far (always even).
    long time() const noexcept { return time_; }
    long T() const noexcept { return T_; }

    /// Total surviving mass.
    double survival() const noexcept;

    /// sum_x v(x) h(x) with h the step-weight harmonic function that equals 1 on the
    /// interfaces: h(x) = cos(gamma(|x| - T/2)) / cos(gamma T/2). This is the exact
    /// future absorbed mass of the surviving walk when cos(gamma) = 1/step_weight.
    double harmonic_tail(double gamma) const noexcept;

    /// Multiplies the surviving vector by c (used to keep long sweeps in range).
    void rescale(double c) noexcept;

    /// Surviving mass at height x (|x| < T, x even since time is even).
    double at(long x) const noexcept;

private:
    long T_;
    double half_w_;
    long time_ = 0;
    std::vector<double> even_;
    std::vector<double> odd_;
};

/// Walk started on an interface and conditioned to avoid T·Z afterwards, folded to (0, T).
///
/// After `length` steps `weights()` is proportional to the law of the height in (0, T)
/// (the sign is an independent fair coin). The vector is renormalised every 32 steps,
/// so only ratios are meaningful. Used for the final incomplete excursion.
class ConditionedExcursion {
public:
    explicit ConditionedExcursion(long T);

    /// Advances to `length` (must not go backwards).
    void advance_to(long length);
    long length() const noexcept { return length_; }

    /// Unnormalised weights on heights 0..T (entries 0 and T are zero).
    const std::vector<double>& weights() const noexcept { return cur_; }

    /// Inverse-CDF draw of a height in (0, T) from uniform u in [0, 1).
    long draw(double u) const noexcept;

private:
    long T_;
    long length_ = 0;
    std::vector<double> cur_;
    std::vector<double> nxt_;
};

} // namespace polypin

namespace polypin {

/// One step of the walk on Z/TZ: q[x] = (p[x-1] + p[x+1]) / 2 with wrap-around.
inline void cyclic_average(const double* p, double* q, std::size_t T) noexcept {
    if (T == 1) {
        q[0] = p[0];
        return;
    }
    q[0] = 0.5 * (p[T - 1] + p[1]);
    for (std::size_t x = 1; x + 1 < T; ++x) q[x] = 0.5 * (p[x - 1] + p[x + 1]);
    q[T - 1] = 0.5 * (p[T - 2] + p[0]);
}

} // namespace polypin
