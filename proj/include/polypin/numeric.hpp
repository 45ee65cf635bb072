#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace polypin {

/// Neumaier-compensated running sum.
class KahanSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    KahanSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Sets flush-to-zero / denormals-are-zero for the lifetime of the guard (x86 only).
/// Long DPs otherwise crawl once the front of a distribution drops below 1e-308.
class DenormalGuard {
public:
    DenormalGuard() noexcept;
    ~DenormalGuard();
    DenormalGuard(const DenormalGuard&) = delete;
    DenormalGuard& operator=(const DenormalGuard&) = delete;

private:
    unsigned saved_ = 0;
};

/// Compensated sum of a range.
double kahan_sum(std::span<const double> xs) noexcept;

/// Truncated Cauchy product c[i] = sum_{j} a[j] b[i-j], i < len, with compensated accumulation.
std::vector<double> convolve_kahan(std::span<const double> a, std::span<const double> b,
                                   std::size_t len);

/// Same product computed with FFTW; rounding is absolute, relative to max|a| * sum|b|.
std::vector<double> convolve_fft(std::span<const double> a, std::span<const double> b,
                                 std::size_t len);

} // namespace polypin
