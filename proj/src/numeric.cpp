#include "polypin/numeric.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#if defined(__SSE__) || defined(_M_X64)
#include <xmmintrin.h>
#define POLYPIN_HAVE_MXCSR 1
#endif

namespace polypin {

DenormalGuard::DenormalGuard() noexcept {
#ifdef POLYPIN_HAVE_MXCSR
    saved_ = _mm_getcsr();
    _mm_setcsr(saved_ | 0x8040u); // FTZ | DAZ
#endif
}

DenormalGuard::~DenormalGuard() {
#ifdef POLYPIN_HAVE_MXCSR
    _mm_setcsr(saved_);
#endif
}

double kahan_sum(std::span<const double> xs) noexcept {
    KahanSum s;
    for (double x : xs) s += x;
    return s.value();
}

std::vector<double> convolve_kahan(std::span<const double> a, std::span<const double> b,
                                   std::size_t len) {
    std::vector<double> c(len, 0.0);
    for (std::size_t i = 0; i < len; ++i) {
        KahanSum s;
        const std::size_t jmax = std::min(i + 1, a.size());
        for (std::size_t j = 0; j < jmax; ++j) {
            if (i - j < b.size()) s += a[j] * b[i - j];
        }
        c[i] = s.value();
    }
    return c;
}

namespace {
std::mutex planner_mutex; // FFTW planning is not thread-safe
}

std::vector<double> convolve_fft(std::span<const double> a, std::span<const double> b,
                                 std::size_t len) {
    std::vector<double> c(len, 0.0);
    if (a.empty() || b.empty() || len == 0) return c;
    const std::size_t na = std::min(a.size(), len), nb = std::min(b.size(), len);
    std::size_t n = 1;
    while (n < na + nb - 1) n <<= 1;
    const std::size_t nc = n / 2 + 1;

    double* x = fftw_alloc_real(n);
    double* y = fftw_alloc_real(n);
    fftw_complex* X = fftw_alloc_complex(nc);
    fftw_complex* Y = fftw_alloc_complex(nc);
    fftw_plan pa, pb, pinv;
    {
        std::lock_guard lock(planner_mutex);
        pa = fftw_plan_dft_r2c_1d(static_cast<int>(n), x, X, FFTW_ESTIMATE);
        pb = fftw_plan_dft_r2c_1d(static_cast<int>(n), y, Y, FFTW_ESTIMATE);
        pinv = fftw_plan_dft_c2r_1d(static_cast<int>(n), X, x, FFTW_ESTIMATE);
    }
    std::fill(x, x + n, 0.0);
    std::fill(y, y + n, 0.0);
    std::copy_n(a.begin(), na, x);
    std::copy_n(b.begin(), nb, y);
    fftw_execute(pa);
    fftw_execute(pb);
    for (std::size_t k = 0; k < nc; ++k) {
        const double re = X[k][0] * Y[k][0] - X[k][1] * Y[k][1];
        const double im = X[k][0] * Y[k][1] + X[k][1] * Y[k][0];
        X[k][0] = re;
        X[k][1] = im;
    }
    fftw_execute(pinv);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < len && i < n; ++i) c[i] = x[i] * scale;
    {
        std::lock_guard lock(planner_mutex);
        fftw_destroy_plan(pa);
        fftw_destroy_plan(pb);
        fftw_destroy_plan(pinv);
    }
    fftw_free(x);
    fftw_free(y);
    fftw_free(X);
    fftw_free(Y);
    return c;
}

} // namespace polypin
