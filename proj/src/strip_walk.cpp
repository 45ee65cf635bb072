#include "polypin/strip_walk.hpp"

#include "polypin/errors.hpp"

#include <cmath>
#include <numeric>

namespace polypin {

StripWalk::StripWalk(long T, double step_weight)
    : T_(T), half_w_(0.5 * step_weight),
      even_(static_cast<std::size_t>(T + 1), 0.0), odd_(static_cast<std::size_t>(T), 0.0) {
    if (T < 2 || T % 2 != 0) throw ParameterError("strip width T must be even and >= 2");
    even_[static_cast<std::size_t>(T / 2)] = 1.0;
}

Absorbed StripWalk::advance2() noexcept {
    const std::size_t T = static_cast<std::size_t>(T_);
    const double hw = half_w_;
    double* e = even_.data();
    double* o = odd_.data();
    for (std::size_t j = 0; j < T; ++j) o[j] = hw * (e[j] + e[j + 1]);
    e[0] = hw * o[0];
    for (std::size_t j = 1; j < T; ++j) e[j] = hw * (o[j - 1] + o[j]);
    e[T] = hw * o[T - 1];

    Absorbed out{e[T / 2], e[T], e[0]};
    e[T / 2] = 0.0;
    e[0] = 0.0;
    e[T] = 0.0;
    time_ += 2;
    return out;
}

double StripWalk::survival() const noexcept {
    return std::accumulate(even_.begin(), even_.end(), 0.0);
}

double StripWalk::harmonic_tail(double gamma) const noexcept {
    if (gamma == 0.0) return survival();
    const double half = 0.5 * static_cast<double>(T_);
    const double denom = std::cos(gamma * half);
    double s = 0.0;
    for (long j = 1; j < T_; ++j) {
        const double v = even_[static_cast<std::size_t>(j)];
        if (v == 0.0) continue;
        const long x = -T_ + 2 * j;
        s += v * std::cos(gamma * (static_cast<double>(std::labs(x)) - half));
    }
    return s / denom;
}

void StripWalk::rescale(double c) noexcept {
    for (double& v : even_) v *= c;
}

double StripWalk::at(long x) const noexcept {
    if (x <= -T_ || x >= T_ || ((x + T_) & 1)) return 0.0;
    return even_[static_cast<std::size_t>((x + T_) / 2)];
}

ConditionedExcursion::ConditionedExcursion(long T)
    : T_(T), cur_(static_cast<std::size_t>(T + 1), 0.0), nxt_(static_cast<std::size_t>(T + 1), 0.0) {
    if (T < 2 || T % 2 != 0) throw ParameterError("strip width T must be even and >= 2");
}

void ConditionedExcursion::advance_to(long length) {
    if (length < length_) throw ParameterError("ConditionedExcursion cannot move backwards");
    const std::size_t T = static_cast<std::size_t>(T_);
    while (length_ < length) {
        if (length_ == 0) {
            cur_[1] = 1.0;
            ++length_;
            continue;
        }
        const double* c = cur_.data();
        double* n = nxt_.data();
        n[0] = 0.0;
        n[T] = 0.0;
        for (std::size_t x = 1; x < T; ++x) n[x] = 0.5 * (c[x - 1] + c[x + 1]);
        cur_.swap(nxt_);
        ++length_;
        if (length_ % 32 == 0) {
            const double s = std::accumulate(cur_.begin(), cur_.end(), 0.0);
            if (s > 0.0) {
                const double inv = 1.0 / s;
                for (double& v : cur_) v *= inv;
            }
        }
    }
}

long ConditionedExcursion::draw(double u) const noexcept {
    if (length_ == 0) return 0;
    const double total = std::accumulate(cur_.begin(), cur_.end(), 0.0);
    const double target = u * total;
    double acc = 0.0;
    long last = 0;
    for (long x = 1; x < T_; ++x) {
        const double v = cur_[static_cast<std::size_t>(x)];
        if (v <= 0.0) continue;
        acc += v;
        last = x;
        if (acc > target) return x;
    }
    return last;
}

} // namespace polypin
