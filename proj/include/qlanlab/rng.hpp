#ifndef QLANLAB_RNG_HPP
#define QLANLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace qlanlab {

/// Seeded generator with hand-rolled uniform/normal transforms so that
/// identical seeds give identical streams on every platform and standard
/// library. std::normal_distribution is implementation-defined; this is not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform double in [0, 1) built from the top 53 bits of the engine.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; caches the spare deviate.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t next_u64() { return eng_(); }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace qlanlab

#endif
