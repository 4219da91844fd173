#pragma once

#include <cstdint>
#include <random>

namespace ifd {

// Standard normal deviates with a platform-independent bit stream:
// std::mt19937_64 for the uniforms (53-bit mantissa) and Box-Muller for the
// transform. std::normal_distribution is avoided because its algorithm is
// left to the implementation.
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

    double uniform();  // in (0, 1)
    double operator()();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ifd
