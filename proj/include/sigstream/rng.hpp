#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace sigstream {

/// Counter-based generator: output n of stream (seed, name) is a pure function
/// of those three values, so results never depend on which thread draws them or
/// in what order streams are created.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::string_view stream, std::uint64_t substream = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on {0, ..., n-1}; n must be positive.
    std::uint64_t below(std::uint64_t n);

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);
/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace sigstream
