#include "sigstream/rng.hpp"

namespace sigstream {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis) {
    std::uint64_t h = basis;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

CounterRng::CounterRng(std::uint64_t seed, std::string_view stream, std::uint64_t substream)
    : key_(splitmix64(splitmix64(seed) ^ fnv1a(stream)) ^ splitmix64(substream + 0x632be59bd9b4e019ULL)) {}

CounterRng::result_type CounterRng::operator()() {
    // Two rounds keep neighbouring counters decorrelated.
    return splitmix64(splitmix64(key_ + counter_++ * 0x9e3779b97f4a7c15ULL) ^ key_);
}

double CounterRng::uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::below(std::uint64_t n) {
    // Reject the tail that would bias the modulus.
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
        x = (*this)();
    } while (x >= limit);
    return x % n;
}

}  // namespace sigstream
