#ifndef RDTK_RNG_HPP
#define RDTK_RNG_HPP

#include <cstdint>

namespace rdtk {

// splitmix64 (Steele, Lea, Vigna). Fixed algorithm so that seeded runs are
// reproducible bit-for-bit across builds and platforms; std::uniform_int_
// distribution would not give that guarantee.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Modulo bias is below 2^-50 for any n used here.
    std::uint64_t next_below(std::uint64_t n) { return next() % n; }

private:
    std::uint64_t state_;
};

} // namespace rdtk

#endif // RDTK_RNG_HPP
