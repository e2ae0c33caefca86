#pragma once

#include <boost/random/normal_distribution.hpp>

#include <cstdint>
#include <random>

namespace coco {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Sub-streams of one path.
enum class Stream : std::uint64_t { firm_value = 0, capital_shock = 1 };

/// Independent engine per (seed, path, stream); the draw sequence of a path never depends on
/// which thread simulates it.
inline std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path, Stream stream) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ path);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    return std::mt19937_64(h);
}

/// Ziggurat normal sampler bound to one engine.
class NormalSource {
public:
    explicit NormalSource(std::mt19937_64 engine) : engine_(std::move(engine)) {}
    double operator()() { return dist_(engine_); }

private:
    std::mt19937_64 engine_;
    boost::random::normal_distribution<double> dist_;
};

} // namespace coco
