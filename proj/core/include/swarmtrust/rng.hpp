#pragma once

#include <cstdint>
#include <random>

namespace swarmtrust {

/// Source of uniform draws in [0, 1). Virtual so tests can force values.
class UniformSource {
public:
    virtual ~UniformSource() = default;
    virtual double next() = 0;
};

/// Deterministic generator used everywhere randomness is needed. Doubles are
/// built from the raw 64-bit output ((x >> 11) * 2^-53) instead of the
/// standard distributions, whose output is implementation-defined; this keeps
/// seeded streams identical across platforms.
class SeededRng final : public UniformSource {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    double next() override { return uniform01(); }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t next_u64() { return engine_(); }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Index in [0, n); n must be > 0. Plain modulo: the bias is ~n/2^64,
    /// far below anything observable at simulation scale.
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(engine_() % static_cast<std::uint64_t>(n));
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace swarmtrust
