#pragma once

#include <cstdint>
#include <random>

namespace ledgersim {

/// Stream identifiers. Each stochastic actor draws from its own stream so
/// adding an actor never shifts another actor's draws.
enum class StreamKind : std::uint64_t { kUser = 1, kNode = 2, kAux = 3 };

/// splitmix64 mix of (master seed, kind, index).
std::uint64_t derive_seed(std::uint64_t master, StreamKind kind,
                          std::uint64_t index);

/// mt19937_64 with portable uniform and exponential transforms (the
/// std:: distributions are implementation-defined, which would break
/// cross-platform reproducibility).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, StreamKind kind, std::uint64_t index)
      : engine_(derive_seed(master, kind, index)) {}

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  /// Exponential with the given rate (mean 1/rate). rate must be > 0.
  double exponential(double rate);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ledgersim
