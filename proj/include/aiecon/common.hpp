#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aiecon {

using AgentId = int;
using Coins = std::int64_t;
using Step = std::int64_t;

enum class Material : std::uint8_t { Wood = 0, Stone = 1, Iron = 2, Soil = 3 };

inline constexpr int kNumMaterials = 4;
inline constexpr std::array<Material, kNumMaterials> kMaterials{
    Material::Wood, Material::Stone, Material::Iron, Material::Soil};

constexpr int index_of(Material m) { return static_cast<int>(m); }

std::string_view to_string(Material m);
std::optional<Material> parse_material(std::string_view s);

enum class HouseType : std::uint8_t { Red = 0, Blue = 1 };

// Red houses need wood + stone, blue houses iron + soil.
constexpr std::array<Material, 2> recipe(HouseType h) {
  return h == HouseType::Red ? std::array<Material, 2>{Material::Wood, Material::Stone}
                             : std::array<Material, 2>{Material::Iron, Material::Soil};
}

std::string_view to_string(HouseType h);

enum class Direction : std::uint8_t { Up = 0, Down = 1, Left = 2, Right = 3 };

struct Position {
  int x = 0;
  int y = 0;
  friend bool operator==(const Position&, const Position&) = default;
};

constexpr Position shifted(Position p, Direction d) {
  switch (d) {
    case Direction::Up: return {p.x, p.y - 1};
    case Direction::Down: return {p.x, p.y + 1};
    case Direction::Left: return {p.x - 1, p.y};
    case Direction::Right: return {p.x + 1, p.y};
  }
  return p;
}

constexpr int manhattan(Position a, Position b) {
  return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

// Coins and goods an agent owns. Escrowed amounts belong to the agent but are
// locked by open market orders.
struct Holdings {
  Coins coin = 0;
  Coins escrow_coin = 0;
  std::array<std::int64_t, kNumMaterials> units{};
  std::array<std::int64_t, kNumMaterials> escrow_units{};

  Coins wealth() const { return coin + escrow_coin; }
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// SplitMix64 finalizer; derives independent stream seeds from a master seed.
constexpr std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// mt19937_64 with distribution code written out here, since the standard
// distributions are not specified bit-for-bit across library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), rejection-sampled to avoid modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x < limit);
    return x % bound;
  }

  bool bernoulli(double p) { return p >= 1.0 || (p > 0.0 && uniform01() < p); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aiecon
