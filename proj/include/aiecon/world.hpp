#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "aiecon/common.hpp"

namespace aiecon {

struct Deposit {
  Material material = Material::Wood;
  int units = 0;
  double regen_prob = 0.0;
};

struct House {
  HouseType type = HouseType::Red;
  std::vector<AgentId> owners;  // one builder, or two for a joint build

  bool owned_by(AgentId a) const;
};

struct Cell {
  std::optional<Deposit> deposit;
  std::optional<House> house;
  std::optional<AgentId> occupant;
  bool obstacle = false;

  bool buildable() const { return !deposit && !house && !obstacle; }
};

struct WorldConfig {
  int width = 25;
  int height = 25;
  int num_agents = 6;
  // Probability that a cell becomes a deposit of each material.
  std::array<double, kNumMaterials> density{0.05, 0.05, 0.05, 0.05};
  std::array<double, kNumMaterials> initial_regen{0.02, 0.02, 0.02, 0.02};
  // Units placed on each deposit at init. A second unit is what a gather bonus draws on.
  int initial_units = 2;
  double obstacle_density = 0.0;

  void validate() const;
};

class GridWorld {
 public:
  GridWorld(int width, int height);

  // Deposits are drawn cell by cell (one categorical draw per cell, so the
  // count of each material is Binomial(cells, density)); agents then go to
  // uniformly chosen distinct cells without deposit or obstacle.
  static GridWorld init(const WorldConfig& config, std::uint64_t seed);

  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(Position p) const {
    return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_;
  }

  const Cell& cell(Position p) const { return cells_[index(p)]; }
  Cell& cell(Position p) { return cells_[index(p)]; }

  int num_agents() const { return static_cast<int>(positions_.size()); }
  Position position(AgentId a) const { return positions_.at(static_cast<std::size_t>(a)); }
  std::span<const Position> positions() const { return positions_; }

  // Adds an agent on a free cell; returns its id.
  AgentId place_agent(Position p);
  void set_deposit(Position p, std::optional<Deposit> d);

  const std::array<double, kNumMaterials>& regen_rates() const { return regen_rates_; }
  void set_regen_rates(const std::array<double, kNumMaterials>& rates);

  // Each deposit cell with zero units respawns one unit with its material's
  // rate. Returns the number of cells refilled.
  int step_regen(const std::array<double, kNumMaterials>& rates, Rng& rng);
  int step_regen(Rng& rng) { return step_regen(regen_rates_, rng); }

  // True iff the target is in bounds, free of agents and obstacles, and not
  // a house the agent does not own.
  bool can_enter(AgentId a, Position target) const;
  bool move_agent(AgentId a, Direction d);

  struct GatherResult {
    Material material = Material::Wood;
    int units = 0;
  };
  // One unit from the deposit under the agent plus a bonus unit with
  // probability gather_skill when the deposit still holds one.
  GatherResult gather(AgentId a, double gather_skill, Rng& rng);

  bool place_house(Position p, HouseType type, std::vector<AgentId> owners);

  std::int64_t deposit_units(Material m) const;
  int deposit_cells(Material m) const;
  int house_count() const;

  // FNV-1a over the full cell state and agent positions.
  std::uint64_t state_hash() const;

  nlohmann::json snapshot() const;
  static GridWorld from_snapshot(const nlohmann::json& j);

 private:
  std::size_t index(Position p) const {
    return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(p.x);
  }

  int width_;
  int height_;
  std::vector<Cell> cells_;
  std::vector<Position> positions_;
  std::array<double, kNumMaterials> regen_rates_{};
};

}  // namespace aiecon
