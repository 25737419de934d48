#include "aiecon/world.hpp"

#include <algorithm>
#include <cstring>
#include <string>

namespace aiecon {

std::string_view to_string(Material m) {
  switch (m) {
    case Material::Wood: return "wood";
    case Material::Stone: return "stone";
    case Material::Iron: return "iron";
    case Material::Soil: return "soil";
  }
  return "?";
}

std::optional<Material> parse_material(std::string_view s) {
  for (Material m : kMaterials) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

std::string_view to_string(HouseType h) { return h == HouseType::Red ? "red" : "blue"; }

bool House::owned_by(AgentId a) const {
  return std::find(owners.begin(), owners.end(), a) != owners.end();
}

void WorldConfig::validate() const {
  if (width <= 0 || height <= 0) throw ConfigError("world size must be positive");
  if (num_agents < 1) throw ConfigError("world needs at least one agent");
  double total = obstacle_density;
  for (double d : density) {
    if (!(d >= 0.0 && d <= 1.0)) throw ConfigError("deposit density must lie in [0,1]");
    total += d;
  }
  for (double r : initial_regen) {
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("regeneration rate must lie in [0,1]");
  }
  if (!(obstacle_density >= 0.0 && obstacle_density <= 1.0)) {
    throw ConfigError("obstacle density must lie in [0,1]");
  }
  if (total > 1.0 + 1e-12) {
    throw ConfigError("deposit and obstacle densities sum above 1; placement cannot complete");
  }
  if (initial_units < 0) throw ConfigError("initial deposit units must be non-negative");
}

GridWorld::GridWorld(int width, int height)
    : width_(width), height_(height),
      cells_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
  if (width <= 0 || height <= 0) throw ConfigError("world size must be positive");
}

GridWorld GridWorld::init(const WorldConfig& config, std::uint64_t seed) {
  config.validate();
  GridWorld world(config.width, config.height);
  world.regen_rates_ = config.initial_regen;
  Rng rng(seed);

  std::vector<Position> free_cells;
  for (int y = 0; y < config.height; ++y) {
    for (int x = 0; x < config.width; ++x) {
      const double u = rng.uniform01();
      double edge = 0.0;
      Cell& c = world.cell({x, y});
      bool placed = false;
      for (Material m : kMaterials) {
        edge += config.density[static_cast<std::size_t>(index_of(m))];
        if (u < edge) {
          c.deposit = Deposit{m, config.initial_units,
                              config.initial_regen[static_cast<std::size_t>(index_of(m))]};
          placed = true;
          break;
        }
      }
      if (!placed && u < edge + config.obstacle_density) {
        c.obstacle = true;
        placed = true;
      }
      if (!placed) free_cells.push_back({x, y});
    }
  }

  if (static_cast<int>(free_cells.size()) < config.num_agents) {
    throw ConfigError("not enough empty cells to place " + std::to_string(config.num_agents) +
                      " agents");
  }
  // Partial Fisher-Yates: the first num_agents entries become a uniform sample.
  for (int a = 0; a < config.num_agents; ++a) {
    const auto remaining = free_cells.size() - static_cast<std::size_t>(a);
    const auto j = static_cast<std::size_t>(a) + rng.below(remaining);
    std::swap(free_cells[static_cast<std::size_t>(a)], free_cells[j]);
    world.place_agent(free_cells[static_cast<std::size_t>(a)]);
  }
  return world;
}

AgentId GridWorld::place_agent(Position p) {
  if (!in_bounds(p)) throw std::out_of_range("agent placed out of bounds");
  Cell& c = cell(p);
  if (c.occupant || c.obstacle) throw std::invalid_argument("agent placed on a blocked cell");
  const auto id = static_cast<AgentId>(positions_.size());
  c.occupant = id;
  positions_.push_back(p);
  return id;
}

void GridWorld::set_deposit(Position p, std::optional<Deposit> d) { cell(p).deposit = d; }

void GridWorld::set_regen_rates(const std::array<double, kNumMaterials>& rates) {
  regen_rates_ = rates;
  for (Cell& c : cells_) {
    if (c.deposit) c.deposit->regen_prob = rates[static_cast<std::size_t>(index_of(c.deposit->material))];
  }
}

int GridWorld::step_regen(const std::array<double, kNumMaterials>& rates, Rng& rng) {
  int refilled = 0;
  for (Cell& c : cells_) {
    if (!c.deposit) continue;
    const double p = rates[static_cast<std::size_t>(index_of(c.deposit->material))];
    c.deposit->regen_prob = p;
    if (c.deposit->units == 0 && rng.bernoulli(p)) {
      c.deposit->units = 1;
      ++refilled;
    }
  }
  return refilled;
}

bool GridWorld::can_enter(AgentId a, Position target) const {
  if (!in_bounds(target)) return false;
  const Cell& c = cell(target);
  if (c.obstacle || c.occupant) return false;
  if (c.house && !c.house->owned_by(a)) return false;
  return true;
}

bool GridWorld::move_agent(AgentId a, Direction d) {
  const Position from = position(a);
  const Position to = shifted(from, d);
  if (!can_enter(a, to)) return false;
  cell(from).occupant.reset();
  cell(to).occupant = a;
  positions_[static_cast<std::size_t>(a)] = to;
  return true;
}

GridWorld::GatherResult GridWorld::gather(AgentId a, double gather_skill, Rng& rng) {
  Cell& c = cell(position(a));
  if (!c.deposit || c.deposit->units <= 0) return {};
  GatherResult r{c.deposit->material, 1};
  c.deposit->units -= 1;
  // The bonus draw happens on every successful gather so the RNG stream does
  // not depend on how many units are left.
  const bool bonus = rng.bernoulli(gather_skill);
  if (bonus && c.deposit->units > 0) {
    c.deposit->units -= 1;
    r.units = 2;
  }
  return r;
}

bool GridWorld::place_house(Position p, HouseType type, std::vector<AgentId> owners) {
  Cell& c = cell(p);
  if (!c.buildable()) return false;
  c.house = House{type, std::move(owners)};
  return true;
}

std::int64_t GridWorld::deposit_units(Material m) const {
  std::int64_t total = 0;
  for (const Cell& c : cells_) {
    if (c.deposit && c.deposit->material == m) total += c.deposit->units;
  }
  return total;
}

int GridWorld::deposit_cells(Material m) const {
  return static_cast<int>(std::count_if(cells_.begin(), cells_.end(), [m](const Cell& c) {
    return c.deposit && c.deposit->material == m;
  }));
}

int GridWorld::house_count() const {
  return static_cast<int>(
      std::count_if(cells_.begin(), cells_.end(), [](const Cell& c) { return c.house.has_value(); }));
}

namespace {

struct Fnv {
  std::uint64_t h = 1469598103934665603ULL;
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  }
  template <typename T>
  void value(const T& v) {
    bytes(&v, sizeof(v));
  }
};

}  // namespace

std::uint64_t GridWorld::state_hash() const {
  Fnv f;
  f.value(width_);
  f.value(height_);
  for (const Cell& c : cells_) {
    const std::uint8_t flags = static_cast<std::uint8_t>((c.deposit ? 1 : 0) | (c.house ? 2 : 0) |
                                                         (c.occupant ? 4 : 0) | (c.obstacle ? 8 : 0));
    f.value(flags);
    if (c.deposit) {
      f.value(c.deposit->material);
      f.value(c.deposit->units);
      f.value(c.deposit->regen_prob);
    }
    if (c.house) {
      f.value(c.house->type);
      for (AgentId o : c.house->owners) f.value(o);
    }
    if (c.occupant) f.value(*c.occupant);
  }
  for (const Position& p : positions_) {
    f.value(p.x);
    f.value(p.y);
  }
  return f.h;
}

nlohmann::json GridWorld::snapshot() const {
  nlohmann::json cells = nlohmann::json::array();
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const Cell& c = cell({x, y});
      nlohmann::json j{{"x", x}, {"y", y}};
      if (c.deposit) {
        j["material"] = std::string(to_string(c.deposit->material));
        j["units"] = c.deposit->units;
        j["regen_prob"] = c.deposit->regen_prob;
      } else {
        j["material"] = nullptr;
        j["units"] = 0;
        j["regen_prob"] = 0.0;
      }
      if (c.house) {
        j["house"] = {{"type", std::string(to_string(c.house->type))}, {"owners", c.house->owners}};
      } else {
        j["house"] = nullptr;
      }
      j["occupant"] = c.occupant ? nlohmann::json(*c.occupant) : nlohmann::json(nullptr);
      if (c.obstacle) j["obstacle"] = true;
      cells.push_back(std::move(j));
    }
  }
  return {{"width", width_}, {"height", height_}, {"cells", std::move(cells)}};
}

GridWorld GridWorld::from_snapshot(const nlohmann::json& j) {
  GridWorld w(j.at("width").get<int>(), j.at("height").get<int>());
  std::vector<std::pair<AgentId, Position>> agents;
  for (const auto& jc : j.at("cells")) {
    const Position p{jc.at("x").get<int>(), jc.at("y").get<int>()};
    if (!w.in_bounds(p)) throw std::invalid_argument("snapshot cell out of bounds");
    Cell& c = w.cell(p);
    if (!jc.at("material").is_null()) {
      const auto m = parse_material(jc.at("material").get<std::string>());
      if (!m) throw std::invalid_argument("snapshot has unknown material");
      c.deposit = Deposit{*m, jc.at("units").get<int>(), jc.at("regen_prob").get<double>()};
    }
    if (!jc.at("house").is_null()) {
      const auto& h = jc.at("house");
      c.house = House{h.at("type").get<std::string>() == "red" ? HouseType::Red : HouseType::Blue,
                      h.at("owners").get<std::vector<AgentId>>()};
    }
    if (jc.contains("obstacle")) c.obstacle = jc.at("obstacle").get<bool>();
    if (!jc.at("occupant").is_null()) agents.emplace_back(jc.at("occupant").get<AgentId>(), p);
  }
  std::sort(agents.begin(), agents.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i].first != static_cast<AgentId>(i)) {
      throw std::invalid_argument("snapshot agent ids are not contiguous");
    }
    w.place_agent(agents[i].second);
  }
  return w;
}

}  // namespace aiecon
