#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "aiecon/common.hpp"

namespace aiecon {

enum class Side : std::uint8_t { Bid = 0, Ask = 1 };

inline constexpr int kMinPrice = 0;
inline constexpr int kMaxPrice = 10;
inline constexpr int kNumPrices = kMaxPrice - kMinPrice + 1;

struct Order {
  std::uint64_t id = 0;
  AgentId agent = 0;
  Side side = Side::Bid;
  Material material = Material::Wood;
  int price = 0;
  Step placed_at = 0;
};

struct Trade {
  Step step = 0;
  Material material = Material::Wood;
  int price = 0;
  AgentId buyer = 0;
  AgentId seller = 0;
  std::uint64_t bid_id = 0;
  std::uint64_t ask_id = 0;

  friend bool operator==(const Trade&, const Trade&) = default;
};

enum class RejectReason : std::uint8_t { InsufficientFunds, InsufficientResource, OrderCap, InvalidPrice };

std::string_view to_string(RejectReason r);

struct SubmitResult {
  std::optional<Order> order;  // set when accepted
  std::optional<RejectReason> reason;

  bool accepted() const { return order.has_value(); }
};

enum class OrderCapMode : std::uint8_t {
  PerSide,      // at most `cap` open orders per (agent, material, side)
  PerResource,  // at most `cap` open orders per (agent, material), both sides together
};

struct MarketConfig {
  int order_cap = 5;
  OrderCapMode cap_mode = OrderCapMode::PerSide;
  Step expiry = 50;
};

// Continuous double auction over the four materials. Orders rest in per
// (material, side, price) FIFO queues; escrow lives in the agents' Holdings.
class OrderBook {
 public:
  explicit OrderBook(MarketConfig config = {}) : config_(config) {}

  const MarketConfig& config() const { return config_; }

  // Validates price, cap, and free balance; on acceptance locks escrow and
  // stores the order. No state changes on rejection.
  SubmitResult submit(AgentId agent, Side side, Material material, int price, Step now,
                      Holdings& holdings);

  // Matches an accepted incoming order against the best complementary order:
  // best price, then earliest placement, then uniform random among the rest.
  // Executes at the resting order's price and removes both orders.
  std::optional<Trade> match(const Order& incoming, std::span<Holdings> agents, Rng& rng);

  // submit followed by match when accepted.
  SubmitResult place(AgentId agent, Side side, Material material, int price, Step now,
                     std::span<Holdings> agents, Rng& rng, std::optional<Trade>* trade = nullptr);

  // Removes orders with now - placed_at >= expiry and refunds their escrow.
  std::vector<Order> expire(Step now, std::span<Holdings> agents);

  int open_orders(AgentId agent, Material material, Side side) const;
  std::size_t size() const;
  std::vector<Order> orders() const;  // all open orders ordered by id

  // Counts of open orders at each price, optionally restricted to one agent
  // (agent >= 0) or excluding one agent (exclude >= 0).
  std::array<int, kNumPrices> depth(Material m, Side s, AgentId only = -1, AgentId exclude = -1) const;

  const std::vector<Trade>& history() const { return history_; }

 private:
  using Level = std::deque<Order>;
  using Ladder = std::array<Level, kNumPrices>;

  Ladder& ladder(Material m, Side s) {
    return ladders_[static_cast<std::size_t>(index_of(m) * 2 + static_cast<int>(s))];
  }
  const Ladder& ladder(Material m, Side s) const {
    return ladders_[static_cast<std::size_t>(index_of(m) * 2 + static_cast<int>(s))];
  }
  bool remove(const Order& o);
  void refund(const Order& o, std::span<Holdings> agents);

  MarketConfig config_;
  std::array<Ladder, kNumMaterials * 2> ladders_{};
  std::uint64_t next_id_ = 1;
  std::vector<Trade> history_;
};

}  // namespace aiecon
