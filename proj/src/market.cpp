#include "aiecon/market.hpp"

#include <algorithm>

namespace aiecon {

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::InsufficientFunds: return "insufficient-funds";
    case RejectReason::InsufficientResource: return "insufficient-resource";
    case RejectReason::OrderCap: return "order-cap";
    case RejectReason::InvalidPrice: return "invalid-price";
  }
  return "?";
}

int OrderBook::open_orders(AgentId agent, Material material, Side side) const {
  int n = 0;
  for (const Level& level : ladder(material, side)) {
    n += static_cast<int>(std::count_if(level.begin(), level.end(),
                                        [agent](const Order& o) { return o.agent == agent; }));
  }
  return n;
}

SubmitResult OrderBook::submit(AgentId agent, Side side, Material material, int price, Step now,
                               Holdings& holdings) {
  if (price < kMinPrice || price > kMaxPrice) return {std::nullopt, RejectReason::InvalidPrice};

  int open = open_orders(agent, material, side);
  if (config_.cap_mode == OrderCapMode::PerResource) {
    open += open_orders(agent, material, side == Side::Bid ? Side::Ask : Side::Bid);
  }
  const auto m = static_cast<std::size_t>(index_of(material));
  if (side == Side::Bid && holdings.coin < price) {
    return {std::nullopt, RejectReason::InsufficientFunds};
  }
  if (side == Side::Ask && holdings.units[m] < 1) {
    return {std::nullopt, RejectReason::InsufficientResource};
  }
  if (open >= config_.order_cap) return {std::nullopt, RejectReason::OrderCap};

  if (side == Side::Bid) {
    holdings.coin -= price;
    holdings.escrow_coin += price;
  } else {
    holdings.units[m] -= 1;
    holdings.escrow_units[m] += 1;
  }
  Order o{next_id_++, agent, side, material, price, now};
  ladder(material, side)[static_cast<std::size_t>(price)].push_back(o);
  return {o, std::nullopt};
}

bool OrderBook::remove(const Order& o) {
  Level& level = ladder(o.material, o.side)[static_cast<std::size_t>(o.price)];
  auto it = std::find_if(level.begin(), level.end(), [&](const Order& x) { return x.id == o.id; });
  if (it == level.end()) return false;
  level.erase(it);
  return true;
}

std::optional<Trade> OrderBook::match(const Order& incoming, std::span<Holdings> agents, Rng& rng) {
  const Side other = incoming.side == Side::Bid ? Side::Ask : Side::Bid;
  Ladder& book = ladder(incoming.material, other);

  Level* best = nullptr;
  if (incoming.side == Side::Bid) {
    for (int p = kMinPrice; p <= incoming.price; ++p) {
      if (!book[static_cast<std::size_t>(p)].empty()) {
        best = &book[static_cast<std::size_t>(p)];
        break;
      }
    }
  } else {
    for (int p = kMaxPrice; p >= incoming.price; --p) {
      if (!book[static_cast<std::size_t>(p)].empty()) {
        best = &book[static_cast<std::size_t>(p)];
        break;
      }
    }
  }
  if (best == nullptr) return std::nullopt;

  // Levels are FIFO, so placement times are non-decreasing along the queue.
  std::size_t ties = 1;
  while (ties < best->size() && (*best)[ties].placed_at == best->front().placed_at) ++ties;
  const std::size_t pick = ties > 1 ? static_cast<std::size_t>(rng.below(ties)) : 0;
  const Order resting = (*best)[pick];
  best->erase(best->begin() + static_cast<std::ptrdiff_t>(pick));

  const Order& bid = incoming.side == Side::Bid ? incoming : resting;
  const Order& ask = incoming.side == Side::Bid ? resting : incoming;
  remove(incoming);

  const int price = resting.price;
  const auto m = static_cast<std::size_t>(index_of(incoming.material));
  Holdings& buyer = agents[static_cast<std::size_t>(bid.agent)];
  Holdings& seller = agents[static_cast<std::size_t>(ask.agent)];
  buyer.escrow_coin -= bid.price;
  buyer.coin += bid.price - price;
  buyer.units[m] += 1;
  seller.escrow_units[m] -= 1;
  seller.coin += price;

  Trade t{incoming.placed_at, incoming.material, price, bid.agent, ask.agent, bid.id, ask.id};
  history_.push_back(t);
  return t;
}

SubmitResult OrderBook::place(AgentId agent, Side side, Material material, int price, Step now,
                              std::span<Holdings> agents, Rng& rng, std::optional<Trade>* trade) {
  SubmitResult r = submit(agent, side, material, price, now, agents[static_cast<std::size_t>(agent)]);
  if (r.accepted()) {
    auto t = match(*r.order, agents, rng);
    if (trade) *trade = t;
  } else if (trade) {
    trade->reset();
  }
  return r;
}

void OrderBook::refund(const Order& o, std::span<Holdings> agents) {
  Holdings& h = agents[static_cast<std::size_t>(o.agent)];
  if (o.side == Side::Bid) {
    h.escrow_coin -= o.price;
    h.coin += o.price;
  } else {
    const auto m = static_cast<std::size_t>(index_of(o.material));
    h.escrow_units[m] -= 1;
    h.units[m] += 1;
  }
}

std::vector<Order> OrderBook::expire(Step now, std::span<Holdings> agents) {
  std::vector<Order> expired;
  for (Ladder& l : ladders_) {
    for (Level& level : l) {
      for (auto it = level.begin(); it != level.end();) {
        if (now - it->placed_at >= config_.expiry) {
          expired.push_back(*it);
          it = level.erase(it);
        } else {
          ++it;
        }
      }
    }
  }
  std::sort(expired.begin(), expired.end(), [](const Order& a, const Order& b) { return a.id < b.id; });
  for (const Order& o : expired) refund(o, agents);
  return expired;
}

std::size_t OrderBook::size() const {
  std::size_t n = 0;
  for (const Ladder& l : ladders_) {
    for (const Level& level : l) n += level.size();
  }
  return n;
}

std::vector<Order> OrderBook::orders() const {
  std::vector<Order> all;
  for (const Ladder& l : ladders_) {
    for (const Level& level : l) all.insert(all.end(), level.begin(), level.end());
  }
  std::sort(all.begin(), all.end(), [](const Order& a, const Order& b) { return a.id < b.id; });
  return all;
}

std::array<int, kNumPrices> OrderBook::depth(Material m, Side s, AgentId only, AgentId exclude) const {
  std::array<int, kNumPrices> out{};
  const Ladder& l = ladder(m, s);
  for (std::size_t p = 0; p < l.size(); ++p) {
    for (const Order& o : l[p]) {
      if (only >= 0 && o.agent != only) continue;
      if (exclude >= 0 && o.agent == exclude) continue;
      ++out[p];
    }
  }
  return out;
}

}  // namespace aiecon
