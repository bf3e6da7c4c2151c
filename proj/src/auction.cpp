#include "v2g/auction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace v2g::auction {

namespace {

void validate_entry(double price, double quantity, const char* what) {
  if (!std::isfinite(price) || price < 0.0) {
    throw std::invalid_argument(std::string(what) +
                                ": price must be finite and >= 0");
  }
  if (!std::isfinite(quantity) || quantity < 0.0) {
    throw std::invalid_argument(std::string(what) +
                                ": quantity must be finite and >= 0");
  }
}

// Shared merge for both sides; `ascending` selects the sort direction.
template <typename T, typename PriceFn, typename QtyFn, typename IdFn>
std::vector<MergedParticipant> merge_side(std::span<const T> entries,
                                          bool ascending, PriceFn price_of,
                                          QtyFn qty_of, IdFn id_of) {
  std::vector<std::size_t> order;
  order.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (qty_of(entries[i]) > 0.0) order.push_back(i);
  }
  // Ties in price are grouped; within a group accumulate in id order so
  // the result does not depend on input order.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double pa = price_of(entries[a]);
    const double pb = price_of(entries[b]);
    if (pa != pb) return ascending ? pa < pb : pa > pb;
    return id_of(entries[a]) < id_of(entries[b]);
  });

  std::vector<MergedParticipant> merged;
  for (std::size_t idx : order) {
    const double p = price_of(entries[idx]);
    const double q = qty_of(entries[idx]);
    if (!merged.empty() && merged.back().price == p) {
      merged.back().quantity += q;
      merged.back().members.emplace_back(idx, q);
    } else {
      MergedParticipant mp;
      mp.price = p;
      mp.quantity = q;
      mp.members.emplace_back(idx, q);
      merged.push_back(std::move(mp));
    }
  }
  return merged;
}

std::vector<double> cumulative_quantities(
    std::span<const MergedParticipant> side) {
  std::vector<double> cum(side.size() + 1, 0.0);
  for (std::size_t i = 0; i < side.size(); ++i) {
    cum[i + 1] = cum[i] + side[i].quantity;
  }
  return cum;
}

// Allocate `volume` over the admitted participants [0, count) in list
// order, then split each virtual allocation back to its members
// proportionally to their offered quantities.
void allocate_in_order(std::span<const MergedParticipant> side,
                       std::size_t count, double volume,
                       std::vector<double>& out) {
  double remaining = volume;
  for (std::size_t i = 0; i < count; ++i) {
    const double q = std::min(side[i].quantity, remaining);
    remaining -= q;
    if (q <= 0.0) continue;
    const double ratio = q / side[i].quantity;
    for (const auto& [orig, member_qty] : side[i].members) {
      out[orig] = member_qty * ratio;
    }
  }
}

}  // namespace

double StepCurve::supply_at(double p) const {
  double q = 0.0;
  for (const Step& s : steps) {
    if (s.price <= p) q = s.cumulative_quantity;
  }
  return q;
}

double StepCurve::demand_at(double p) const {
  double q = 0.0;
  for (const Step& s : steps) {
    if (s.price >= p) q = s.cumulative_quantity;
  }
  return q;
}

MergedBook order_and_merge(std::span<const Ask> asks,
                           std::span<const BuyBid> bids) {
  for (const Ask& a : asks) validate_entry(a.reservation_price, a.quantity, "ask");
  for (const BuyBid& b : bids) validate_entry(b.bid, b.quantity, "bid");

  MergedBook book;
  book.asks = merge_side(
      asks, /*ascending=*/true, [](const Ask& a) { return a.reservation_price; },
      [](const Ask& a) { return a.quantity; },
      [](const Ask& a) { return a.seller_id; });
  book.bids = merge_side(
      bids, /*ascending=*/false, [](const BuyBid& b) { return b.bid; },
      [](const BuyBid& b) { return b.quantity; },
      [](const BuyBid& b) { return b.buyer_id; });
  return book;
}

StepCurve build_supply_curve(std::span<const MergedParticipant> ordered_asks) {
  StepCurve curve;
  double cum = 0.0;
  for (std::size_t i = 0; i < ordered_asks.size(); ++i) {
    cum += ordered_asks[i].quantity;
    curve.steps.push_back({cum, ordered_asks[i].price, i});
  }
  return curve;
}

StepCurve build_demand_curve(std::span<const MergedParticipant> ordered_bids) {
  StepCurve curve;
  double cum = 0.0;
  for (std::size_t i = 0; i < ordered_bids.size(); ++i) {
    cum += ordered_bids[i].quantity;
    curve.steps.push_back({cum, ordered_bids[i].price, i});
  }
  return curve;
}

std::optional<Intersection> find_intersection(const MergedBook& book) {
  const auto& asks = book.asks;
  const auto& bids = book.bids;
  if (asks.empty() || bids.empty()) return std::nullopt;
  if (bids.front().price < asks.front().price) return std::nullopt;

  const std::vector<double> cum_a = cumulative_quantities(asks);
  const std::vector<double> cum_x = cumulative_quantities(bids);

  // For each candidate L, the matching M is the largest m with
  // B_m >= S_L; it is non-increasing in L, so a single backward sweep of
  // the bid list suffices. Every such pair satisfies B_{M+1} < S_L <=
  // S_{L+1} (prices are strict after merging), i.e. the marginal
  // condition. The crossing of the step curves is the pair maximizing the
  // traded volume; ties go to the largest L.
  std::size_t m = bids.size();  // 1-based candidate M
  bool found = false;
  Intersection best{};
  double best_volume = -1.0;
  for (std::size_t l = 1; l <= asks.size(); ++l) {
    while (m >= 1 && bids[m - 1].price < asks[l - 1].price) --m;
    if (m == 0) break;  // no buyer can afford seller l or any later one
    const double volume = std::min(cum_a[l - 1], cum_x[m - 1]);
    if (volume >= best_volume) {
      best_volume = volume;
      best = {l, m};
      found = true;
    }
  }
  if (!found) return std::nullopt;
  return best;
}

AuctionOutcome clear(std::span<const Ask> asks, std::span<const BuyBid> bids) {
  AuctionOutcome out;
  out.seller_allocations.assign(asks.size(), 0.0);
  out.buyer_allocations.assign(bids.size(), 0.0);

  const MergedBook book = order_and_merge(asks, bids);
  const auto crossing = find_intersection(book);
  if (!crossing) return out;

  const std::size_t l = crossing->seller_index;
  const std::size_t m = crossing->buyer_index;
  out.priced = true;
  out.marginal_seller_index = l;
  out.marginal_buyer_index = m;
  out.price = (book.asks[l - 1].price + book.bids[m - 1].price) / 2.0;

  const std::vector<double> cum_a = cumulative_quantities(book.asks);
  const std::vector<double> cum_x = cumulative_quantities(book.bids);
  const double admitted_supply = cum_a[l - 1];
  const double admitted_demand = cum_x[m - 1];
  out.oversupply = std::max(0.0, admitted_supply - admitted_demand);
  out.undersupply = std::max(0.0, admitted_demand - admitted_supply);
  out.traded_volume = std::min(admitted_supply, admitted_demand);
  out.traded = out.traded_volume > 0.0;
  if (!out.traded) return out;

  if (out.oversupply > 0.0 && out.oversupply > book.asks[l - 2].quantity) {
    out.backward_clipped = true;
  }
  if (out.undersupply > 0.0 && out.undersupply > book.bids[m - 2].quantity) {
    out.backward_clipped = true;
  }

  allocate_in_order(book.asks, l - 1, out.traded_volume,
                    out.seller_allocations);
  allocate_in_order(book.bids, m - 1, out.traded_volume,
                    out.buyer_allocations);
  return out;
}

}  // namespace v2g::auction
