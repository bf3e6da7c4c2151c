#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

// Macro-layer trade-reduction double auction. Sellers (aggregators) submit
// (reservation price, quantity) asks, buyers submit (bid, quantity). The
// auction orders both sides, merges equal-price participants into virtual
// ones, intersects the cumulative step curves, clears everyone strictly
// before the marginal seller L and marginal buyer M at the midpoint price
// (S_L + B_M) / 2, and allocates volume in price order with the marginal
// admitted participant clipped by the over/undersupply.

namespace v2g::auction {

using Id = std::uint32_t;

struct Ask {
  Id seller_id = 0;
  double reservation_price = 0.0;  // $/MWh
  double quantity = 0.0;           // MWh
};

struct BuyBid {
  Id buyer_id = 0;
  double bid = 0.0;       // $/MWh
  double quantity = 0.0;  // MWh
};

// One virtual participant after merging equal prices. `members` holds
// (index into the original input list, that participant's quantity);
// allocations are split back proportionally to those quantities.
struct MergedParticipant {
  double price = 0.0;
  double quantity = 0.0;
  std::vector<std::pair<std::size_t, double>> members;
};

struct MergedBook {
  std::vector<MergedParticipant> asks;  // strictly increasing price
  std::vector<MergedParticipant> bids;  // strictly decreasing price
};

struct Step {
  double cumulative_quantity = 0.0;
  double price = 0.0;
  std::size_t participant = 0;  // index into the merged list (0-based)
};

struct StepCurve {
  std::vector<Step> steps;
  bool empty() const { return steps.empty(); }
  // Cumulative quantity offered at prices <= p (supply reading).
  double supply_at(double p) const;
  // Cumulative quantity demanded at prices >= p (demand reading).
  double demand_at(double p) const;
};

// Marginal indices, 1-based over the merged ordered lists.
struct Intersection {
  std::size_t seller_index = 0;  // L
  std::size_t buyer_index = 0;   // M
};

struct AuctionOutcome {
  bool priced = false;   // a marginal pair (L, M) exists; price is defined
  bool traded = false;   // priced and the traded volume is > 0
  double price = 0.0;    // (S_L + B_M) / 2 when priced
  std::size_t marginal_seller_index = 0;  // L, 1-based over merged asks
  std::size_t marginal_buyer_index = 0;   // M, 1-based over merged bids
  double oversupply = 0.0;   // Psi
  double undersupply = 0.0;  // Phi
  double traded_volume = 0.0;
  // Set when the oversupply (undersupply) exceeds the marginal admitted
  // participant's whole quantity and clipping had to continue backwards.
  bool backward_clipped = false;
  // Aligned with the input ask/bid lists.
  std::vector<double> seller_allocations;
  std::vector<double> buyer_allocations;
};

// Sort asks ascending / bids descending by price, merge exact price ties
// into virtual participants, drop zero-quantity entries. Throws
// std::invalid_argument on negative or non-finite prices/quantities.
MergedBook order_and_merge(std::span<const Ask> asks,
                           std::span<const BuyBid> bids);

StepCurve build_supply_curve(std::span<const MergedParticipant> ordered_asks);
StepCurve build_demand_curve(std::span<const MergedParticipant> ordered_bids);

// Find the marginal pair (L, M) with B_M >= S_L and B_{M+1} < S_{L+1},
// using sentinels S_{N+1} = +inf and B_{K+1} = -inf. Among the pairs
// satisfying the condition, the one maximizing the traded volume
// min(sum_{n<L} A_n, sum_{k<M} X_k) is the step-curve crossing; ties are
// broken toward the largest L. Returns nullopt when B_1 < S_1 or a curve
// is empty.
std::optional<Intersection> find_intersection(const MergedBook& book);

AuctionOutcome clear(std::span<const Ask> asks, std::span<const BuyBid> bids);

}  // namespace v2g::auction
