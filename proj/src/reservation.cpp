// Copyright 2026 The rismac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rismac/reservation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <functional>
#include <queue>

namespace rismac {

ReservationProblem scmu_problem(int K, int r_max, int ledger_slots) {
  ReservationProblem p;
  p.K = K;
  p.r_max = r_max;
  p.capacity = {ledger_slots};
  p.target = K;
  return p;
}

ReservationProblem mcmu_problem(const SystemConfig& config, double zeta_s) {
  const Timings t = derived_timings(config);
  const double expected = config.t_h * zeta_s / t.t_s;
  ReservationProblem p;
  p.K = config.K;
  p.r_max = config.r_max;
  p.capacity.assign(static_cast<std::size_t>(config.C), config.slots_per_phase());
  p.target = std::clamp(static_cast<int>(std::floor(expected + 1e-9)), 0, config.K);
  return p;
}

namespace {

struct Choice {
  int c;
  int r;
};

struct Node {
  int depth = 0;
  int value = 0;
  int served = 0;
  int bound = 0;
  int parent = -1;  // index into the arena
  Choice choice{-1, 0};
  std::vector<int> rescap;
};

struct OpenEntry {
  int bound;
  int depth;
  int index;
  bool operator<(const OpenEntry& o) const {
    if (bound != o.bound) return bound < o.bound;
    return depth < o.depth;  // deeper first among equal bounds
  }
};

// Bound for the remaining users. Relaxing which user goes where, each
// channel offers marginal gains r_max, ..., r_max, rescap mod r_max, 0, ...;
// these are nonincreasing, so the `need` largest of them are optimal.
std::optional<int> relaxation_bound(const ReservationProblem& p, int depth, int served,
                                    const std::vector<int>& rescap) {
  const int need = p.target - served;
  const int slots = std::accumulate(rescap.begin(), rescap.end(), 0);
  if (need < 0 || need > p.K - depth || need > slots) return std::nullopt;
  long long full = 0;
  std::vector<int> rest;
  for (int cap : rescap) {
    full += cap / p.r_max;
    if (cap % p.r_max) rest.push_back(cap % p.r_max);
  }
  if (need <= full) return need * p.r_max;
  const auto extra = std::min(static_cast<std::size_t>(need - full), rest.size());
  std::partial_sort(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(extra), rest.end(), std::greater<>());
  return static_cast<int>(full * p.r_max + std::accumulate(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(extra), 0LL));
}

struct SolveResult {
  std::vector<Choice> path;
  int value = -1;
};

// Best-first branch and bound with a fixed prefix of choices. Nodes live in
// an arena and point at their parent, so a path is rebuilt only for leaves.
// Nodes whose bound falls below `floor` are dropped.
std::optional<SolveResult> branch_and_bound(const ReservationProblem& p, const std::vector<int>& caps,
                                            const std::vector<Choice>& prefix, std::int64_t& nodes,
                                            int floor = 0) {
  Node root;
  root.rescap = caps;
  for (const Choice& ch : prefix) {
    if (ch.c >= 0) {
      if (ch.r < 1 || ch.r > p.r_max || root.rescap[static_cast<std::size_t>(ch.c)] < ch.r) return std::nullopt;
      root.rescap[static_cast<std::size_t>(ch.c)] -= ch.r;
      root.value += ch.r;
      ++root.served;
    }
    ++root.depth;
  }
  auto rb = relaxation_bound(p, root.depth, root.served, root.rescap);
  if (!rb) return std::nullopt;
  root.bound = root.value + *rb;
  if (root.bound < floor) return std::nullopt;

  std::vector<Node> arena;
  arena.push_back(std::move(root));
  std::priority_queue<OpenEntry> open;
  open.push({arena[0].bound, arena[0].depth, 0});
  int best_leaf = -1;
  int best_value = -1;
  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (best_leaf >= 0 && top.bound <= best_value) break;  // nothing left can improve
    ++nodes;
    const Node node = arena[static_cast<std::size_t>(top.index)];
    if (node.depth == p.K) {
      best_leaf = top.index;
      best_value = node.value;
      continue;
    }
    auto push_child = [&](int c, int r) {
      Node child;
      child.depth = node.depth + 1;
      child.value = node.value + (c >= 0 ? r : 0);
      child.served = node.served + (c >= 0 ? 1 : 0);
      child.rescap = node.rescap;
      if (c >= 0) child.rescap[static_cast<std::size_t>(c)] -= r;
      auto b = relaxation_bound(p, child.depth, child.served, child.rescap);
      if (!b) return;
      child.bound = child.value + *b;
      if (child.bound < floor || (best_leaf >= 0 && child.bound <= best_value)) return;
      child.parent = top.index;
      child.choice = {c, r};
      arena.push_back(std::move(child));
      const Node& added = arena.back();
      open.push({added.bound, added.depth, static_cast<int>(arena.size() - 1)});
    };
    for (int c = 0; c < p.C(); ++c) {
      const int top_r = std::min(p.r_max, node.rescap[static_cast<std::size_t>(c)]);
      for (int r = top_r; r >= 1; --r) push_child(c, r);
    }
    push_child(-1, 0);
  }
  if (best_leaf < 0) return std::nullopt;

  SolveResult result;
  result.value = best_value;
  for (int i = best_leaf; i > 0; i = arena[static_cast<std::size_t>(i)].parent)
    result.path.push_back(arena[static_cast<std::size_t>(i)].choice);
  std::reverse(result.path.begin(), result.path.end());
  result.path.insert(result.path.begin(), prefix.begin(), prefix.end());
  return result;
}

void check_problem(const ReservationProblem& p) {
  if (p.K < 0) throw std::invalid_argument("reservation: K must be non-negative");
  if (p.r_max < 1) throw InfeasibleError("C6", "reservation: r_max must be at least 1");
  if (p.capacity.empty()) throw std::invalid_argument("reservation: at least one channel is required");
  for (int cap : p.capacity)
    if (cap < 0) throw std::invalid_argument("reservation: negative channel capacity");
  if (p.target < 0 || p.target > p.K)
    throw InfeasibleError("C12", "reservation: target of served users must lie in [0, K]");
  const int slots = std::accumulate(p.capacity.begin(), p.capacity.end(), 0);
  if (p.target > slots)
    throw InfeasibleError("ledger", "reservation: " + std::to_string(p.target) + " users need at least one slot each but only " +
                                        std::to_string(slots) + " are free");
}

}  // namespace

int optimal_objective(const ReservationProblem& p) {
  check_problem(p);
  std::int64_t nodes = 0;
  auto optimum = branch_and_bound(p, p.capacity, {}, nodes);
  if (!optimum) throw InfeasibleError("ledger", "reservation: no feasible assignment");
  return optimum->value;
}

Assignment solve_reservation(const ReservationProblem& p) {
  check_problem(p);
  Assignment out;
  auto optimum = branch_and_bound(p, p.capacity, {}, out.nodes);
  if (!optimum) throw InfeasibleError("ledger", "reservation: no feasible assignment");
  const int value = optimum->value;

  // Smallest per-channel load cap that still attains the optimum.
  std::vector<int> caps = p.capacity;
  if (p.C() > 1) {
    int lo = 0, hi = *std::max_element(p.capacity.begin(), p.capacity.end());
    auto attains = [&](int m) {
      std::vector<int> limited = p.capacity;
      for (auto& c : limited) c = std::min(c, m);
      auto r = branch_and_bound(p, limited, {}, out.nodes, value);
      return r && r->value == value;
    };
    while (lo < hi) {
      const int mid = lo + (hi - lo) / 2;
      if (attains(mid)) hi = mid;
      else lo = mid + 1;
    }
    for (auto& c : caps) c = std::min(c, lo);
  }

  // Fix users one at a time to the lexicographically smallest choice that
  // keeps the optimum reachable.
  std::vector<Choice> prefix;
  for (int k = 0; k < p.K; ++k) {
    bool fixed = false;
    for (int c = 0; c < p.C() && !fixed; ++c) {
      for (int r = 1; r <= p.r_max && !fixed; ++r) {
        prefix.push_back({c, r});
        auto res = branch_and_bound(p, caps, prefix, out.nodes, value);
        if (res && res->value == value) fixed = true;
        else prefix.pop_back();
      }
    }
    if (!fixed) prefix.push_back({-1, 0});
  }

  out.channel.resize(static_cast<std::size_t>(p.K));
  out.r.resize(static_cast<std::size_t>(p.K));
  for (int k = 0; k < p.K; ++k) {
    out.channel[static_cast<std::size_t>(k)] = prefix[static_cast<std::size_t>(k)].c;
    out.r[static_cast<std::size_t>(k)] = prefix[static_cast<std::size_t>(k)].r;
  }
  out.objective = value;
  return out;
}

Assignment solve_scmu_counts(const ReservationProblem& p) {
  if (p.C() != 1) throw std::invalid_argument("solve_scmu_counts: single channel expected");
  if (p.target != p.K) throw std::invalid_argument("solve_scmu_counts: every user is served");
  if (p.capacity[0] < p.K)
    throw InfeasibleError("ledger", "solve_scmu_counts: ledger holds " + std::to_string(p.capacity[0]) +
                                        " slots for " + std::to_string(p.K) + " users");
  return solve_reservation(p);
}

Assignment solve_mcmu_assignment(const ReservationProblem& p) { return solve_reservation(p); }

std::optional<std::string> check_assignment(const ReservationProblem& p, const Assignment& a) {
  if (static_cast<int>(a.channel.size()) != p.K || static_cast<int>(a.r.size()) != p.K)
    return "assignment length differs from K";
  std::vector<int> load(p.capacity.size(), 0);
  int served = 0, total = 0;
  for (int k = 0; k < p.K; ++k) {
    const int c = a.channel[static_cast<std::size_t>(k)];
    const int r = a.r[static_cast<std::size_t>(k)];
    if (c == -1) {
      if (r != 0) return "unserved user " + std::to_string(k) + " has r = " + std::to_string(r);
      continue;
    }
    if (c < 0 || c >= p.C()) return "user " + std::to_string(k) + " on unknown channel";
    if (r < 1 || r > p.r_max) return "C6: r out of [1, r_max] for user " + std::to_string(k);
    load[static_cast<std::size_t>(c)] += r;
    ++served;
    total += r;
  }
  for (std::size_t c = 0; c < load.size(); ++c)
    if (load[c] > p.capacity[c]) return "ledger: channel " + std::to_string(c) + " over capacity";
  if (served != p.target) return "C12: served " + std::to_string(served) + " users, target " + std::to_string(p.target);
  if (total != a.objective) return "objective does not match the counts";
  return std::nullopt;
}

}  // namespace rismac
