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

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rismac/config.hpp"

namespace rismac {

/// Joint choice of a sub-channel c_k (or none) and a reserved-transmission
/// count r_k for every user. Exactly `target` users are served, each with
/// 1 <= r_k <= r_max, and the counts on channel c may not exceed capacity[c].
/// The single-channel problem is the special case C = 1, target = K.
struct ReservationProblem {
  int K = 0;
  int r_max = 1;
  std::vector<int> capacity;  ///< free data slots per channel
  int target = 0;             ///< users to serve, sum of V(c_k)

  int C() const { return static_cast<int>(capacity.size()); }
};

ReservationProblem scmu_problem(int K, int r_max, int ledger_slots);
/// target = min(K, floor(t_h zeta_s / t_s)); every channel offers the full
/// transmission-phase slot grid.
ReservationProblem mcmu_problem(const SystemConfig& config, double zeta_s);

struct Assignment {
  std::vector<int> channel;  ///< -1 when unserved
  std::vector<int> r;        ///< 0 when unserved
  int objective = 0;
  std::int64_t nodes = 0;    ///< branch-and-bound nodes expanded, all solves
};

class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(std::string constraint, const std::string& what)
      : std::runtime_error(what), constraint_(std::move(constraint)) {}
  const std::string& constraint() const { return constraint_; }

 private:
  std::string constraint_;
};

/// Optimal Sigma r_k. Ties go first to the smallest maximum channel load and
/// then to the lexicographically smallest (c, r) with unserved ordered last.
Assignment solve_reservation(const ReservationProblem& problem);

/// Optimal Sigma r_k only, from a single branch-and-bound solve.
int optimal_objective(const ReservationProblem& problem);

/// Requires C == 1 and target == K.
Assignment solve_scmu_counts(const ReservationProblem& problem);
Assignment solve_mcmu_assignment(const ReservationProblem& problem);

/// Independent constraint check; returns a description of the first
/// violation.
std::optional<std::string> check_assignment(const ReservationProblem& problem, const Assignment& assignment);

}  // namespace rismac
