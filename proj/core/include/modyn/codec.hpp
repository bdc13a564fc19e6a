#pragma once

#include <cstdint>
#include <vector>

#include "modyn/scenario.hpp"

namespace modyn {

inline constexpr std::uint64_t kDefaultStateCap = std::uint64_t{1} << 20;

// Bijection between joint configurations and flat indices in [0, M^N).
// The first agent owns the most significant digit: index
//   sum_p assignment[p] * M^(N-1-p).
class StateIndexCodec {
 public:
  // Throws CapacityExceeded when M^N does not fit in 64 bits.
  StateIndexCodec(int num_agents, int num_states);

  [[nodiscard]] int num_agents() const { return num_agents_; }
  [[nodiscard]] int num_states() const { return num_states_; }
  [[nodiscard]] std::uint64_t capacity() const { return capacity_; }
  // Weight of agent `position`'s digit, i.e. M^(N-1-position).
  [[nodiscard]] std::uint64_t stride(int position) const;

  // Throws IndexOutOfRange on a wrong-length assignment or digits
  // outside [0, M).
  [[nodiscard]] std::uint64_t encode(const NetworkConfig& config) const;
  // Throws IndexOutOfRange when index >= capacity().
  [[nodiscard]] NetworkConfig decode(std::uint64_t index) const;
  // Allocation-free decode for hot loops; resizes `config` as needed.
  void decode_into(std::uint64_t index, NetworkConfig& config) const;

 private:
  int num_agents_;
  int num_states_;
  std::uint64_t capacity_;
  std::vector<std::uint64_t> strides_;
};

// Codec for a scenario's joint state space. Throws CapacityExceeded when the
// space is larger than `cap` states.
[[nodiscard]] StateIndexCodec make_codec(const Scenario& scenario,
                                         std::uint64_t cap = kDefaultStateCap);

}  // namespace modyn
