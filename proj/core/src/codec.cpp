#include "modyn/codec.hpp"

#include <limits>
#include <sstream>

#include "modyn/errors.hpp"

namespace modyn {
namespace {

// M^N with overflow detection; returns false when the product leaves uint64.
bool checked_power(std::uint64_t base, int exponent, std::uint64_t& out) {
  std::uint64_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base) {
      return false;
    }
    result *= base;
  }
  out = result;
  return true;
}

}  // namespace

StateIndexCodec::StateIndexCodec(int num_agents, int num_states)
    : num_agents_(num_agents), num_states_(num_states) {
  if (num_agents < 1 || num_states < 1) {
    throw IndexOutOfRange("codec needs at least one agent and one state");
  }
  if (!checked_power(static_cast<std::uint64_t>(num_states), num_agents, capacity_)) {
    std::ostringstream os;
    os << "joint state space " << num_states << "^" << num_agents
       << " does not fit in 64 bits";
    throw CapacityExceeded(os.str());
  }
  strides_.resize(static_cast<std::size_t>(num_agents));
  std::uint64_t stride = 1;
  for (int p = num_agents - 1; p >= 0; --p) {
    strides_[static_cast<std::size_t>(p)] = stride;
    stride *= static_cast<std::uint64_t>(num_states);
  }
}

std::uint64_t StateIndexCodec::stride(int position) const {
  if (position < 0 || position >= num_agents_) {
    throw IndexOutOfRange("agent position " + std::to_string(position) + " out of range");
  }
  return strides_[static_cast<std::size_t>(position)];
}

std::uint64_t StateIndexCodec::encode(const NetworkConfig& config) const {
  if (static_cast<int>(config.assignment.size()) != num_agents_) {
    std::ostringstream os;
    os << "assignment has " << config.assignment.size() << " entries, expected "
       << num_agents_;
    throw IndexOutOfRange(os.str());
  }
  std::uint64_t index = 0;
  for (int p = 0; p < num_agents_; ++p) {
    const int digit = config.assignment[static_cast<std::size_t>(p)];
    if (digit < 0 || digit >= num_states_) {
      std::ostringstream os;
      os << "state " << digit << " for agent position " << p << " outside [0, "
         << num_states_ << ")";
      throw IndexOutOfRange(os.str());
    }
    index += static_cast<std::uint64_t>(digit) * strides_[static_cast<std::size_t>(p)];
  }
  return index;
}

NetworkConfig StateIndexCodec::decode(std::uint64_t index) const {
  NetworkConfig config;
  decode_into(index, config);
  return config;
}

void StateIndexCodec::decode_into(std::uint64_t index, NetworkConfig& config) const {
  if (index >= capacity_) {
    std::ostringstream os;
    os << "joint index " << index << " outside [0, " << capacity_ << ")";
    throw IndexOutOfRange(os.str());
  }
  config.assignment.resize(static_cast<std::size_t>(num_agents_));
  for (int p = num_agents_ - 1; p >= 0; --p) {
    config.assignment[static_cast<std::size_t>(p)] =
        static_cast<int>(index % static_cast<std::uint64_t>(num_states_));
    index /= static_cast<std::uint64_t>(num_states_);
  }
}

StateIndexCodec make_codec(const Scenario& scenario, std::uint64_t cap) {
  std::uint64_t capacity = 0;
  if (!checked_power(static_cast<std::uint64_t>(scenario.num_states()), scenario.num_agents(),
                     capacity) ||
      capacity > cap) {
    std::ostringstream os;
    os << "joint state space " << scenario.num_states() << "^" << scenario.num_agents()
       << " exceeds the cap of " << cap << " states";
    throw CapacityExceeded(os.str());
  }
  return {scenario.num_agents(), scenario.num_states()};
}

}  // namespace modyn
