#pragma once

#include <cstdint>
#include <deque>
#include <stdexcept>

namespace bppsample::testing {

/// Replays fixed draws to walk_step so hand traces can be checked exactly.
class ScriptedRng {
public:
  ScriptedRng(std::deque<std::uint64_t> indices, std::deque<double> uniforms)
      : indices_(std::move(indices)), uniforms_(std::move(uniforms)) {}

  std::uint64_t below(std::uint64_t bound) {
    if (indices_.empty()) {
      throw std::logic_error("scripted index draws exhausted");
    }
    const auto v = indices_.front();
    indices_.pop_front();
    if (v >= bound) {
      throw std::logic_error("scripted index out of range");
    }
    return v;
  }

  double uniform01() {
    if (uniforms_.empty()) {
      throw std::logic_error("scripted uniform draws exhausted");
    }
    const double v = uniforms_.front();
    uniforms_.pop_front();
    return v;
  }

  bool exhausted() const { return indices_.empty() && uniforms_.empty(); }

private:
  std::deque<std::uint64_t> indices_;
  std::deque<double> uniforms_;
};

} // namespace bppsample::testing
