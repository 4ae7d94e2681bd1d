#include "bppsample/instance.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "bppsample/rng.hpp"
#include "json.hpp"

namespace bppsample {

using nlohmann::json;

int PackageSubset::size() const { return std::popcount(mask); }

Instance::Instance(std::vector<Weight> weights, Weight capacity,
                   int max_packages)
    : weights_(std::move(weights)), capacity_(capacity) {
  if (weights_.empty()) {
    throw ValidationError("no packages");
  }
  if (capacity_ < 1) {
    throw ValidationError("capacity must be a positive integer, got " +
                          std::to_string(capacity_));
  }
  if (static_cast<int>(weights_.size()) > max_packages) {
    throw ValidationError("too many packages: " +
                          std::to_string(weights_.size()) + " > ceiling " +
                          std::to_string(max_packages));
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] < 1) {
      throw ValidationError("package " + std::to_string(i + 1) +
                            " has non-positive weight " +
                            std::to_string(weights_[i]));
    }
    if (weights_[i] > capacity_) {
      throw ValidationError("package " + std::to_string(i + 1) +
                            " exceeds capacity");
    }
  }
}

Weight Instance::total_weight() const {
  Weight total = 0;
  for (Weight w : weights_) {
    total += w;
  }
  return total;
}

Weight Instance::min_weight() const {
  Weight lowest = weights_.front();
  for (Weight w : weights_) {
    lowest = std::min(lowest, w);
  }
  return lowest;
}

namespace {

void check_mask(const Instance &inst, PackageSubset s) {
  if (s.mask >= inst.subset_count()) {
    throw ValidationError("mask " + mask_hex(s) + " out of range for " +
                          std::to_string(inst.size()) + " packages");
  }
}

} // namespace

Weight subset_weight(const Instance &inst, PackageSubset s) {
  check_mask(inst, s);
  Weight total = 0;
  for (std::uint32_t rest = s.mask; rest != 0; rest &= rest - 1) {
    total += inst.weight(std::countr_zero(rest));
  }
  return total;
}

bool is_feasible_partial(const Instance &inst, PackageSubset s) {
  return !s.empty() && subset_weight(inst, s) <= inst.capacity();
}

FeasibleSet enumerate_feasible(const Instance &inst) {
  // Gray-code order touches one package per step.
  FeasibleSet result(SetSource::oracle);
  const std::uint64_t count = inst.subset_count();
  std::uint32_t gray = 0;
  Weight weight = 0;
  for (std::uint64_t k = 1; k < count; ++k) {
    const int flip = std::countr_zero(k);
    gray ^= 1u << flip;
    weight += ((gray >> flip) & 1u) ? inst.weight(flip) : -inst.weight(flip);
    if (weight <= inst.capacity()) {
      result.insert(PackageSubset{gray});
    }
  }
  return result;
}

WeightDistribution parse_distribution(const std::string &text) {
  const auto colon = text.find(':');
  const auto comma = text.find(',', colon == std::string::npos ? 0 : colon);
  if (colon == std::string::npos || comma == std::string::npos) {
    throw ValidationError("distribution must look like uniform:lo,hi or "
                          "normal:mu,sigma, got '" + text + "'");
  }
  const std::string kind = text.substr(0, colon);
  const std::string first = text.substr(colon + 1, comma - colon - 1);
  const std::string second = text.substr(comma + 1);
  try {
    std::size_t used1 = 0;
    std::size_t used2 = 0;
    if (kind == "uniform") {
      const Weight lo = std::stoll(first, &used1);
      const Weight hi = std::stoll(second, &used2);
      if (used1 == first.size() && used2 == second.size()) {
        return UniformWeights{lo, hi};
      }
    } else if (kind == "normal") {
      const double mu = std::stod(first, &used1);
      const double sigma = std::stod(second, &used2);
      if (used1 == first.size() && used2 == second.size()) {
        return NormalWeights{mu, sigma};
      }
    }
  } catch (const std::logic_error &) {
  }
  throw ValidationError("cannot parse distribution '" + text + "'");
}

std::string to_string(const WeightDistribution &dist) {
  std::ostringstream out;
  if (const auto *u = std::get_if<UniformWeights>(&dist)) {
    out << "uniform:" << u->lo << ',' << u->hi;
  } else {
    const auto &g = std::get<NormalWeights>(dist);
    out << "normal:" << g.mean << ',' << g.stddev;
  }
  return out.str();
}

Instance generate_instance(int n, Weight capacity,
                           const WeightDistribution &dist, std::uint64_t seed) {
  if (n < 1) {
    throw ValidationError("no packages");
  }
  if (capacity < 1) {
    throw ValidationError("capacity must be a positive integer");
  }
  Xoshiro256 rng(seed);
  std::vector<Weight> weights;
  weights.reserve(n);

  if (const auto *u = std::get_if<UniformWeights>(&dist)) {
    if (u->lo > u->hi) {
      throw ValidationError("uniform bounds reversed: lo > hi");
    }
    if (u->lo < 1) {
      throw ValidationError("uniform lower bound must be at least 1");
    }
    if (u->hi > capacity) {
      throw ValidationError("uniform upper bound exceeds capacity");
    }
    const auto span = static_cast<std::uint64_t>(u->hi - u->lo + 1);
    for (int i = 0; i < n; ++i) {
      weights.push_back(u->lo + static_cast<Weight>(rng.below(span)));
    }
  } else {
    const auto &g = std::get<NormalWeights>(dist);
    if (!(g.stddev >= 0.0) || !std::isfinite(g.mean)) {
      throw ValidationError("normal distribution needs finite mean and "
                            "non-negative sigma");
    }
    constexpr int kMaxRedraws = 100000;
    for (int i = 0; i < n; ++i) {
      int attempts = 0;
      for (;;) {
        const double draw = std::round(g.mean + g.stddev * rng.normal());
        if (draw >= 1.0 && draw <= static_cast<double>(capacity)) {
          weights.push_back(static_cast<Weight>(draw));
          break;
        }
        if (++attempts == kMaxRedraws) {
          throw ValidationError("normal distribution has negligible mass "
                                "inside [1, capacity]");
        }
      }
    }
  }
  return Instance(std::move(weights), capacity);
}

Instance instance_from_json_text(const std::string &text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ValidationError(std::string("malformed instance file: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("instance file must hold a JSON object");
  }
  for (const auto &[key, value] : doc.items()) {
    if (key != "capacity" && key != "weights") {
      throw ValidationError("unknown field '" + key + "' in instance file");
    }
  }
  if (!doc.contains("capacity") || !doc["capacity"].is_number_integer()) {
    throw ValidationError("instance file needs an integer 'capacity'");
  }
  if (!doc.contains("weights") || !doc["weights"].is_array()) {
    throw ValidationError("instance file needs a 'weights' array");
  }
  std::vector<Weight> weights;
  for (const auto &w : doc["weights"]) {
    if (!w.is_number_integer()) {
      throw ValidationError("weights must be integers");
    }
    weights.push_back(w.get<Weight>());
  }
  return Instance(std::move(weights), doc["capacity"].get<Weight>());
}

std::string instance_to_json_text(const Instance &inst) {
  json doc;
  doc["capacity"] = inst.capacity();
  doc["weights"] = std::vector<Weight>(inst.weights().begin(),
                                       inst.weights().end());
  return doc.dump() + "\n";
}

Instance load_instance(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open instance file " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return instance_from_json_text(buffer.str());
}

void save_instance(const Instance &inst, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write instance file " + path.string());
  }
  out << instance_to_json_text(inst);
}

void write_feasible_csv(const Instance &inst, const FeasibleSet &set,
                        std::ostream &out) {
  out << "mask_hex,weight\n";
  for (const PackageSubset s : set) {
    out << mask_hex(s) << ',' << subset_weight(inst, s) << '\n';
  }
}

std::string mask_hex(PackageSubset s) {
  char buf[16];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, s.mask, 16);
  return "0x" + std::string(buf, end);
}

PackageSubset parse_mask_hex(const std::string &text) {
  if (text.size() < 3 || text[0] != '0' || text[1] != 'x') {
    throw ValidationError("mask must be 0x-prefixed hex, got '" + text + "'");
  }
  std::uint32_t mask = 0;
  const char *first = text.data() + 2;
  const char *last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, mask, 16);
  if (ec != std::errc{} || ptr != last) {
    throw ValidationError("bad hex mask '" + text + "'");
  }
  return PackageSubset{mask};
}

} // namespace bppsample
