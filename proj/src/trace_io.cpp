#include "bppsample/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bppsample {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void write_text_file(const std::filesystem::path &path,
                     const std::string &contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << contents;
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

std::string read_text_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_trace_csv(const SampleTrace &trace, std::ostream &out) {
  out << "iteration,candidate_mask_hex,is_new,distinct_count\n";
  for (const TraceEntry &e : trace.entries) {
    out << e.iteration << ',' << mask_hex(e.candidate) << ','
        << (e.is_new ? 1 : 0) << ',' << e.distinct_count << '\n';
  }
}

std::string trace_metadata_json(const SampleTrace &trace) {
  json doc;
  doc["strategy"] = to_string(trace.strategy);
  doc["seed"] = trace.seed;
  doc["instance_id"] = trace.instance_id;
  doc["run"] = trace.run_index;
  doc["switch_iteration"] = trace.switch_iteration
                                ? json(*trace.switch_iteration)
                                : json(nullptr);
  doc["completed"] = trace.completed;
  doc["oracle_size"] = trace.oracle_size;
  doc["truncation"] = to_string(trace.truncation);
  doc["iterations"] = trace.iterations();
  return doc.dump(2) + "\n";
}

void save_trace(const SampleTrace &trace, const std::filesystem::path &stem) {
  std::ostringstream csv;
  write_trace_csv(trace, csv);
  write_text_file(stem.string() + ".csv", csv.str());
  write_text_file(stem.string() + ".json", trace_metadata_json(trace));
}

void read_trace_csv(std::istream &in, SampleTrace &trace) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "iteration,candidate_mask_hex,is_new,distinct_count") {
    throw ValidationError("trace CSV has an unexpected header");
  }
  trace.entries.clear();
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::istringstream row(line);
    std::string iteration, mask, is_new, distinct;
    if (!std::getline(row, iteration, ',') || !std::getline(row, mask, ',') ||
        !std::getline(row, is_new, ',') || !std::getline(row, distinct)) {
      throw ValidationError("malformed trace row '" + line + "'");
    }
    TraceEntry e;
    try {
      e.iteration = std::stoll(iteration);
      e.distinct_count = std::stoll(distinct);
    } catch (const std::logic_error &) {
      throw ValidationError("malformed trace row '" + line + "'");
    }
    e.candidate = parse_mask_hex(mask);
    if (is_new != "0" && is_new != "1") {
      throw ValidationError("is_new must be 0 or 1 in row '" + line + "'");
    }
    e.is_new = is_new == "1";
    trace.entries.push_back(e);
  }
}

SampleTrace load_trace(const std::filesystem::path &csv_path) {
  SampleTrace trace;
  {
    std::ifstream in(csv_path);
    if (!in) {
      throw ValidationError("cannot open trace " + csv_path.string());
    }
    read_trace_csv(in, trace);
  }
  auto sidecar = csv_path;
  sidecar.replace_extension(".json");
  json doc;
  try {
    doc = json::parse(read_text_file(sidecar));
    trace.strategy = parse_strategy(doc.at("strategy").get<std::string>());
    trace.seed = doc.at("seed").get<std::uint64_t>();
    trace.instance_id = doc.at("instance_id").get<std::string>();
    trace.run_index = doc.value("run", 0);
    if (!doc.at("switch_iteration").is_null()) {
      trace.switch_iteration = doc["switch_iteration"].get<std::int64_t>();
    }
    trace.completed = doc.at("completed").get<bool>();
    trace.oracle_size = doc.at("oracle_size").get<std::int64_t>();
    if (doc.contains("truncation")) {
      trace.truncation =
          parse_truncation(doc["truncation"].get<std::string>());
    }
  } catch (const json::exception &e) {
    throw ValidationError("bad trace metadata " + sidecar.string() + ": " +
                          e.what());
  }
  return trace;
}

void write_curve_csv(const NormalizedCurve &curve, std::ostream &out) {
  out << "x,y\n";
  for (const CurvePoint &p : curve.points) {
    out << format_double(p.x) << ',' << format_double(p.y) << '\n';
  }
}

} // namespace bppsample
