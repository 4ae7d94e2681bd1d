#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "bppsample/curves.hpp"
#include "bppsample/sampling.hpp"

namespace bppsample {

/// `iteration,candidate_mask_hex,is_new,distinct_count`
void write_trace_csv(const SampleTrace &trace, std::ostream &out);

/// Sidecar with strategy, seed, instance_id, switch_iteration, completed,
/// oracle_size and truncation.
std::string trace_metadata_json(const SampleTrace &trace);

/// Writes `<stem>.csv` and `<stem>.json`.
void save_trace(const SampleTrace &trace, const std::filesystem::path &stem);

/// Reads a trace CSV and the `.json` sidecar next to it.
SampleTrace load_trace(const std::filesystem::path &csv_path);

/// Reads only the CSV body into `trace.entries`.
void read_trace_csv(std::istream &in, SampleTrace &trace);

void write_curve_csv(const NormalizedCurve &curve, std::ostream &out);

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// Writes `contents` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path &path,
                     const std::string &contents);
std::string read_text_file(const std::filesystem::path &path);

} // namespace bppsample
