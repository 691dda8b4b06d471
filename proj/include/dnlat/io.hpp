#pragma once

#include "dnlat/config.hpp"
#include "dnlat/experiments.hpp"
#include "dnlat/lipschitz.hpp"
#include "dnlat/stepper.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace dnlat {

// Shortest round-trip decimal text for a double (locale-free).
std::string double_to_string(double v);

// FNV-1a 64 as a hex string; used for config provenance.
std::string fnv1a_hex(const std::string& text);

// CSV layout: t,l2,l4,linf,p[,tail_K...] with the configured K values in the
// header. '.' decimal, ',' separator, LF line endings.
void emit_trajectory_csv(const TrajectoryRecord& record, const std::string& path);

// Re-parses an emitted CSV (diagnostics only; the final state is not stored).
TrajectoryRecord read_trajectory_csv(const std::string& path);

// Provenance block attached to every JSON report.
struct Provenance {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;
};

std::string trajectory_summary_json(const TrajectoryRecord& record, const Provenance& prov);
std::string closeness_report_json(const ClosenessFitReport& report, const Provenance& prov);
std::string absorbing_report_json(const AbsorbingRunReport& report, const Provenance& prov);
std::string tails_report_json(const TailsReport& report, const Provenance& prov);
std::string congruence_report_json(const std::vector<CongruenceReport>& reports, bool trend_ok,
                                   const Provenance& prov);
std::string lipschitz_report_json(const std::vector<LipschitzReport>& reports, const Provenance& prov);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Snapshot of one CLI run: the resolved config text plus the overrides that
// were applied. Replaying a manifest reproduces the output files bytewise.
struct RunManifest {
    std::string version;
    std::string subcommand;
    std::string config_text;
    std::string config_hash;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> n_half_override;
    int threads = 1;
    double duration_seconds = 0.0;  // informational; not part of any output
    std::vector<std::string> outputs;  // file names relative to the out dir
};

void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest load_manifest(const std::string& path);

} // namespace dnlat
