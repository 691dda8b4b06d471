#include "dnlat/io.hpp"

#include "dnlat/version.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dnlat {

using nlohmann::json;

std::string double_to_string(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[h & 0xF];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit_trajectory_csv(const TrajectoryRecord& record, const std::string& path) {
    std::string out = "t,l2,l4,linf,p";
    for (int k : record.tail_ks) out += ",tail_" + std::to_string(k);
    out += "\n";
    for (std::size_t j = 0; j < record.times.size(); ++j) {
        out += double_to_string(record.times[j]);
        out += ',';
        out += double_to_string(record.l2[j]);
        out += ',';
        out += double_to_string(record.l4[j]);
        out += ',';
        out += double_to_string(record.linf[j]);
        out += ',';
        out += double_to_string(record.p[j]);
        for (std::size_t i = 0; i < record.tails.size(); ++i) {
            out += ',';
            out += double_to_string(record.tails[i][j]);
        }
        out += '\n';
    }
    write_text_file(path, out);
}

namespace {

double parse_csv_double(const std::string& field) {
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw std::runtime_error("bad CSV number '" + field + "'");
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

TrajectoryRecord read_trajectory_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");

    TrajectoryRecord rec;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV '" + path + "'");
    const auto header = split_csv_line(line);
    if (header.size() < 5 || header[0] != "t")
        throw std::runtime_error("unexpected CSV header in '" + path + "'");
    for (std::size_t i = 5; i < header.size(); ++i) {
        if (header[i].rfind("tail_", 0) != 0)
            throw std::runtime_error("unexpected CSV column '" + header[i] + "'");
        rec.tail_ks.push_back(std::stoi(header[i].substr(5)));
    }
    rec.tails.resize(rec.tail_ks.size());

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::runtime_error("ragged CSV row in '" + path + "'");
        rec.times.push_back(parse_csv_double(fields[0]));
        rec.l2.push_back(parse_csv_double(fields[1]));
        rec.l4.push_back(parse_csv_double(fields[2]));
        rec.linf.push_back(parse_csv_double(fields[3]));
        rec.p.push_back(parse_csv_double(fields[4]));
        for (std::size_t i = 0; i < rec.tails.size(); ++i)
            rec.tails[i].push_back(parse_csv_double(fields[5 + i]));
    }
    return rec;
}

namespace {

json provenance_json(const Provenance& prov) {
    return json{{"config_hash", prov.config_hash}, {"seed", prov.seed}, {"version", prov.version}};
}

} // namespace

std::string trajectory_summary_json(const TrajectoryRecord& record, const Provenance& prov) {
    json j;
    j["provenance"] = provenance_json(prov);
    j["samples"] = record.samples();
    if (!record.times.empty()) {
        j["t_final"] = record.times.back();
        j["l2_initial"] = record.l2.front();
        j["l2_final"] = record.l2.back();
        j["p_final"] = record.p.back();
        j["linf_final"] = record.linf.back();
    }
    return j.dump(2) + "\n";
}

std::string closeness_report_json(const ClosenessFitReport& report, const Provenance& prov) {
    json rows = json::array();
    for (const auto& row : report.rows) {
        rows.push_back(json{{"epsilon", row.epsilon},
                            {"sup_l2", row.sup_l2},
                            {"sup_linf", row.sup_linf},
                            {"phi0_l2", row.phi0_l2},
                            {"y0_l1", row.y0_l1},
                            {"y0_l2", row.y0_l2}});
    }
    json j;
    j["provenance"] = provenance_json(prov);
    j["t0"] = report.t0;
    j["rows"] = rows;
    j["slope_l2"] = report.slope_l2;
    j["slope_linf"] = report.slope_linf;
    j["prefactor_l2"] = report.prefactor_l2;
    j["prefactor_linf"] = report.prefactor_linf;
    j["uniform_c_l2"] = report.uniform_c_l2;
    j["uniform_c_linf"] = report.uniform_c_linf;
    j["linf_le_l2"] = report.linf_le_l2;
    return j.dump(2) + "\n";
}

std::string absorbing_report_json(const AbsorbingRunReport& report, const Provenance& prov) {
    json j;
    j["provenance"] = provenance_json(prov);
    j["estimate"] = json{{"rho_sq", report.estimate.rho_sq},
                         {"r", report.estimate.r},
                         {"R", report.estimate.R},
                         {"t0", report.estimate.t0},
                         {"decay_rate", report.estimate.decay_rate}};
    j["ensemble_size"] = report.ensemble_size;
    j["counterexamples"] = report.counterexamples;
    j["worst_entry_time"] = report.worst_entry_time;
    j["min_margin_after_t0"] = report.min_margin_after_t0;
    j["entry_times"] = report.entry_times;
    return j.dump(2) + "\n";
}

std::string tails_report_json(const TailsReport& report, const Provenance& prov) {
    json entries = json::array();
    for (const auto& e : report.entries) {
        entries.push_back(json{{"xi", e.xi},
                               {"found", e.found},
                               {"K", e.K},
                               {"T", e.T},
                               {"max_tail_from_T", e.max_tail_from_T}});
    }
    json j;
    j["provenance"] = provenance_json(prov);
    j["entries"] = entries;
    j["k_max"] = report.k_max;
    j["monotone_in_k"] = report.monotone_in_k;
    j["all_found"] = report.all_found;
    return j.dump(2) + "\n";
}

std::string congruence_report_json(const std::vector<CongruenceReport>& reports, bool trend_ok,
                                   const Provenance& prov) {
    json rows = json::array();
    for (const auto& r : reports) {
        rows.push_back(json{{"epsilon", r.epsilon},
                            {"dist_mu_to_gamma", r.dist_mu_to_gamma},
                            {"dist_gamma_to_mu", r.dist_gamma_to_mu},
                            {"cloud_size_mu", r.cloud_size_mu},
                            {"cloud_size_gamma", r.cloud_size_gamma},
                            {"burn_in", r.burn_in},
                            {"r_mu", r.r_mu},
                            {"absorb_r", r.absorb_r},
                            {"hyp_shared_initial", r.hyp_shared_initial},
                            {"hyp_scaling", r.hyp_scaling},
                            {"hyp_conditions", r.hyp_conditions}});
    }
    json j;
    j["provenance"] = provenance_json(prov);
    j["reports"] = rows;
    j["trend_nonincreasing"] = trend_ok;
    return j.dump(2) + "\n";
}

std::string lipschitz_report_json(const std::vector<LipschitzReport>& reports, const Provenance& prov) {
    json rows = json::array();
    for (const auto& r : reports) {
        rows.push_back(json{{"radius", r.radius},
                            {"theoretical_constant", r.theoretical_constant},
                            {"sampled_max_ratio", r.sampled_max_ratio},
                            {"sampled_max_ratio_full", r.sampled_max_ratio_full},
                            {"sample_count", r.sample_count},
                            {"skipped_degenerate", r.skipped_degenerate}});
    }
    json j;
    j["provenance"] = provenance_json(prov);
    j["reports"] = rows;
    return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    json j;
    j["version"] = manifest.version;
    j["subcommand"] = manifest.subcommand;
    j["config_text"] = manifest.config_text;
    j["config_hash"] = manifest.config_hash;
    if (manifest.seed_override) j["seed_override"] = *manifest.seed_override;
    if (manifest.n_half_override) j["n_half_override"] = *manifest.n_half_override;
    j["threads"] = manifest.threads;
    j["duration_seconds"] = manifest.duration_seconds;
    j["outputs"] = manifest.outputs;
    write_text_file(path, j.dump(2) + "\n");
}

RunManifest load_manifest(const std::string& path) {
    const json j = json::parse(read_text_file(path));
    RunManifest m;
    m.version = j.at("version").get<std::string>();
    m.subcommand = j.at("subcommand").get<std::string>();
    m.config_text = j.at("config_text").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    if (j.contains("seed_override")) m.seed_override = j.at("seed_override").get<std::uint64_t>();
    if (j.contains("n_half_override")) m.n_half_override = j.at("n_half_override").get<int>();
    m.threads = j.value("threads", 1);
    m.duration_seconds = j.value("duration_seconds", 0.0);
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    return m;
}

} // namespace dnlat
