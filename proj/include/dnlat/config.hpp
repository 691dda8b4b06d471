#pragma once

#include "dnlat/errors.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dnlat {

// Flat sectioned key-value text format:
//
//   # comment
//   [section]
//   key = value
//
// Values keep their raw text; typed accessors convert on demand and report
// the config line on failure.
class ConfigFile {
public:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_text(const std::string& text, const std::string& name = "<config>");

    bool has(const std::string& section, const std::string& key) const;
    int line_of(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    std::string require_string(const std::string& section, const std::string& key) const;

    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    std::uint64_t get_uint64(const std::string& section, const std::string& key,
                             std::uint64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

    std::vector<double> get_double_list(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const;
    std::vector<int> get_int_list(const std::string& section, const std::string& key,
                                  const std::vector<int>& fallback) const;

    // Normalized snapshot of the parsed content (sections and keys sorted);
    // this is what run manifests embed.
    std::string canonical_text() const;

    const std::string& name() const { return name_; }

private:
    std::string name_;
    std::map<std::string, std::map<std::string, Entry>> sections_;

    const Entry* find(const std::string& section, const std::string& key) const;
};

} // namespace dnlat
