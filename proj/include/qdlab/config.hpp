#pragma once

#include <map>
#include <string>
#include <vector>

#include "qdlab/errors.hpp"

namespace qdlab {

inline constexpr const char* kVersion = "qdlab 0.1.0";

// Flat key-path configuration: lines of `key.path = value`, '#' comments.
// Command-line overrides land in the same map; every consumed default is
// echoed back so outputs carry the complete effective configuration.
class Config {
public:
    Config() = default;
    static Config from_file(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& def);
    double get_double(const std::string& key, double def);
    std::int64_t get_int(const std::string& key, std::int64_t def);
    bool get_bool(const std::string& key, bool def);

    std::string require_string(const std::string& key);
    double require_double(const std::string& key);
    std::int64_t require_int(const std::string& key);

    // doubles parsed from a comma-separated list
    std::vector<double> get_double_list(const std::string& key,
                                        const std::string& def);

    // every key with its effective value (defaults echoed after reads)
    const std::map<std::string, std::string>& effective() const {
        return effective_;
    }

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, std::string> effective_;
};

// Minimal CSV writing: fields quoted only when needed; config echoed as
// leading comment lines for auditability.
std::string csv_escape(const std::string& s);
void write_csv(const std::string& path,
               const std::map<std::string, std::string>& config,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace qdlab
