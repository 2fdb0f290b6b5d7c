#include "qdlab/config.hpp"

#include <fstream>
#include <sstream>

namespace qdlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    Config cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": empty key");
        cfg.set(key, value);
    }
    return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
    values_[key] = value;
    effective_[key] = value;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get_string(const std::string& key, const std::string& def) {
    const auto it = values_.find(key);
    const std::string v = it == values_.end() ? def : it->second;
    effective_[key] = v;
    return v;
}

double Config::get_double(const std::string& key, double def) {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        std::ostringstream os;
        os << def;
        effective_[key] = os.str();
        return def;
    }
    try {
        const double v = std::stod(it->second);
        effective_[key] = it->second;
        return v;
    } catch (...) {
        throw ConfigError("config key '" + key + "': expected number, got '" +
                          it->second + "'");
    }
}

std::int64_t Config::get_int(const std::string& key, std::int64_t def) {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        effective_[key] = std::to_string(def);
        return def;
    }
    try {
        const std::int64_t v = std::stoll(it->second);
        effective_[key] = it->second;
        return v;
    } catch (...) {
        throw ConfigError("config key '" + key + "': expected integer, got '" +
                          it->second + "'");
    }
}

bool Config::get_bool(const std::string& key, bool def) {
    const std::string v = get_string(key, def ? "true" : "false");
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "': expected boolean, got '" + v +
                      "'");
}

std::string Config::require_string(const std::string& key) {
    if (!has(key)) throw ConfigError("missing required config key '" + key + "'");
    return get_string(key, "");
}

double Config::require_double(const std::string& key) {
    if (!has(key)) throw ConfigError("missing required config key '" + key + "'");
    return get_double(key, 0.0);
}

std::int64_t Config::require_int(const std::string& key) {
    if (!has(key)) throw ConfigError("missing required config key '" + key + "'");
    return get_int(key, 0);
}

std::vector<double> Config::get_double_list(const std::string& key,
                                            const std::string& def) {
    const std::string raw = get_string(key, def);
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw ConfigError("config key '" + key + "': bad list item '" +
                              item + "'");
        }
    }
    return out;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

void write_csv(const std::string& path,
               const std::map<std::string, std::string>& config,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    out << "# " << kVersion << "\n";
    for (const auto& [k, v] : config) out << "# " << k << " = " << v << "\n";
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << csv_escape(header[i]);
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << csv_escape(row[i]);
        out << "\n";
    }
}

}  // namespace qdlab
