#include "ddtea/run_config.hpp"

#include <fstream>
#include <sstream>

#include "ddtea/csv.hpp"

namespace ddtea {

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    KeyValueConfig cfg;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        if (!header_seen) {
            if (line != "ddtea-config v1") {
                throw parse_error("line " + std::to_string(line_no) +
                                  ": expected header 'ddtea-config v1', got '" + line + "'");
            }
            header_seen = true;
            continue;
        }

        const auto sep = line.find_first_of(" \t");
        if (sep == std::string::npos || sep == 0) {
            throw parse_error("line " + std::to_string(line_no) + ": expected 'key value', got '" +
                              line + "'");
        }
        const std::string key = line.substr(0, sep);
        auto vbegin = line.find_first_not_of(" \t", sep);
        if (vbegin == std::string::npos) {
            throw parse_error("line " + std::to_string(line_no) + ": key '" + key +
                              "' has no value");
        }
        auto vend = line.find_last_not_of(" \t");
        cfg.set(key, line.substr(vbegin, vend - vbegin + 1));
    }

    if (!header_seen) {
        throw parse_error("empty config: missing 'ddtea-config v1' header");
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw parse_error("cannot open config file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string KeyValueConfig::serialize(std::span<const std::string> comments) const {
    std::ostringstream os;
    os << "ddtea-config v1\n";
    for (const auto& c : comments) {
        os << "# " << c << '\n';
    }
    for (const auto& [k, v] : entries_) {
        os << k << ' ' << v << '\n';
    }
    return os.str();
}

void KeyValueConfig::save(const std::filesystem::path& path,
                          std::span<const std::string> comments) const {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write config file: " + path.string());
    }
    out << serialize(comments);
}

bool KeyValueConfig::contains(std::string_view key) const {
    return get(key).has_value();
}

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return v;
    }
    return std::nullopt;
}

double KeyValueConfig::get_double(std::string_view key, double fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    double out = 0.0;
    if (!parse_double(*v, out)) {
        throw parse_error("config key '" + std::string(key) + "': not a number: '" + *v + "'");
    }
    return out;
}

std::uint64_t KeyValueConfig::get_u64(std::string_view key, std::uint64_t fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    std::uint64_t out = 0;
    const char* first = v->data();
    const char* last = v->data() + v->size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) {
        throw parse_error("config key '" + std::string(key) + "': not an unsigned integer: '" +
                          *v + "'");
    }
    return out;
}

std::string KeyValueConfig::get_string(std::string_view key, std::string fallback) const {
    return get(key).value_or(std::move(fallback));
}

void KeyValueConfig::set(std::string_view key, std::string_view value) {
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = std::string(value);
            return;
        }
    }
    entries_.emplace_back(std::string(key), std::string(value));
}

void KeyValueConfig::set_double(std::string_view key, double value) {
    set(key, fmt_g17(value));
}

void KeyValueConfig::set_u64(std::string_view key, std::uint64_t value) {
    set(key, std::to_string(value));
}

}  // namespace ddtea
