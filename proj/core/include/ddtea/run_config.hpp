// Key-value run configuration and run manifests.
//
// Same line-oriented format family as the model file, header
// 'ddtea-config v1': one 'key value' pair per line, '#' lines are comments.
// A run manifest is such a file with every knob materialized, plus comment
// lines recording the tool version and timestamp; feeding it back through
// --config reproduces the run bitwise (the timestamp is a comment and does
// not participate).
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ddtea/errors.hpp"

namespace ddtea {

class KeyValueConfig {
  public:
    static KeyValueConfig parse(std::string_view text);
    static KeyValueConfig load(const std::filesystem::path& path);

    /// Serialize with the header and optional leading comment lines.
    [[nodiscard]] std::string serialize(std::span<const std::string> comments = {}) const;
    void save(const std::filesystem::path& path,
              std::span<const std::string> comments = {}) const;

    [[nodiscard]] bool contains(std::string_view key) const;
    [[nodiscard]] std::optional<std::string> get(std::string_view key) const;

    /// Typed getters; throw parse_error when the stored text does not parse.
    [[nodiscard]] double get_double(std::string_view key, double fallback) const;
    [[nodiscard]] std::uint64_t get_u64(std::string_view key, std::uint64_t fallback) const;
    [[nodiscard]] std::string get_string(std::string_view key, std::string fallback) const;

    /// Insert or overwrite; insertion order is preserved on serialize.
    void set(std::string_view key, std::string_view value);
    void set_double(std::string_view key, double value);
    void set_u64(std::string_view key, std::uint64_t value);

    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const {
        return entries_;
    }

  private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace ddtea
