#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tpk {

/// Plain-text `key = value` configuration. Lines starting with '#' are
/// comments; values keep internal whitespace. Later assignments override
/// earlier ones, which is how CLI flags layer on top of a file.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig load(const std::string& path);
    static KeyValueConfig parse(const std::string& text, const std::string& name);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;
    std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;

    /// Comma-separated list of integers.
    std::vector<long> get_int_list(const std::string& key) const;
    /// Comma-separated list of strings (trimmed).
    std::vector<std::string> get_string_list(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace tpk
