// Structured key/value config files (`key = value` lines, '#' comments) and
// small CSV helpers shared by the CLI and tests.
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qcload {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class KeyValueFile {
public:
    static KeyValueFile load(const std::string &path);
    static KeyValueFile parse(std::string_view text);

    bool has(const std::string &key) const { return entries_.count(key) != 0; }
    std::string get_string(const std::string &key) const;
    double get_double(const std::string &key) const;
    int get_int(const std::string &key) const;
    std::string get_string_or(const std::string &key, const std::string &def) const;
    double get_double_or(const std::string &key, double def) const;
    int get_int_or(const std::string &key, int def) const;

    // Rejects any key not in `known` and no prefix of which is in
    // `known_prefixes` (for families of named parameters like h.params.*).
    void require_known(const std::set<std::string> &known,
                       const std::set<std::string> &known_prefixes) const;

    const std::map<std::string, std::string> &entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

std::uint64_t fnv1a(std::string_view s);

// Fixed-width float formatting used for all CSV output; repeatable bytes.
std::string format_double(double v);

}  // namespace qcload
