#include "qcload/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qcload {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

KeyValueFile KeyValueFile::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

KeyValueFile KeyValueFile::parse(std::string_view text) {
    KeyValueFile f;
    std::size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(std::string_view(t).substr(0, eq));
        std::string val = trim(std::string_view(t).substr(eq + 1));
        if (key.empty() || val.empty())
            throw config_error("line " + std::to_string(lineno) + ": empty key or value");
        if (f.entries_.count(key))
            throw config_error("duplicate key: " + key);
        f.entries_[key] = val;
    }
    return f;
}

std::string KeyValueFile::get_string(const std::string &key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw config_error("missing key: " + key);
    return it->second;
}

double KeyValueFile::get_double(const std::string &key) const {
    std::string v = get_string(key);
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) throw config_error("");
        return d;
    } catch (...) {
        throw config_error("key " + key + ": not a real number: " + v);
    }
}

int KeyValueFile::get_int(const std::string &key) const {
    std::string v = get_string(key);
    try {
        std::size_t used = 0;
        int i = std::stoi(v, &used);
        if (used != v.size()) throw config_error("");
        return i;
    } catch (...) {
        throw config_error("key " + key + ": not an integer: " + v);
    }
}

std::string KeyValueFile::get_string_or(const std::string &key, const std::string &def) const {
    return has(key) ? get_string(key) : def;
}
double KeyValueFile::get_double_or(const std::string &key, double def) const {
    return has(key) ? get_double(key) : def;
}
int KeyValueFile::get_int_or(const std::string &key, int def) const {
    return has(key) ? get_int(key) : def;
}

void KeyValueFile::require_known(const std::set<std::string> &known,
                                 const std::set<std::string> &known_prefixes) const {
    for (const auto &[key, val] : entries_) {
        if (known.count(key)) continue;
        bool ok = false;
        for (const auto &p : known_prefixes) {
            if (key.size() > p.size() && key.compare(0, p.size(), p) == 0) {
                ok = true;
                break;
            }
        }
        if (!ok) throw config_error("unknown key: " + key);
    }
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace qcload
