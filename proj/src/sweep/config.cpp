#include "sweep/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace thermoq::sweep {

namespace {

const char* const kUnits[] = {"Hz", "s", "K", "dimensionless"};

bool valid_unit(const std::string& u) {
    for (const char* v : kUnits)
        if (u == v) return true;
    return false;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& file, long line,
                       const std::string& message) {
    throw ConfigError(file + ":" + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& file, long line, const std::string& s) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty() || errno == ERANGE)
        fail(file, line, "expected a number, got '" + s + "'");
    return v;
}

long parse_long(const std::string& file, long line, const std::string& s) {
    double v = parse_double(file, line, s);
    if (v != std::floor(v) || std::abs(v) > 9e18)
        fail(file, line, "expected an integer, got '" + s + "'");
    return (long)v;
}

std::uint64_t parse_u64(const std::string& file, long line,
                        const std::string& s) {
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || s.empty() || errno == ERANGE ||
        s.find('-') != std::string::npos)
        fail(file, line, "expected an unsigned integer, got '" + s + "'");
    return v;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

}  // namespace

std::vector<double> SweepAxis::grid() const {
    std::vector<double> g(std::size_t(points > 0 ? points : 0));
    if (g.empty()) return g;
    if (points == 1) {
        g[0] = min;
        return g;
    }
    if (scale == "log") {
        double l0 = std::log(min), l1 = std::log(max);
        for (long i = 0; i < points; ++i)
            g[std::size_t(i)] =
                std::exp(l0 + (l1 - l0) * double(i) / double(points - 1));
    } else {
        for (long i = 0; i < points; ++i)
            g[std::size_t(i)] =
                min + (max - min) * double(i) / double(points - 1);
    }
    g.front() = min;
    g.back() = max;
    return g;
}

bool SweepConfig::has(const std::string& name) const {
    return fixed.count(name) != 0;
}

double SweepConfig::get(const std::string& name, double fallback) const {
    auto it = fixed.find(name);
    return it == fixed.end() ? fallback : it->second.value;
}

double SweepConfig::require(const std::string& name) const {
    auto it = fixed.find(name);
    if (it == fixed.end())
        throw ConfigError("missing required fixed parameter '" + name + "'");
    return it->second.value;
}

const SweepAxis* SweepConfig::axis(const std::string& name) const {
    for (const auto& a : axes)
        if (a.name == name) return &a;
    return nullptr;
}

SweepConfig parse_config(const std::string& text, const std::string& filename) {
    SweepConfig cfg;
    cfg.fixed.clear();

    enum class Section { none, sweep, fixed, axis };
    Section section = Section::none;
    SweepAxis* axis = nullptr;
    // Per-axis bookkeeping so missing keys can be reported with the header's
    // line number.
    std::vector<long> axis_lines;

    std::istringstream in(text);
    std::string raw;
    long line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (std::size_t hash = s.find('#'); hash != std::string::npos)
            s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']') fail(filename, line, "unterminated section header");
            std::string name = trim(s.substr(1, s.size() - 2));
            if (name == "sweep") {
                section = Section::sweep;
            } else if (name == "fixed") {
                section = Section::fixed;
            } else if (name.rfind("axis.", 0) == 0) {
                std::string axis_name = name.substr(5);
                if (axis_name.empty())
                    fail(filename, line, "axis section needs a name: [axis.<name>]");
                for (const auto& a : cfg.axes)
                    if (a.name == axis_name)
                        fail(filename, line, "duplicate axis '" + axis_name + "'");
                if (cfg.axes.size() == 2)
                    fail(filename, line, "at most two axes per sweep");
                cfg.axes.push_back(SweepAxis{});
                cfg.axes.back().name = axis_name;
                axis = &cfg.axes.back();
                axis_lines.push_back(line);
                section = Section::axis;
            } else {
                fail(filename, line, "unknown section [" + name + "]");
            }
            continue;
        }

        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            fail(filename, line, "expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail(filename, line, "empty key");
        if (value.empty()) fail(filename, line, "empty value for '" + key + "'");

        switch (section) {
            case Section::none:
                fail(filename, line, "key outside of any section");
            case Section::sweep:
                if (key == "master_seed")
                    cfg.master_seed = parse_u64(filename, line, value);
                else if (key == "shots") {
                    cfg.shots = parse_long(filename, line, value);
                    if (cfg.shots <= 0) fail(filename, line, "shots must be > 0");
                } else if (key == "output")
                    cfg.output = value;
                else if (key == "strategy")
                    cfg.strategy = value;
                else
                    fail(filename, line, "unknown [sweep] key '" + key + "'");
                break;
            case Section::axis:
                if (key == "unit") {
                    if (!valid_unit(value))
                        fail(filename, line,
                             "unit must be one of Hz, s, K, dimensionless");
                    axis->unit = value;
                } else if (key == "scale") {
                    if (value != "linear" && value != "log")
                        fail(filename, line, "scale must be linear or log");
                    axis->scale = value;
                } else if (key == "min")
                    axis->min = parse_double(filename, line, value);
                else if (key == "max")
                    axis->max = parse_double(filename, line, value);
                else if (key == "points")
                    axis->points = parse_long(filename, line, value);
                else
                    fail(filename, line, "unknown axis key '" + key + "'");
                break;
            case Section::fixed: {
                FixedParam p;
                std::size_t sp = value.find_last_of(" \t");
                if (sp != std::string::npos) {
                    std::string unit = trim(value.substr(sp + 1));
                    if (!valid_unit(unit))
                        fail(filename, line,
                             "unit must be one of Hz, s, K, dimensionless "
                             "(got '" +
                                 unit + "')");
                    p.unit = unit;
                    value = trim(value.substr(0, sp));
                }
                p.value = parse_double(filename, line, value);
                if (cfg.fixed.count(key))
                    fail(filename, line, "duplicate fixed parameter '" + key + "'");
                cfg.fixed[key] = p;
                break;
            }
        }
    }

    for (std::size_t i = 0; i < cfg.axes.size(); ++i) {
        const SweepAxis& a = cfg.axes[i];
        long at = axis_lines[i];
        if (a.points < 2)
            fail(filename, at,
                 "axis '" + a.name + "' needs points >= 2 (got " +
                     std::to_string(a.points) + ")");
        if (!(a.min < a.max))
            fail(filename, at, "axis '" + a.name + "' needs min < max");
        if (a.scale == "log" && a.min <= 0.0)
            fail(filename, at, "log axis '" + a.name + "' needs min > 0");
        if (!std::isfinite(a.min) || !std::isfinite(a.max))
            fail(filename, at, "axis '" + a.name + "' bounds must be finite");
    }
    return cfg;
}

SweepConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read config file '" + path + "'");
    return parse_config(buf.str(), path);
}

std::string serialize_config(const SweepConfig& config) {
    std::ostringstream out;
    out << "[sweep]\n";
    out << "master_seed = " << config.master_seed << "\n";
    if (!config.output.empty()) out << "output = " << config.output << "\n";
    out << "shots = " << config.shots << "\n";
    if (!config.strategy.empty())
        out << "strategy = " << config.strategy << "\n";
    for (const auto& a : config.axes) {
        out << "\n[axis." << a.name << "]\n";
        out << "unit = " << a.unit << "\n";
        out << "scale = " << a.scale << "\n";
        out << "min = " << format_double(a.min) << "\n";
        out << "max = " << format_double(a.max) << "\n";
        out << "points = " << a.points << "\n";
    }
    if (!config.fixed.empty()) {
        out << "\n[fixed]\n";
        for (const auto& [key, p] : config.fixed) {  // std::map: sorted keys
            out << key << " = " << format_double(p.value);
            if (!p.unit.empty()) out << " " << p.unit;
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace thermoq::sweep
