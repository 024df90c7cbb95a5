#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sweep/config.hpp"

// CSV emission with full-precision numbers (17 significant digits, %.16e)
// and an FNV-1a 64 checksum over the exact bytes written, recorded in the
// run manifest so re-runs can be compared without re-reading files.

namespace thermoq::sweep {

inline constexpr std::uint64_t fnv_offset = 14695981039346656037ULL;
inline constexpr std::uint64_t fnv_prime = 1099511628211ULL;

inline std::uint64_t fnv1a64(const char* data, std::size_t n,
                             std::uint64_t h = fnv_offset) {
    for (std::size_t i = 0; i < n; ++i) {
        h ^= (unsigned char)data[i];
        h *= fnv_prime;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s,
                             std::uint64_t h = fnv_offset) {
    return fnv1a64(s.data(), s.size(), h);
}

// 17-significant-digit scientific notation, the round-trip-exact format
// every CSV cell uses.
std::string format_full(double v);

class CsvWriter {
  public:
    // Opens the file and writes the header row; throws IoError on failure.
    CsvWriter(std::filesystem::path path, const std::vector<std::string>& columns);
    ~CsvWriter();

    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<double>& values);
    // Mixed-content row (e.g. a leading check name); cells emitted verbatim.
    void row_text(const std::vector<std::string>& cells);

    // Flushes and verifies the stream; must be called before reading the
    // checksum.  Safe to call twice.
    void close();

    std::uint64_t checksum() const { return hash_; }
    const std::filesystem::path& path() const { return path_; }
    std::string filename() const { return path_.filename().string(); }

  private:
    void emit(const std::string& line);

    std::filesystem::path path_;
    std::ofstream out_;
    std::uint64_t hash_ = fnv_offset;
    std::size_t n_cols_ = 0;
    bool closed_ = false;
};

}  // namespace thermoq::sweep
