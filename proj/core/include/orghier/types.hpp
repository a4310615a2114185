#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "orghier/time.hpp"

namespace orghier {

// Thrown for problems in input data (bad files, malformed rows, domain
// violations). The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// One directed message event.
struct EmailRecord {
    std::string sender;
    std::string recipient;
    std::int64_t timestamp = 0;  // epoch seconds

    bool operator==(const EmailRecord&) const = default;
};

enum class TimestampFormat { iso8601, epoch };

// sent: a month is active when the employee sent >= 1 message (default).
// any: sending or receiving counts.
enum class ActivityMode { sent, any };

constexpr int kMinLevel = 1;
constexpr int kMaxLevel = 3;

// Employee id -> hierarchy level (1 = first management level, 2 = second
// management level, 3 = regular employee).
struct Roster {
    std::map<std::string, int> levels;

    bool contains(const std::string& id) const { return levels.count(id) != 0; }
    std::size_t size() const { return levels.size(); }
    bool empty() const { return levels.empty(); }

    // counts[1..3]; counts[0] unused
    std::array<std::size_t, 4> level_counts() const {
        std::array<std::size_t, 4> counts{};
        for (const auto& [id, level] : levels) counts[static_cast<std::size_t>(level)]++;
        return counts;
    }
};

// Per employee, the sorted set of calendar months with qualifying activity.
struct ActivityIndex {
    std::map<std::string, std::vector<YearMonth>> months;

    std::size_t month_count(const std::string& id) const {
        auto it = months.find(id);
        return it == months.end() ? 0 : it->second.size();
    }
};

// Derives a child seed from a master seed and a stream of tags. splitmix64
// steps keep cell/tree/fold streams independent and platform-stable.
inline std::uint64_t mix_seed(std::uint64_t seed) {
    seed += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = seed;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t s = mix_seed(master);
    for (std::uint64_t t : tags) s = mix_seed(s ^ t);
    return s;
}

}  // namespace orghier
