#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orghier/types.hpp"

namespace orghier::synth {

// Synthetic organization with hierarchy-correlated communication habits.
// Level 1 managers talk across the whole company, work late and on weekends;
// level 2 leads bridge their team to the top; level 3 employees mostly stay
// inside their team. Deterministic for a fixed spec.
struct OrgSpec {
    std::size_t level1 = 4;
    std::size_t level2 = 6;
    std::size_t level3 = 30;
    int start_year = 2010;
    int start_month = 1;
    int months = 6;
    std::uint64_t seed = 42;
};

struct OrgData {
    Roster roster;
    std::vector<EmailRecord> records;
};

OrgData generate(const OrgSpec& spec);

// Writes "sender;recipient;timestamp" / "id;level" files with headers.
void write_log(const OrgData& data, const std::string& path);
void write_roster(const OrgData& data, const std::string& path);

}  // namespace orghier::synth
