#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "orghier/types.hpp"

namespace orghier {

struct IngestOptions {
    TimestampFormat format = TimestampFormat::iso8601;
    char delimiter = ';';
};

// Reads a delimited message log with columns sender, recipient, timestamp.
// A first line whose fields name the columns is skipped; any other malformed
// line raises DataError naming the line number.
std::vector<EmailRecord> parse_email_log(const std::filesystem::path& path,
                                         const IngestOptions& options = {});

// Reads a delimited roster with columns id, level. Duplicate ids and levels
// outside {1,2,3} raise DataError naming the offending id.
Roster parse_roster(const std::filesystem::path& path, char delimiter = ';');

struct FilterStats {
    std::size_t kept = 0;
    std::size_t dropped_self_loops = 0;
    std::size_t dropped_off_roster = 0;
};

// Keeps records whose sender and recipient are both in the roster and differ.
// Order preserved; drop counts reported through stats when given.
std::vector<EmailRecord> filter_records(std::span<const EmailRecord> records,
                                        const Roster& roster, FilterStats* stats = nullptr);

ActivityIndex build_activity_index(std::span<const EmailRecord> records,
                                   ActivityMode mode = ActivityMode::sent);

// Restricts the roster to employees active in >= min_months calendar months.
// Raises DataError when nobody survives.
Roster apply_min_activity(const Roster& roster, const ActivityIndex& activity, int min_months);

}  // namespace orghier
