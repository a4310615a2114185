#include "orghier/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace orghier {

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(delimiter, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool iequals(const std::string& a, const char* b) {
    std::size_t n = 0;
    while (b[n]) n++;
    if (a.size() != n) return false;
    for (std::size_t i = 0; i < n; ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) != b[i]) return false;
    return true;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path.string());
    return in;
}

std::int64_t parse_timestamp(const std::string& field, TimestampFormat format,
                             const std::filesystem::path& path, std::size_t line_no) {
    if (format == TimestampFormat::epoch) {
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc{} || ptr != field.data() + field.size())
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": unparsable epoch timestamp '" + field + "'");
        return value;
    }
    auto civil = parse_iso8601(field);
    if (!civil)
        throw DataError(path.string() + ":" + std::to_string(line_no) +
                        ": unparsable ISO-8601 timestamp '" + field + "'");
    return civil_to_epoch(*civil);
}

}  // namespace

std::vector<EmailRecord> parse_email_log(const std::filesystem::path& path,
                                         const IngestOptions& options) {
    std::ifstream in = open_or_throw(path);
    std::vector<EmailRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_line(line, options.delimiter);
        for (auto& f : fields) f = trim(f);
        if (line_no == 1 && fields.size() >= 3 && iequals(fields[0], "sender")) continue;
        if (fields.size() < 3)
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": expected sender, recipient, timestamp");
        if (fields[0].empty() || fields[1].empty())
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": empty sender or recipient");
        records.push_back(
            {fields[0], fields[1], parse_timestamp(fields[2], options.format, path, line_no)});
    }
    return records;
}

Roster parse_roster(const std::filesystem::path& path, char delimiter) {
    std::ifstream in = open_or_throw(path);
    Roster roster;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_line(line, delimiter);
        for (auto& f : fields) f = trim(f);
        if (line_no == 1 && fields.size() >= 2 && iequals(fields[0], "id")) continue;
        if (fields.size() < 2 || fields[0].empty())
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": expected id, level");
        int level = 0;
        auto [ptr, ec] =
            std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), level);
        if (ec != std::errc{} || ptr != fields[1].data() + fields[1].size() || level < kMinLevel ||
            level > kMaxLevel)
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": id '" + fields[0] +
                            "' has level '" + fields[1] + "' outside 1..3");
        auto [it, inserted] = roster.levels.emplace(fields[0], level);
        if (!inserted)
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": duplicate id '" +
                            fields[0] + "'");
    }
    return roster;
}

std::vector<EmailRecord> filter_records(std::span<const EmailRecord> records,
                                        const Roster& roster, FilterStats* stats) {
    std::vector<EmailRecord> kept;
    kept.reserve(records.size());
    FilterStats local;
    for (const auto& r : records) {
        if (r.sender == r.recipient) {
            local.dropped_self_loops++;
        } else if (!roster.contains(r.sender) || !roster.contains(r.recipient)) {
            local.dropped_off_roster++;
        } else {
            kept.push_back(r);
        }
    }
    local.kept = kept.size();
    if (stats) *stats = local;
    return kept;
}

ActivityIndex build_activity_index(std::span<const EmailRecord> records, ActivityMode mode) {
    std::map<std::string, std::set<YearMonth>> sets;
    for (const auto& r : records) {
        YearMonth ym = year_month_of(r.timestamp);
        sets[r.sender].insert(ym);
        if (mode == ActivityMode::any) sets[r.recipient].insert(ym);
    }
    ActivityIndex index;
    for (auto& [id, months] : sets)
        index.months.emplace(id, std::vector<YearMonth>(months.begin(), months.end()));
    return index;
}

Roster apply_min_activity(const Roster& roster, const ActivityIndex& activity, int min_months) {
    if (min_months < 1) throw DataError("min_months must be >= 1");
    Roster result;
    for (const auto& [id, level] : roster.levels) {
        if (activity.month_count(id) >= static_cast<std::size_t>(min_months))
            result.levels.emplace(id, level);
    }
    if (result.empty())
        throw DataError("no employee has " + std::to_string(min_months) +
                        " months of activity; roster would be empty");
    return result;
}

}  // namespace orghier
