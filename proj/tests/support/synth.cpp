#include "support/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>

#include "orghier/rng.hpp"
#include "orghier/time.hpp"

namespace orghier::synth {

namespace {

std::string make_id(std::size_t n) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "e%03zu", n);
    return buf;
}

struct Employee {
    std::string id;
    int level;
    std::size_t team;    // L2/L3: team index; L1: division
    std::size_t index;
};

std::int64_t pick_timestamp(std::mt19937_64& rng, int year, int month, bool manager) {
    // managers spill into evenings and weekends more often
    Civil c;
    c.year = year;
    c.month = month;
    while (true) {
        c.day = 1 + static_cast<int>(rng_index(rng, 28));
        bool weekend_wanted = rng_unit(rng) < (manager ? 0.15 : 0.05);
        std::int64_t probe = civil_to_epoch(c);
        if (is_weekend(probe) != weekend_wanted) continue;
        break;
    }
    bool late = rng_unit(rng) < (manager ? 0.25 : 0.08);
    if (late)
        c.hour = 16 + static_cast<int>(rng_index(rng, 8));
    else
        c.hour = 8 + static_cast<int>(rng_index(rng, 8));
    c.minute = static_cast<int>(rng_index(rng, 60));
    c.second = static_cast<int>(rng_index(rng, 60));
    return civil_to_epoch(c);
}

}  // namespace

OrgData generate(const OrgSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    OrgData data;

    std::vector<Employee> everyone;
    std::size_t next = 1;
    for (std::size_t i = 0; i < spec.level1; ++i)
        everyone.push_back({make_id(next++), 1, i, everyone.size()});
    for (std::size_t i = 0; i < spec.level2; ++i)
        everyone.push_back({make_id(next++), 2, i, everyone.size()});
    for (std::size_t i = 0; i < spec.level3; ++i)
        everyone.push_back({make_id(next++), 3, i % std::max<std::size_t>(1, spec.level2),
                            everyone.size()});
    for (const auto& e : everyone) data.roster.levels[e.id] = e.level;

    std::vector<std::size_t> level1, level2;
    std::vector<std::vector<std::size_t>> team_members(std::max<std::size_t>(1, spec.level2));
    for (const auto& e : everyone) {
        if (e.level == 1) level1.push_back(e.index);
        if (e.level == 2) level2.push_back(e.index);
        if (e.level == 3) team_members[e.team].push_back(e.index);
    }

    // quiet managers and chatty coordinators keep the levels from being
    // trivially separable by degree alone
    std::vector<double> reach(everyone.size(), 1.0);
    for (const auto& e : everyone) {
        if (e.level <= 2)
            reach[e.index] = rng_unit(rng) < 0.3 ? 0.4 : 1.0;
        else
            reach[e.index] = rng_unit(rng) < 0.15 ? 2.5 : 1.0;
    }

    auto send = [&](std::size_t from, std::size_t to, int year, int month) {
        if (from == to) return;
        bool manager = everyone[from].level <= 2;
        data.records.push_back({everyone[from].id, everyone[to].id,
                                pick_timestamp(rng, year, month, manager)});
        // replies keep management cliques reciprocal
        double reply = everyone[to].level <= 2 && manager ? 0.8 : 0.35;
        if (rng_unit(rng) < reply)
            data.records.push_back({everyone[to].id, everyone[from].id,
                                    pick_timestamp(rng, year, month, everyone[to].level <= 2)});
    };
    auto wants = [&](std::size_t who, double p) {
        return rng_unit(rng) < std::min(0.95, p * reach[who]);
    };

    for (int m = 0; m < spec.months; ++m) {
        int month0 = spec.start_month - 1 + m;
        int year = spec.start_year + month0 / 12;
        int month = 1 + month0 % 12;

        for (const auto& e : everyone) {
            if (e.level == 1) {
                for (std::size_t peer : level1)
                    if (wants(e.index, 0.6)) send(e.index, peer, year, month);
                for (std::size_t lead : level2)
                    if (wants(e.index, 0.4)) send(e.index, lead, year, month);
                for (int k = 0; k < 3; ++k)
                    if (wants(e.index, 0.7))
                        send(e.index, rng_index(rng, everyone.size()), year, month);
            } else if (e.level == 2) {
                for (std::size_t member : team_members[e.team])
                    if (wants(e.index, 0.5)) send(e.index, member, year, month);
                if (!level1.empty() && wants(e.index, 0.8))
                    send(e.index, level1[e.team % level1.size()], year, month);
                for (std::size_t peer : level2)
                    if (wants(e.index, 0.2)) send(e.index, peer, year, month);
                for (int k = 0; k < 2; ++k)
                    if (wants(e.index, 0.6))
                        send(e.index, rng_index(rng, everyone.size()), year, month);
            } else {
                // a few quiet months so minimum-activity filtering bites
                if (rng_unit(rng) < 0.15) continue;
                const auto& team = team_members[e.team];
                for (std::size_t member : team)
                    if (wants(e.index, 0.4)) send(e.index, member, year, month);
                if (!level2.empty() && wants(e.index, 0.6))
                    send(e.index, level2[e.team % level2.size()], year, month);
                for (int k = 0; k < 3; ++k)
                    if (wants(e.index, 0.35))
                        send(e.index, rng_index(rng, everyone.size()), year, month);
            }
        }
    }
    return data;
}

void write_log(const OrgData& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    out << "sender;recipient;timestamp\n";
    for (const auto& r : data.records)
        out << r.sender << ';' << r.recipient << ';' << format_iso8601(r.timestamp) << '\n';
}

void write_roster(const OrgData& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    out << "id;level\n";
    for (const auto& [id, level] : data.roster.levels) out << id << ';' << level << '\n';
}

}  // namespace orghier::synth
