#include "trey/ingest/playbyplay.hpp"

#include <sstream>
#include <stdexcept>

#include "trey/util/csv.hpp"
#include "trey/util/io.hpp"

namespace trey::ingest {

namespace {

std::vector<std::string> split_lines(const std::string& content) {
    std::vector<std::string> lines;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::map<std::string, int> header_index(const std::vector<std::string>& header,
                                        const std::vector<std::string>& required,
                                        const std::string& source) {
    std::map<std::string, int> idx;
    for (std::size_t i = 0; i < header.size(); ++i) idx[header[i]] = static_cast<int>(i);
    for (const auto& col : required)
        if (!idx.count(col))
            throw std::runtime_error(source + ": missing required column " + col);
    return idx;
}

}  // namespace

PbpResult parse_playbyplay_string(const std::string& content, const std::string& source_name) {
    const auto lines = split_lines(content);
    if (lines.empty()) throw std::runtime_error(source_name + ": empty play-by-play file");

    const std::vector<std::string> required = {"GAME_ID",      "EVENTNUM", "EVENTMSGTYPE",
                                               "PERIOD",       "GAME_CLOCK_S", "TEAM_ID",
                                               "PLAYER1_ID",   "DESCRIPTION"};
    const auto idx = header_index(util::csv_split(lines[0]), required, source_name);

    PbpResult result;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        result.stats.rows_seen++;
        const auto fields = util::csv_split(lines[li]);
        try {
            core::PlayEvent ev;
            ev.game_id = fields.at(idx.at("GAME_ID"));
            ev.event_id = util::parse_long(fields.at(idx.at("EVENTNUM")), "EVENTNUM");
            const long code = util::parse_long(fields.at(idx.at("EVENTMSGTYPE")), "EVENTMSGTYPE");
            ev.period = static_cast<int>(util::parse_long(fields.at(idx.at("PERIOD")), "PERIOD"));
            ev.game_clock_s = util::parse_double(fields.at(idx.at("GAME_CLOCK_S")), "GAME_CLOCK_S");
            ev.team_id = fields.at(idx.at("TEAM_ID"));
            ev.shooter_id = fields.at(idx.at("PLAYER1_ID"));
            ev.description = fields.at(idx.at("DESCRIPTION"));

            ev.event_type = code == 1   ? core::EventType::MadeShot
                            : code == 2 ? core::EventType::MissedShot
                                        : core::EventType::Other;
            // "3PT" is matched exactly and case-sensitively; the shot-type and
            // shooter clauses keep the PlayEvent invariant on dirty rows.
            const bool is_shot = ev.event_type != core::EventType::Other;
            ev.is_three = is_shot && !ev.shooter_id.empty() &&
                          ev.description.find("3PT") != std::string::npos;
            result.events.push_back(std::move(ev));
        } catch (const std::exception&) {
            result.stats.rows_skipped++;
        }
    }
    return result;
}

PbpResult parse_playbyplay(const std::filesystem::path& path) {
    return parse_playbyplay_string(util::read_file(path), path.string());
}

BioResult parse_player_bio_string(const std::string& content, const std::string& source_name) {
    const auto lines = split_lines(content);
    if (lines.empty()) throw std::runtime_error(source_name + ": empty player-bio file");

    const std::vector<std::string> required = {"PLAYER_ID", "NAME",          "HEIGHT_CM",
                                               "WEIGHT_KG", "EXPERIENCE_YR", "POSITION"};
    const auto idx = header_index(util::csv_split(lines[0]), required, source_name);

    BioResult result;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        result.stats.rows_seen++;
        const auto fields = util::csv_split(lines[li]);
        try {
            core::PlayerBio bio;
            bio.player_id = fields.at(idx.at("PLAYER_ID"));
            bio.name = fields.at(idx.at("NAME"));
            bio.height_cm = util::parse_double(fields.at(idx.at("HEIGHT_CM")), "HEIGHT_CM");
            bio.weight_kg = util::parse_double(fields.at(idx.at("WEIGHT_KG")), "WEIGHT_KG");
            bio.experience_yr = static_cast<int>(
                util::parse_long(fields.at(idx.at("EXPERIENCE_YR")), "EXPERIENCE_YR"));
            const std::string& pos = fields.at(idx.at("POSITION"));
            if (bio.player_id.empty() || pos.empty()) throw std::runtime_error("empty field");
            // hybrid listings like "G-F" collapse to the first letter
            switch (pos[0]) {
                case 'G': bio.position = core::Position::G; break;
                case 'F': bio.position = core::Position::F; break;
                case 'C': bio.position = core::Position::C; break;
                default: throw std::runtime_error("bad position");
            }
            if (bio.height_cm < 150.0 || bio.height_cm > 240.0) throw std::runtime_error("height");
            if (bio.weight_kg < 50.0 || bio.weight_kg > 180.0) throw std::runtime_error("weight");
            if (bio.experience_yr < 0) throw std::runtime_error("experience");

            auto [it, inserted] = result.bios.insert_or_assign(bio.player_id, std::move(bio));
            (void)it;
            if (!inserted) result.stats.duplicates++;
        } catch (const std::exception&) {
            result.stats.rows_rejected++;
        }
    }
    return result;
}

BioResult parse_player_bio(const std::filesystem::path& path) {
    return parse_player_bio_string(util::read_file(path), path.string());
}

}  // namespace trey::ingest
