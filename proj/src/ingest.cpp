// Copyright 2026 The prefinfer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "prefinfer/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "prefinfer/error.hpp"

namespace prefinfer {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_row(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        const auto piece = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
        fields.emplace_back(trim(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

// Header-indexed row reader shared by every CSV schema.
class CsvTable {
public:
    CsvTable(std::istream& in, std::initializer_list<std::string_view> required, std::string what)
        : in_(in), what_(std::move(what)) {
        std::string header;
        if (!std::getline(in_, header)) {
            throw Error(ErrorCode::MissingColumn, what_ + ": empty file, expected a header row");
        }
        const auto names = split_row(header);
        for (std::string_view column : required) {
            const auto it = std::find(names.begin(), names.end(), column);
            if (it == names.end()) {
                throw Error(ErrorCode::MissingColumn,
                            what_ + ": header is missing column '" + std::string(column) + "'");
            }
            columns_.emplace(std::string(column), static_cast<std::size_t>(it - names.begin()));
        }
        width_ = names.size();
    }

    bool next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (trim(line).empty()) continue;
            fields_ = split_row(line);
            if (fields_.size() != width_) {
                fail(ErrorCode::MalformedRow, "expected " + std::to_string(width_) + " fields, found " +
                                                  std::to_string(fields_.size()));
            }
            return true;
        }
        return false;
    }

    [[nodiscard]] const std::string& str(const std::string& column) const {
        return fields_[columns_.at(column)];
    }

    [[nodiscard]] double real(const std::string& column) const {
        const std::string& text = str(column);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            fail(ErrorCode::MalformedRow, "column '" + column + "' is not a number: '" + text + "'");
        }
        return value;
    }

    [[nodiscard]] std::int64_t integer(const std::string& column) const {
        const std::string& text = str(column);
        std::int64_t value = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            fail(ErrorCode::MalformedRow, "column '" + column + "' is not an integer: '" + text + "'");
        }
        return value;
    }

    [[nodiscard]] std::string where() const { return what_ + " row " + std::to_string(line_no_); }

    [[noreturn]] void fail(ErrorCode code, const std::string& message) const {
        throw Error(code, where() + ": " + message);
    }

private:
    std::istream& in_;
    std::string what_;
    std::map<std::string, std::size_t> columns_;
    std::size_t width_ = 0;
    std::vector<std::string> fields_;
    // Header counts as row 1 so row numbers match a spreadsheet view.
    std::size_t line_no_ = 1;
};

template <typename Reader>
auto open_and_read(const std::filesystem::path& path, Reader&& reader) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return reader(in);
}

bool on_segment(LonLat p, LonLat s, LonLat e) {
    const double cross = (e.lon - s.lon) * (p.lat - s.lat) - (e.lat - s.lat) * (p.lon - s.lon);
    const double scale = std::max({std::abs(e.lon - s.lon), std::abs(e.lat - s.lat), 1.0});
    if (std::abs(cross) > 1e-12 * scale * scale) return false;
    return p.lon >= std::min(s.lon, e.lon) - 1e-12 && p.lon <= std::max(s.lon, e.lon) + 1e-12 &&
           p.lat >= std::min(s.lat, e.lat) - 1e-12 && p.lat <= std::max(s.lat, e.lat) + 1e-12;
}

Ring parse_ring(const nlohmann::json& coords) {
    Ring ring;
    for (const auto& pt : coords) {
        if (!pt.is_array() || pt.size() < 2) {
            throw Error(ErrorCode::DegenerateRing, "ring vertex must be a [lon, lat] pair");
        }
        ring.push_back({pt[0].get<double>(), pt[1].get<double>()});
    }
    if (ring.size() < 4 || ring.front().lon != ring.back().lon || ring.front().lat != ring.back().lat) {
        throw Error(ErrorCode::DegenerateRing,
                    "ring needs at least 4 vertices with first equal to last, got " +
                        std::to_string(ring.size()));
    }
    return ring;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string_view to_string(Party party) {
    switch (party) {
        case Party::Democrat: return "Democrat";
        case Party::Republican: return "Republican";
        case Party::Other: return "Other";
    }
    return "Other";
}

std::string_view to_string(Office office) {
    return office == Office::House ? "House" : "Senate";
}

Party parse_party(std::string_view text) {
    if (text == "Democrat" || text == "D" || text == "DEM") return Party::Democrat;
    if (text == "Republican" || text == "R" || text == "REP") return Party::Republican;
    return Party::Other;
}

Office parse_office(std::string_view text) {
    if (text == "House") return Office::House;
    if (text == "Senate") return Office::Senate;
    throw Error(ErrorCode::MalformedRow, "office must be House or Senate, got '" + std::string(text) + "'");
}

CandidateIndex::CandidateIndex(const std::vector<CandidateRecord>& records) : records_(records) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        if (!index_.emplace(std::make_tuple(r.candidate_id, r.cycle, r.office), i).second) {
            throw Error(ErrorCode::DuplicateKey, "candidate (" + r.candidate_id + ", " +
                                                     std::to_string(r.cycle) + ", " +
                                                     std::string(to_string(r.office)) + ") appears twice");
        }
    }
}

const CandidateRecord* CandidateIndex::find(const std::string& id, int cycle, Office office) const {
    const auto it = index_.find(std::make_tuple(id, cycle, office));
    return it == index_.end() ? nullptr : &records_[it->second];
}

const CandidateRecord& CandidateIndex::at(const std::string& id, int cycle, Office office) const {
    const auto* rec = find(id, cycle, office);
    if (rec == nullptr) {
        throw Error(ErrorCode::UnknownCandidate, "no candidate (" + id + ", " + std::to_string(cycle) +
                                                     ", " + std::string(to_string(office)) + ")");
    }
    return *rec;
}

std::vector<CandidateRecord> read_candidates(std::istream& in) {
    CsvTable table(in, {"candidate_id", "cfscore", "party", "state", "district", "cycle", "office"},
                   "candidates");
    std::vector<CandidateRecord> out;
    std::set<std::tuple<std::string, int, Office>> seen;
    while (table.next()) {
        CandidateRecord rec;
        rec.candidate_id = table.str("candidate_id");
        rec.cfscore = table.real("cfscore");
        if (!std::isfinite(rec.cfscore)) {
            table.fail(ErrorCode::NonFiniteScore, "cfscore must be finite, got '" + table.str("cfscore") + "'");
        }
        rec.party = parse_party(table.str("party"));
        rec.state = table.str("state");
        rec.district = static_cast<int>(table.integer("district"));
        rec.cycle = static_cast<int>(table.integer("cycle"));
        try {
            rec.office = parse_office(table.str("office"));
        } catch (const Error& e) {
            table.fail(ErrorCode::MalformedRow, e.what());
        }
        if (!seen.emplace(rec.candidate_id, rec.cycle, rec.office).second) {
            table.fail(ErrorCode::DuplicateKey, "duplicate candidate key (" + rec.candidate_id + ", " +
                                                    std::to_string(rec.cycle) + ", " +
                                                    std::string(to_string(rec.office)) + ")");
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<CandidateRecord> load_candidates(const std::filesystem::path& path) {
    return open_and_read(path, [](std::istream& in) { return read_candidates(in); });
}

void write_candidates(std::ostream& out, const std::vector<CandidateRecord>& records) {
    out << "candidate_id,cfscore,party,state,district,cycle,office\n";
    for (const auto& r : records) {
        out << r.candidate_id << ',' << format_double(r.cfscore) << ',' << to_string(r.party) << ','
            << r.state << ',' << r.district << ',' << r.cycle << ',' << to_string(r.office) << '\n';
    }
}

ElectionLoad read_elections(std::istream& in, const CandidateIndex& candidates) {
    CsvTable table(in, {"precinct_id", "state", "cycle", "office", "cand0_id", "cand1_id", "n0", "n1"},
                   "elections");
    ElectionLoad load;
    while (table.next()) {
        ElectionRecord rec;
        rec.precinct_id = table.str("precinct_id");
        rec.state = table.str("state");
        rec.cycle = static_cast<int>(table.integer("cycle"));
        try {
            rec.office = parse_office(table.str("office"));
        } catch (const Error& e) {
            table.fail(ErrorCode::MalformedRow, e.what());
        }
        rec.cand0_id = table.str("cand0_id");
        rec.cand1_id = table.str("cand1_id");
        rec.n0 = table.integer("n0");
        rec.n1 = table.integer("n1");
        if (rec.n0 < 0 || rec.n1 < 0) {
            table.fail(ErrorCode::NegativeCount, "vote counts must be non-negative");
        }
        const auto* c0 = candidates.find(rec.cand0_id, rec.cycle, rec.office);
        const auto* c1 = candidates.find(rec.cand1_id, rec.cycle, rec.office);
        if (c0 == nullptr || c1 == nullptr) {
            table.fail(ErrorCode::UnknownCandidate,
                       "unknown candidate '" + (c0 == nullptr ? rec.cand0_id : rec.cand1_id) + "'");
        }
        const bool dem_rep = c0->party == Party::Democrat && c1->party == Party::Republican;
        const bool rep_dem = c0->party == Party::Republican && c1->party == Party::Democrat;
        if (!dem_rep && !rep_dem) {
            table.fail(ErrorCode::PartyConflict, "contest must pair one Democrat with one Republican (got " +
                                                     std::string(to_string(c0->party)) + " vs " +
                                                     std::string(to_string(c1->party)) + ")");
        }
        if (rep_dem) {
            std::swap(rec.cand0_id, rec.cand1_id);
            std::swap(rec.n0, rec.n1);
        }
        if (rec.total() == 0) {
            ++load.skipped;
            continue;
        }
        load.records.push_back(std::move(rec));
    }
    return load;
}

ElectionLoad load_elections(const std::filesystem::path& path, const CandidateIndex& candidates) {
    return open_and_read(path, [&](std::istream& in) { return read_elections(in, candidates); });
}

void write_elections(std::ostream& out, const std::vector<ElectionRecord>& records) {
    out << "precinct_id,state,cycle,office,cand0_id,cand1_id,n0,n1\n";
    for (const auto& r : records) {
        out << r.precinct_id << ',' << r.state << ',' << r.cycle << ',' << to_string(r.office) << ','
            << r.cand0_id << ',' << r.cand1_id << ',' << r.n0 << ',' << r.n1 << '\n';
    }
}

std::vector<PrecinctCenter> read_centers(std::istream& in) {
    CsvTable table(in, {"precinct_id", "lon", "lat"}, "centers");
    std::vector<PrecinctCenter> out;
    while (table.next()) {
        PrecinctCenter c{table.str("precinct_id"), table.real("lon"), table.real("lat")};
        if (!(c.lon >= -180.0 && c.lon <= 180.0 && c.lat >= -90.0 && c.lat <= 90.0)) {
            table.fail(ErrorCode::MalformedRow, "coordinates out of range");
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<PrecinctCenter> load_centers(const std::filesystem::path& path) {
    return open_and_read(path, [](std::istream& in) { return read_centers(in); });
}

void write_centers(std::ostream& out, const std::vector<PrecinctCenter>& centers) {
    out << "precinct_id,lon,lat\n";
    for (const auto& c : centers) {
        out << c.precinct_id << ',' << format_double(c.lon) << ',' << format_double(c.lat) << '\n';
    }
}

std::vector<DistrictBoundary> parse_boundaries(const std::string& geojson) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(geojson);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::IoError, std::string("invalid GeoJSON: ") + e.what());
    }
    if (doc.value("type", "") != "FeatureCollection" || !doc.contains("features")) {
        throw Error(ErrorCode::IoError, "boundaries must be a GeoJSON FeatureCollection");
    }
    std::vector<DistrictBoundary> out;
    for (const auto& feature : doc["features"]) {
        const auto& props = feature.at("properties");
        if (!props.contains("district") || !props["district"].is_number_integer()) {
            throw Error(ErrorCode::MissingColumn, "feature lacks an integer 'district' property");
        }
        DistrictBoundary b;
        b.district = props["district"].get<int>();
        b.state = props.value("state", std::string{});
        const auto& geom = feature.at("geometry");
        const std::string type = geom.at("type").get<std::string>();
        if (type == "Polygon") {
            for (const auto& ring : geom.at("coordinates")) b.rings.push_back(parse_ring(ring));
        } else if (type == "MultiPolygon") {
            for (const auto& poly : geom.at("coordinates")) {
                for (const auto& ring : poly) b.rings.push_back(parse_ring(ring));
            }
        } else {
            throw Error(ErrorCode::IoError, "unsupported geometry type '" + type + "'");
        }
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<DistrictBoundary> load_boundaries(const std::filesystem::path& path) {
    return open_and_read(path, [](std::istream& in) {
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_boundaries(ss.str());
    });
}

std::string boundaries_to_geojson(const std::vector<DistrictBoundary>& boundaries) {
    nlohmann::json features = nlohmann::json::array();
    for (const auto& b : boundaries) {
        nlohmann::json rings = nlohmann::json::array();
        for (const auto& ring : b.rings) {
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& p : ring) pts.push_back({p.lon, p.lat});
            rings.push_back(std::move(pts));
        }
        features.push_back({{"type", "Feature"},
                            {"properties", {{"district", b.district}, {"state", b.state}}},
                            {"geometry", {{"type", "Polygon"}, {"coordinates", std::move(rings)}}}});
    }
    nlohmann::json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
    return doc.dump(1);
}

bool point_in_polygon(LonLat p, const DistrictBoundary& boundary) {
    for (const auto& ring : boundary.rings) {
        if (ring.size() < 4) {
            throw Error(ErrorCode::DegenerateRing, "district " + std::to_string(boundary.district) +
                                                       " has a ring with fewer than 4 vertices");
        }
    }
    for (const auto& ring : boundary.rings) {
        for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
            if (on_segment(p, ring[i], ring[i + 1])) return true;
        }
    }
    bool inside = false;
    for (const auto& ring : boundary.rings) {
        for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
            const LonLat& a = ring[i];
            const LonLat& b = ring[j];
            if ((a.lat > p.lat) != (b.lat > p.lat)) {
                const double x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
                if (p.lon < x) inside = !inside;
            }
        }
    }
    return inside;
}

LinkResult link_districts(std::vector<ElectionRecord> elections,
                          const std::vector<PrecinctCenter>& centers,
                          const std::vector<DistrictBoundary>& boundaries) {
    std::map<std::string, LonLat> center_of;
    for (const auto& c : centers) center_of[c.precinct_id] = {c.lon, c.lat};

    // One lookup per (state, precinct); elections repeat precincts across cycles.
    std::map<std::pair<std::string, std::string>, std::optional<int>> memo;
    std::set<std::string> unmatched;
    std::set<std::string> warned;
    LinkResult result;
    for (auto& e : elections) {
        const auto key = std::make_pair(e.state, e.precinct_id);
        auto it = memo.find(key);
        if (it == memo.end()) {
            const auto c = center_of.find(e.precinct_id);
            if (c == center_of.end()) {
                throw Error(ErrorCode::MissingCenter, "no center for precinct '" + e.precinct_id + "'");
            }
            std::vector<int> hits;
            for (const auto& b : boundaries) {
                if (!b.state.empty() && b.state != e.state) continue;
                if (point_in_polygon(c->second, b)) hits.push_back(b.district);
            }
            std::sort(hits.begin(), hits.end());
            hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
            std::optional<int> district;
            if (!hits.empty()) district = hits.front();
            if (hits.size() > 1 && warned.insert(e.precinct_id).second) {
                result.warnings.push_back("precinct '" + e.precinct_id + "' lies in " +
                                          std::to_string(hits.size()) + " districts; using district " +
                                          std::to_string(hits.front()));
            }
            it = memo.emplace(key, district).first;
        }
        e.district = it->second;
        if (!e.district) unmatched.insert(e.precinct_id);
    }
    result.elections = std::move(elections);
    result.unmatched.assign(unmatched.begin(), unmatched.end());
    return result;
}

std::string skip_report_json(std::int64_t skipped, const std::vector<std::string>& unmatched) {
    nlohmann::json doc = {{"skipped", skipped}, {"unmatched", unmatched}};
    return doc.dump();
}

std::vector<SurveyRecord> read_survey(std::istream& in) {
    CsvTable table(in, {"state", "district", "cycle", "n_dem", "n_rep", "n_other", "ideology"}, "survey");
    std::vector<SurveyRecord> out;
    while (table.next()) {
        SurveyRecord r;
        r.state = table.str("state");
        r.district = static_cast<int>(table.integer("district"));
        r.cycle = static_cast<int>(table.integer("cycle"));
        r.n_dem = table.integer("n_dem");
        r.n_rep = table.integer("n_rep");
        r.n_other = table.integer("n_other");
        if (r.n_dem < 0 || r.n_rep < 0 || r.n_other < 0) {
            table.fail(ErrorCode::NegativeCount, "survey counts must be non-negative");
        }
        r.ideology = table.str("ideology").empty() ? std::nan("") : table.real("ideology");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<SurveyRecord> load_survey(const std::filesystem::path& path) {
    return open_and_read(path, [](std::istream& in) { return read_survey(in); });
}

std::vector<MrpRecord> read_mrp(std::istream& in) {
    CsvTable table(in, {"state", "district", "mrp_score"}, "mrp");
    std::vector<MrpRecord> out;
    while (table.next()) {
        out.push_back({table.str("state"), static_cast<int>(table.integer("district")), table.real("mrp_score")});
    }
    return out;
}

std::vector<MrpRecord> load_mrp(const std::filesystem::path& path) {
    return open_and_read(path, [](std::istream& in) { return read_mrp(in); });
}

}  // namespace prefinfer
