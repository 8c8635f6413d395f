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
#pragma once

// Election data model, CSV/GeoJSON readers and writers, and precinct to
// district linkage.
//
// CSV files are plain comma separated with a fixed header row; quoting is not
// supported, so identifiers must not contain commas.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace prefinfer {

enum class Party { Democrat, Republican, Other };
enum class Office { House, Senate };

std::string_view to_string(Party party);
std::string_view to_string(Office office);
Party parse_party(std::string_view text);
Office parse_office(std::string_view text);

struct CandidateRecord {
    std::string candidate_id;
    double cfscore = 0.0;  // lower = more liberal
    Party party = Party::Other;
    std::string state;
    int district = 1;
    int cycle = 0;
    Office office = Office::House;

    bool operator==(const CandidateRecord&) const = default;
};

struct ElectionRecord {
    std::string precinct_id;
    std::string state;
    int cycle = 0;
    Office office = Office::House;
    std::string cand0_id;  // always the Democrat after loading
    std::string cand1_id;
    std::int64_t n0 = 0;
    std::int64_t n1 = 0;
    std::optional<int> district;

    [[nodiscard]] std::int64_t total() const { return n0 + n1; }
    bool operator==(const ElectionRecord&) const = default;
};

struct PrecinctCenter {
    std::string precinct_id;
    double lon = 0.0;
    double lat = 0.0;
};

struct LonLat {
    double lon = 0.0;
    double lat = 0.0;

    bool operator==(const LonLat&) const = default;
};

using Ring = std::vector<LonLat>;

struct DistrictBoundary {
    int district = 0;
    std::string state;
    std::vector<Ring> rings;  // first exterior, then holes
};

/// Candidates indexed by (candidate_id, cycle, office).
class CandidateIndex {
public:
    CandidateIndex() = default;
    explicit CandidateIndex(const std::vector<CandidateRecord>& records);

    [[nodiscard]] const CandidateRecord* find(const std::string& id, int cycle, Office office) const;
    /// Throws Error(UnknownCandidate).
    [[nodiscard]] const CandidateRecord& at(const std::string& id, int cycle, Office office) const;
    [[nodiscard]] const std::vector<CandidateRecord>& records() const { return records_; }

private:
    std::vector<CandidateRecord> records_;
    std::map<std::tuple<std::string, int, Office>, std::size_t> index_;
};

std::vector<CandidateRecord> read_candidates(std::istream& in);
std::vector<CandidateRecord> load_candidates(const std::filesystem::path& path);
void write_candidates(std::ostream& out, const std::vector<CandidateRecord>& records);

struct ElectionLoad {
    std::vector<ElectionRecord> records;
    std::int64_t skipped = 0;  // rows with zero total votes
};

ElectionLoad read_elections(std::istream& in, const CandidateIndex& candidates);
ElectionLoad load_elections(const std::filesystem::path& path, const CandidateIndex& candidates);
void write_elections(std::ostream& out, const std::vector<ElectionRecord>& records);

std::vector<PrecinctCenter> read_centers(std::istream& in);
std::vector<PrecinctCenter> load_centers(const std::filesystem::path& path);
void write_centers(std::ostream& out, const std::vector<PrecinctCenter>& centers);

/// GeoJSON FeatureCollection of Polygon/MultiPolygon features with an integer
/// `district` property and an optional string `state` property.
std::vector<DistrictBoundary> parse_boundaries(const std::string& geojson);
std::vector<DistrictBoundary> load_boundaries(const std::filesystem::path& path);
std::string boundaries_to_geojson(const std::vector<DistrictBoundary>& boundaries);

/// Even-odd ray casting over every ring; points on any edge count as inside.
bool point_in_polygon(LonLat p, const DistrictBoundary& boundary);

struct LinkResult {
    std::vector<ElectionRecord> elections;
    std::vector<std::string> unmatched;  // sorted, unique precinct ids
    std::vector<std::string> warnings;
};

/// Assigns each election its containing district within the same state.
/// Ties between overlapping districts go to the lowest district number.
LinkResult link_districts(std::vector<ElectionRecord> elections,
                          const std::vector<PrecinctCenter>& centers,
                          const std::vector<DistrictBoundary>& boundaries);

/// `{"skipped": n, "unmatched": [ids]}`
std::string skip_report_json(std::int64_t skipped, const std::vector<std::string>& unmatched);

struct SurveyRecord {
    std::string state;
    int district = 0;
    int cycle = 0;
    std::int64_t n_dem = 0;
    std::int64_t n_rep = 0;
    std::int64_t n_other = 0;
    double ideology = 0.0;  // may be NaN when the survey carries no ideology item
};

/// Header `state,district,cycle,n_dem,n_rep,n_other,ideology`.
std::vector<SurveyRecord> read_survey(std::istream& in);
std::vector<SurveyRecord> load_survey(const std::filesystem::path& path);

struct MrpRecord {
    std::string state;
    int district = 0;
    double score = 0.0;
};

/// Header `state,district,mrp_score`.
std::vector<MrpRecord> read_mrp(std::istream& in);
std::vector<MrpRecord> load_mrp(const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace prefinfer
