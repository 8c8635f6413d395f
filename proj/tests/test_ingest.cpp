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
#include <algorithm>
#include <sstream>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "prefinfer/error.hpp"
#include "prefinfer/ingest.hpp"

using namespace prefinfer;

namespace {

const char* kCandidates =
    "candidate_id,cfscore,party,state,district,cycle,office\n"
    "A,-1.2,Democrat,TX,7,2008,House\n"
    "B,0.9,Republican,TX,7,2008,House\n"
    "C,-0.4,Democrat,TX,7,2008,Senate\n"
    "D,1.1,Republican,TX,7,2008,Senate\n"
    "E,0.3,Republican,TX,8,2008,House\n"
    "F,0.0,Other,TX,8,2008,House\n";

CandidateIndex index_of(const char* csv = kCandidates) {
    std::istringstream in(csv);
    return CandidateIndex(read_candidates(in));
}

ErrorCode code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoError;
}

ElectionLoad elections_of(const std::string& rows) {
    std::istringstream in("precinct_id,state,cycle,office,cand0_id,cand1_id,n0,n1\n" + rows);
    return read_elections(in, index_of());
}

Ring square(double x0, double y0, double x1, double y1) {
    return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}};
}

ElectionRecord house(const std::string& id, const std::string& state = "TX") {
    return {id, state, 2008, Office::House, "A", "B", 1, 1, std::nullopt};
}

}  // namespace

TEST_CASE("candidates") {
    const auto idx = index_of();
    const auto& a = idx.at("A", 2008, Office::House);
    CHECK(a.cfscore == -1.2);
    CHECK(a.party == Party::Democrat);
    CHECK(a.state == "TX");
    CHECK(a.district == 7);
    CHECK(idx.find("A", 2008, Office::Senate) == nullptr);
    CHECK(code_of([&] { (void)idx.at("Z", 2008, Office::House); }) == ErrorCode::UnknownCandidate);

    CHECK(code_of([] { index_of("candidate_id,cfscore,party,state,district,cycle,office\nA,NaN,Democrat,TX,7,2008,House\n"); }) ==
          ErrorCode::NonFiniteScore);
    CHECK(code_of([] { index_of("candidate_id,cfscore,party,state,district,cycle,office\nA,inf,Democrat,TX,7,2008,House\n"); }) ==
          ErrorCode::NonFiniteScore);
    CHECK(code_of([] {
              index_of("candidate_id,cfscore,party,state,district,cycle,office\n"
                       "A,1,Democrat,TX,7,2008,House\nA,2,Democrat,TX,7,2008,House\n");
          }) == ErrorCode::DuplicateKey);
    CHECK(code_of([] { index_of("candidate_id,cfscore,party,state,cycle,office\n"); }) == ErrorCode::MissingColumn);
    CHECK(code_of([] { index_of("candidate_id,cfscore,party,state,district,cycle,office\nA,x,Democrat,TX,7,2008,House\n"); }) ==
          ErrorCode::MalformedRow);
    CHECK(code_of([] { index_of("candidate_id,cfscore,party,state,district,cycle,office\nA,1,Democrat,TX,7,2008\n"); }) ==
          ErrorCode::MalformedRow);
    CHECK(code_of([] { index_of("candidate_id,cfscore,party,state,district,cycle,office\nA,1,Democrat,TX,7,2008,Mayor\n"); }) ==
          ErrorCode::MalformedRow);
}

TEST_CASE("errors name the offending row") {
    try {
        index_of("candidate_id,cfscore,party,state,district,cycle,office\n"
                 "A,1,Democrat,TX,7,2008,House\nB,NaN,Democrat,TX,7,2008,House\n");
        FAIL("expected NonFiniteScore");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }
}

TEST_CASE("columns are matched by name") {
    std::istringstream in("office,cycle,district,state,party,cfscore,candidate_id\nHouse,2008,7,TX,Democrat,-1.2,A\n");
    const auto recs = read_candidates(in);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].candidate_id == "A");
    CHECK(recs[0].cfscore == -1.2);
}

TEST_CASE("elections") {
    SUBCASE("re-orientation puts the Democrat first") {
        const auto load = elections_of("p1,TX,2008,House,B,A,10,30\n");
        REQUIRE(load.records.size() == 1);
        const auto& r = load.records[0];
        CHECK(r.cand0_id == "A");
        CHECK(r.cand1_id == "B");
        CHECK(r.n0 == 30);
        CHECK(r.n1 == 10);
    }
    SUBCASE("zero-vote rows are dropped and counted") {
        const auto load = elections_of("p1,TX,2008,House,A,B,0,0\np2,TX,2008,House,A,B,3,4\n");
        CHECK(load.records.size() == 1);
        CHECK(load.skipped == 1);
    }
    SUBCASE("errors") {
        CHECK(code_of([] { elections_of("p1,TX,2008,House,A,Q,1,1\n"); }) == ErrorCode::UnknownCandidate);
        CHECK(code_of([] { elections_of("p1,TX,2008,Senate,A,B,1,1\n"); }) == ErrorCode::UnknownCandidate);
        CHECK(code_of([] { elections_of("p1,TX,2008,House,A,B,-1,1\n"); }) == ErrorCode::NegativeCount);
        CHECK(code_of([] { elections_of("p1,TX,2008,House,B,E,1,1\n"); }) == ErrorCode::PartyConflict);
        CHECK(code_of([] { elections_of("p1,TX,2008,House,A,F,1,1\n"); }) == ErrorCode::PartyConflict);
    }
    SUBCASE("every loaded record has the Democrat in position 0") {
        const auto idx = index_of();
        const auto load = elections_of(
            "p1,TX,2008,House,B,A,1,2\np2,TX,2008,House,A,B,3,4\np3,TX,2008,Senate,D,C,5,0\np4,TX,2008,Senate,C,D,0,5\n");
        CHECK(load.records.size() == 4);
        for (const auto& r : load.records) {
            CHECK(idx.at(r.cand0_id, r.cycle, r.office).party == Party::Democrat);
            CHECK(idx.at(r.cand1_id, r.cycle, r.office).party == Party::Republican);
        }
    }
}

TEST_CASE("CSV round trip") {
    const auto idx = index_of();
    std::ostringstream cands;
    write_candidates(cands, idx.records());
    std::istringstream cin(cands.str());
    CHECK(read_candidates(cin) == idx.records());

    const auto load = elections_of("p1,TX,2008,House,B,A,10,30\np2,TX,2008,Senate,C,D,7,9\n");
    std::ostringstream elecs;
    write_elections(elecs, load.records);
    std::istringstream ein(elecs.str());
    CHECK(read_elections(ein, idx).records == load.records);

    const std::vector<PrecinctCenter> centers{{"p1", -97.123456789, 30.5}, {"p2", 0.1 + 0.2, -89.999}};
    std::ostringstream cout;
    write_centers(cout, centers);
    std::istringstream cin2(cout.str());
    const auto back = read_centers(cin2);
    REQUIRE(back.size() == 2);
    CHECK(back[1].lon == centers[1].lon);
    CHECK(back[0].lat == centers[0].lat);
}

TEST_CASE("centers reject out-of-range coordinates") {
    std::istringstream in("precinct_id,lon,lat\np1,190,0\n");
    CHECK(code_of([&] { read_centers(in); }) == ErrorCode::MalformedRow);
}

TEST_CASE("point in polygon") {
    const DistrictBoundary sq{1, "TX", {square(0, 0, 2, 2)}};
    CHECK(point_in_polygon({1, 1}, sq));
    CHECK_FALSE(point_in_polygon({3, 1}, sq));
    CHECK(point_in_polygon({0, 1}, sq));
    CHECK(point_in_polygon({2, 2}, sq));
    CHECK(point_in_polygon({1, 0}, sq));

    const DistrictBoundary holed{2, "TX", {square(0, 0, 4, 4), square(1, 1, 3, 3)}};
    CHECK(point_in_polygon({0.5, 0.5}, holed));
    CHECK_FALSE(point_in_polygon({2, 2}, holed));
    CHECK(point_in_polygon({1, 2}, holed));  // on the hole's edge

    const DistrictBoundary bad{3, "TX", {{{0, 0}, {1, 0}, {0, 0}}}};
    CHECK(code_of([&] { (void)point_in_polygon({0, 0}, bad); }) == ErrorCode::DegenerateRing);

    const DistrictBoundary tri{4, "TX", {{{0, 0}, {4, 0}, {0, 4}, {0, 0}}}};
    CHECK(point_in_polygon({1, 1}, tri));
    CHECK_FALSE(point_in_polygon({3, 3}, tri));
    CHECK(point_in_polygon({2, 2}, tri));  // on the hypotenuse
}

TEST_CASE("GeoJSON boundaries") {
    const std::string doc = R"({"type":"FeatureCollection","features":[
      {"type":"Feature","properties":{"district":7,"state":"TX"},
       "geometry":{"type":"Polygon","coordinates":[[[0,0],[2,0],[2,2],[0,2],[0,0]]]}},
      {"type":"Feature","properties":{"district":8},
       "geometry":{"type":"MultiPolygon","coordinates":[[[[5,5],[6,5],[6,6],[5,6],[5,5]]],[[[8,8],[9,8],[9,9],[8,9],[8,8]]]]}}]})";
    const auto bs = parse_boundaries(doc);
    REQUIRE(bs.size() == 2);
    CHECK(bs[0].district == 7);
    CHECK(bs[0].state == "TX");
    CHECK(bs[1].rings.size() == 2);
    CHECK(point_in_polygon({8.5, 8.5}, bs[1]));
    CHECK(point_in_polygon({5.5, 5.5}, bs[1]));
    CHECK_FALSE(point_in_polygon({7, 7}, bs[1]));

    const auto again = parse_boundaries(boundaries_to_geojson(bs));
    REQUIRE(again.size() == 2);
    CHECK(again[1].rings == bs[1].rings);

    CHECK(code_of([] { parse_boundaries("{\"type\":\"Feature\"}"); }) == ErrorCode::IoError);
    CHECK(code_of([] { parse_boundaries("nope"); }) == ErrorCode::IoError);
    CHECK(code_of([] {
              parse_boundaries(R"({"type":"FeatureCollection","features":[{"type":"Feature","properties":{},
                "geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,0]]]}}]})");
          }) == ErrorCode::MissingColumn);
    CHECK(code_of([] {
              parse_boundaries(R"({"type":"FeatureCollection","features":[{"type":"Feature","properties":{"district":1},
                "geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1]]]}}]})");
          }) == ErrorCode::DegenerateRing);
}

TEST_CASE("district linkage") {
    const std::vector<DistrictBoundary> bounds{{7, "TX", {square(0, 0, 2, 2)}}, {8, "TX", {square(2, 0, 4, 2)}}};
    SUBCASE("hand geometry") {
        const std::vector<PrecinctCenter> centers{{"p1", 1, 1}, {"p2", 3, 1.5}, {"p3", 5, 5}};
        const auto r = link_districts({house("p1"), house("p2"), house("p3")}, centers, bounds);
        CHECK(r.elections[0].district == 7);
        CHECK(r.elections[1].district == 8);
        CHECK_FALSE(r.elections[2].district.has_value());
        CHECK(r.unmatched == std::vector<std::string>{"p3"});
        CHECK(r.warnings.empty());
    }
    SUBCASE("shared edge resolves to the lowest district with a warning") {
        const auto r = link_districts({house("p1")}, {{"p1", 2, 1}}, bounds);
        CHECK(r.elections[0].district == 7);
        CHECK(r.warnings.size() == 1);
    }
    SUBCASE("boundaries of other states are ignored") {
        const std::vector<DistrictBoundary> ok{{3, "OK", {square(0, 0, 2, 2)}}, {7, "TX", {square(0, 0, 2, 2)}}};
        const auto r = link_districts({house("p1")}, {{"p1", 1, 1}}, ok);
        CHECK(r.elections[0].district == 7);
        CHECK(r.warnings.empty());
    }
    SUBCASE("missing center") {
        CHECK(code_of([&] { (void)link_districts({house("p1")}, {}, bounds); }) == ErrorCode::MissingCenter);
    }
    SUBCASE("independent of row order") {
        const std::vector<PrecinctCenter> centers{{"p1", 1, 1}, {"p2", 3, 1.5}, {"p3", 5, 5}, {"p4", 2, 1}};
        std::vector<ElectionRecord> rows{house("p1"), house("p2"), house("p3"), house("p4")};
        const auto a = link_districts(rows, centers, bounds);
        std::reverse(rows.begin(), rows.end());
        auto rc = centers;
        std::reverse(rc.begin(), rc.end());
        auto rb = bounds;
        std::reverse(rb.begin(), rb.end());
        const auto b = link_districts(rows, rc, rb);
        for (const auto& e : a.elections) {
            const auto it = std::find_if(b.elections.begin(), b.elections.end(),
                                         [&](const auto& x) { return x.precinct_id == e.precinct_id; });
            CHECK(it->district == e.district);
        }
        CHECK(a.unmatched == b.unmatched);
    }
}

TEST_CASE("skip report") {
    const auto doc = nlohmann::json::parse(skip_report_json(3, {"p1", "p9"}));
    CHECK(doc["skipped"] == 3);
    CHECK(doc["unmatched"] == nlohmann::json::array({"p1", "p9"}));
}

TEST_CASE("survey and MRP tables") {
    std::istringstream s("state,district,cycle,n_dem,n_rep,n_other,ideology\nTX,7,2008,40,40,20,-0.3\nTX,8,2008,1,2,3,\n");
    const auto survey = read_survey(s);
    REQUIRE(survey.size() == 2);
    CHECK(survey[0].ideology == -0.3);
    CHECK(std::isnan(survey[1].ideology));
    std::istringstream bad("state,district,cycle,n_dem,n_rep,n_other,ideology\nTX,7,2008,-1,0,0,0\n");
    CHECK(code_of([&] { read_survey(bad); }) == ErrorCode::NegativeCount);

    std::istringstream m("state,district,mrp_score\nTX,7,0.25\n");
    const auto mrp = read_mrp(m);
    REQUIRE(mrp.size() == 1);
    CHECK(mrp[0].score == 0.25);
}

TEST_CASE("number formatting round-trips") {
    for (double x : {0.1, -1.2, 1e-300, 123456789.125, 0.1 + 0.2}) CHECK(std::stod(format_double(x)) == x);
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("missing files") {
    CHECK(code_of([] { load_candidates("/nonexistent/x.csv"); }) == ErrorCode::IoError);
}
