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
#include "prefinfer/error.hpp"

namespace prefinfer {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::NonFiniteScore: return "NonFiniteScore";
        case ErrorCode::DuplicateKey: return "DuplicateKey";
        case ErrorCode::UnknownCandidate: return "UnknownCandidate";
        case ErrorCode::NegativeCount: return "NegativeCount";
        case ErrorCode::PartyConflict: return "PartyConflict";
        case ErrorCode::DegenerateRing: return "DegenerateRing";
        case ErrorCode::MissingCenter: return "MissingCenter";
        case ErrorCode::UnsupportedMoment: return "UnsupportedMoment";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::InvalidSimplex: return "InvalidSimplex";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::NonFiniteInit: return "NonFiniteInit";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::EmptyDistrict: return "EmptyDistrict";
        case ErrorCode::EmptyScope: return "EmptyScope";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::NegativeRadicand: return "NegativeRadicand";
        case ErrorCode::TooFewPoints: return "TooFewPoints";
        case ErrorCode::UnassignedPrecinct: return "UnassignedPrecinct";
        case ErrorCode::EmptySurvey: return "EmptySurvey";
        case ErrorCode::DegenerateFold: return "DegenerateFold";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::KMismatch: return "KMismatch";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::MissingArtifact: return "MissingArtifact";
    }
    return "Unknown";
}

}  // namespace prefinfer
