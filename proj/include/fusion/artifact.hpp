#pragma once

#include "fusion/calibration.hpp"
#include "fusion/models.hpp"
#include "fusion/targets.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace fusion {

enum class ArtifactKind { static_model, dynamic_model };

std::string to_string(ArtifactKind k);

// Everything needed to score from one file: coefficients with their
// diagnostics, frozen scalers, EWMA config, interpolation k, delta shifts,
// rating scale, and training metadata.
struct ModelArtifact {
    static constexpr int kSchemaVersion = 1;

    ArtifactKind kind = ArtifactKind::static_model;
    FittedModel model;
    InterpolationConfig interpolation;
    DeltaShifts shifts;
    RatingScale scale;

    struct TrainingMeta {
        size_t n_obs = 0;
        Date date_start;
        Date date_end;
        std::string panel_hash;
        std::string base_artifact_hash; // dynamic artifacts: hash of the static file
    } training;
};

void validate_artifact(const ModelArtifact& artifact);

nlohmann::json artifact_to_json(const ModelArtifact& artifact);
ModelArtifact artifact_from_json(const nlohmann::json& j);

void save_artifact(const ModelArtifact& artifact, const std::string& path);
ModelArtifact load_artifact(const std::string& path);

// Human-readable coefficient table matching the reporting layout
// (variable, coefficient, std. error, z/t-value, p-value + fit statistics).
std::string coefficient_table(const FittedModel& model);

} // namespace fusion
