#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "nrgate/analysis.hpp"
#include "nrgate/model.hpp"
#include "nrgate/simulator.hpp"
#include "nrgate/sweep.hpp"

namespace nrgate {

/// Thrown for malformed or unknown-key documents.
class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const WaveguideConfig& cfg);
/// Every WaveguideConfig field must be present; unknown keys are rejected.
WaveguideConfig config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SweepSpec& spec);
/// Missing keys keep their defaults; unknown keys are rejected.
SweepSpec sweep_spec_from_json(const nlohmann::json& j, SweepSpec base = {});

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Columns tau,x0,z0,z1,z00,y0,e_input,e_down; the first line is a comment
/// carrying the config and direction.
void write_outcome_csv(std::ostream& os, const SimOutcome& out, const WaveguideConfig& cfg,
                       Direction dir);

void write_spectrum_csv(std::ostream& os, const Spectrum& s);

}  // namespace nrgate
