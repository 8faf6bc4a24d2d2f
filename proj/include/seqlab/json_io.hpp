#ifndef SEQLAB_JSON_IO_HPP
#define SEQLAB_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "seqlab/sequence.hpp"
#include "seqlab/window.hpp"

namespace seqlab {

// Wire format: all integers and rationals travel as decimal strings
// (rationals as "p/q") so the pipeline stays exact end to end. Small
// structural integers (dilation factor, shift power, ratio, start) are also
// accepted as JSON numbers and emitted as numbers when they fit.

nlohmann::json seq_to_json(const SeqPtr& seq);
nlohmann::json op_to_json(const OpPtr& op);

/// Parses a sequence description; throws SchemaError naming the offending
/// field on malformed input.
SeqPtr seq_from_json(const nlohmann::json& j);
OpPtr op_from_json(const nlohmann::json& j);

nlohmann::json to_json(const WindowStats& stats);
nlohmann::json to_json(const BoundsEnclosure& enclosure);
nlohmann::json to_json(const LorentzReport& report);
nlohmann::json to_json(const ZetaValue& value);

inline constexpr const char* kCsvHeader = "# seqlab-csv v1";

/// CSV table (n, supAvg, infAvg, D) for an enclosure, one row per window
/// length, prefixed by the version header comment.
std::string enclosure_csv(const BoundsEnclosure& enclosure);
std::string lorentz_csv(const LorentzReport& report);

}  // namespace seqlab

#endif  // SEQLAB_JSON_IO_HPP
