#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pdir/count.hpp"
#include "pdir/haar.hpp"
#include "pdir/wellround.hpp"

namespace pdir {

/// Rational printed exactly as "num/den" (or "n" when integral).
std::string rational_str(const mpq_class& q);

/// Truncated p-adic value as {val, unit, prec, p}; zero marked explicitly.
nlohmann::ordered_json padic_to_json(const PAdicApprox& x);

/// The measure-normalization reading recorded in every report.
extern const char* kNormalizationNote;

/// Documented convergence-rate exponent from the spectral-gap bound;
/// reported in output, never asserted at desk scale.
extern const char* kDecayExponentUpperBound;

nlohmann::ordered_json report_to_json(const CountReport& rep, const std::string& kind);
nlohmann::ordered_json arbitration_to_json(const ArbitrationReport& rep, std::int64_t p,
                                           double radius);
nlohmann::ordered_json wr_verdicts_to_json(std::int64_t p,
                                           const std::vector<WRVerdict>& verdicts);

/// One exact measure comparison: box data, both formula values, the
/// finite-level oracle value, and which formula it confirms.
struct MeasureRow {
    BruhatBox box;
    int level;
    VolumePair volumes;
    mpq_class oracle;
};

nlohmann::ordered_json measure_rows_to_json(std::int64_t p,
                                            const std::vector<MeasureRow>& rows);

/// One row per bin: bin id, count, empirical, predicted, deviation.
std::string report_to_csv(const CountReport& rep);

void write_file(const std::string& path, const std::string& contents);

/**
 * Minimal structural validator for the shipped schema subset: "type",
 * "properties", "required", "items". Returns an empty string on success,
 * otherwise the first violation.
 */
std::string validate_against_schema(const nlohmann::json& doc, const nlohmann::json& schema);

/// The schema shipped with the tool (embedded copy of schema/report.schema.json).
nlohmann::json report_schema();

} // namespace pdir
