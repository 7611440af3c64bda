#include "pdir/report.hpp"

#include <fstream>
#include <sstream>

namespace pdir {

const char* kNormalizationNote =
    "Real and p-adic direction measures are normalized to probability measures on "
    "their circles; predicted bin probabilities are products of the normalized "
    "measures.";

const char* kDecayExponentUpperBound = "1/28";

std::string rational_str(const mpq_class& q) {
    std::ostringstream os;
    if (q.get_den() == 1) {
        os << q.get_num();
    } else {
        os << q.get_num() << "/" << q.get_den();
    }
    return os.str();
}

nlohmann::ordered_json padic_to_json(const PAdicApprox& x) {
    nlohmann::ordered_json j;
    if (x.is_zero()) {
        j["val"] = nullptr; // infinite valuation
        j["unit"] = nullptr;
        j["prec"] = nullptr;
    } else {
        j["val"] = x.val_finite();
        j["unit"] = x.unit().get_str();
        j["prec"] = x.prec();
    }
    j["p"] = x.prime();
    return j;
}

namespace {

nlohmann::ordered_json config_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["p"] = cfg.p;
    j["radius"] = cfg.radius;
    j["radius_schedule"] = cfg.radius_schedule;
    j["real_sectors"] = cfg.real_sectors;
    j["padic_level"] = cfg.padic_level;
    j["precision"] = cfg.precision;
    j["t1"] = cfg.t1;
    j["t2"] = cfg.t2;
    j["psi"] = cfg.psi;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    return j;
}

nlohmann::ordered_json variants_json() {
    nlohmann::ordered_json v;
    v["diag_exponent"] = "growth (p^{2t})";
    v["unipotent_coset"] = "p^{-psi}";
    v["real_density"] = "quadratic (alpha d-alpha)";
    return v;
}

} // namespace

nlohmann::ordered_json report_to_json(const CountReport& rep, const std::string& kind) {
    nlohmann::ordered_json j;
    j["tool"] = "pdir";
    j["kind"] = kind;
    j["config"] = config_json(rep.config);
    j["normalization_note"] = kNormalizationNote;

    nlohmann::ordered_json totals;
    totals["vectors"] = rep.total;
    totals["in_chart"] = rep.in_chart;
    totals["off_chart"] = rep.off_chart;
    // the plus-half directions against the whole circle; the half/full
    // measure ratio predicts p/(p+1)
    totals["chart_fraction"] =
        rep.total ? static_cast<double>(rep.in_chart) / rep.total : 0.0;
    mpq_class predicted_chart = half_circle_measure(rep.config.p) / circle_measure(rep.config.p);
    predicted_chart.canonicalize();
    totals["predicted_chart_fraction"] = rational_str(predicted_chart);
    totals["boundary_ties"] = rep.boundary_ties;
    j["totals"] = totals;

    nlohmann::ordered_json bins = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < rep.bins.size(); ++i) {
        const BinStat& b = rep.bins[i];
        nlohmann::ordered_json row;
        row["id"] = i;
        row["sector"] = b.sector;
        row["arc"] = b.arc;
        row["count"] = b.count;
        row["empirical"] = b.empirical;
        row["predicted"] = rational_str(b.predicted);
        row["predicted_float"] = b.predicted.get_d();
        row["deviation"] = b.deviation;
        bins.push_back(row);
    }
    j["bins"] = bins;

    nlohmann::ordered_json dev;
    dev["max_rel"] = rep.max_rel_deviation;
    dev["mean_rel"] = rep.mean_rel_deviation;
    j["deviation"] = dev;

    nlohmann::ordered_json sched = nlohmann::ordered_json::array();
    for (const ScheduleRow& row : rep.schedule) {
        nlohmann::ordered_json r;
        r["radius"] = row.radius;
        r["total"] = row.total;
        r["max_rel_deviation"] = row.max_rel_deviation;
        r["max_abs_deviation"] = row.max_abs_deviation;
        sched.push_back(r);
    }
    j["schedule"] = sched;
    if (rep.fitted) j["fit_slope"] = rep.fit_slope;

    nlohmann::ordered_json per_t = nlohmann::ordered_json::array();
    for (const auto& [t, count] : rep.per_t_counts) {
        nlohmann::ordered_json r;
        r["t"] = t;
        r["count"] = count;
        per_t.push_back(r);
    }
    j["per_t_counts"] = per_t;

    nlohmann::ordered_json constants;
    constants["decay_exponent_upper_bound"] = kDecayExponentUpperBound;
    constants["asserted"] = false;
    j["constants"] = constants;
    j["measure_variants"] = variants_json();
    return j;
}

nlohmann::ordered_json arbitration_to_json(const ArbitrationReport& rep, std::int64_t p,
                                           double radius) {
    nlohmann::ordered_json j;
    j["tool"] = "pdir";
    j["kind"] = "measure-arbitrate";
    j["p"] = p;
    j["radius"] = radius;
    j["diag_exponent"] = nlohmann::ordered_json{
        {"growth_ratio", rep.growth_ratio},
        {"winner", rep.diag_exponent_growth_confirmed ? "growth (p^{2t})" : "unresolved"}};
    j["unipotent_coset"] = nlohmann::ordered_json{
        {"boxes_checked", rep.boxes_checked},
        {"matching_coset_measure", rep.boxes_matching_density},
        {"matching_complement", rep.boxes_matching_series},
        {"winner", rep.coset_measure_confirmed ? "p^{-psi}" : "unresolved"}};
    j["real_density"] = nlohmann::ordered_json{
        {"growth_ratio", rep.real_growth_ratio},
        {"winner", rep.real_quadratic_confirmed ? "quadratic (alpha d-alpha)" : "unresolved"}};
    return j;
}

nlohmann::ordered_json wr_verdicts_to_json(std::int64_t p,
                                           const std::vector<WRVerdict>& verdicts) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const WRVerdict& v : verdicts) {
        nlohmann::ordered_json row;
        row["p"] = p;
        row["arc"] = v.box.arc ? v.box.arc->str() : "full";
        row["t1"] = v.box.t1;
        row["t2"] = v.box.t2;
        row["psi"] = v.box.psi;
        row["alpha0"] = v.box.alpha0.get_str();
        row["eps_exponent"] = v.eps_exponent;
        row["in_regime"] = v.in_regime;
        row["plus_equal"] = v.plus_equal;
        row["minus_equal"] = v.minus_equal;
        row["classes_checked"] = v.classes_checked;
        row["products_checked"] = v.products_checked;
        if (v.witness) row["witness"] = v.witness->detail;
        arr.push_back(row);
    }
    return arr;
}

nlohmann::ordered_json measure_rows_to_json(std::int64_t p,
                                            const std::vector<MeasureRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const MeasureRow& r : rows) {
        nlohmann::ordered_json row;
        row["p"] = p;
        row["arc"] = r.box.arc ? r.box.arc->str() : "full";
        row["t1"] = r.box.t1;
        row["t2"] = r.box.t2;
        row["psi"] = r.box.psi;
        row["alpha0"] = r.box.alpha0.get_str();
        row["level"] = r.level;
        row["density_variant"] = rational_str(r.volumes.density_variant);
        row["series_variant"] = rational_str(r.volumes.series_variant);
        row["oracle"] = rational_str(r.oracle);
        bool density = r.oracle == r.volumes.density_variant;
        bool series = r.oracle == r.volumes.series_variant;
        row["winner"] = density ? (series ? "both" : "density") : (series ? "series" : "neither");
        arr.push_back(row);
    }
    return arr;
}

std::string report_to_csv(const CountReport& rep) {
    std::ostringstream os;
    os << "bin,count,empirical,predicted,deviation\n";
    char buf[64];
    for (std::size_t i = 0; i < rep.bins.size(); ++i) {
        const BinStat& b = rep.bins[i];
        os << "s" << b.sector << ":" << b.arc << "," << b.count << ",";
        std::snprintf(buf, sizeof(buf), "%.17g", b.empirical);
        os << buf << "," << rational_str(b.predicted) << ",";
        std::snprintf(buf, sizeof(buf), "%.17g", b.deviation);
        os << buf << "\n";
    }
    return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_file: cannot open " + path);
    out << contents;
    if (!out) throw std::runtime_error("write_file: write failed for " + path);
}

namespace {

bool type_matches(const nlohmann::json& doc, const std::string& type) {
    if (type == "object") return doc.is_object();
    if (type == "array") return doc.is_array();
    if (type == "string") return doc.is_string();
    if (type == "integer") return doc.is_number_integer();
    if (type == "number") return doc.is_number();
    if (type == "boolean") return doc.is_boolean();
    return false;
}

std::string validate_node(const nlohmann::json& doc, const nlohmann::json& schema,
                          const std::string& path) {
    if (schema.contains("type")) {
        std::string type = schema["type"].get<std::string>();
        if (!type_matches(doc, type))
            return path + ": expected " + type;
    }
    if (schema.contains("required")) {
        for (const auto& key : schema["required"]) {
            if (!doc.contains(key.get<std::string>()))
                return path + ": missing required key '" + key.get<std::string>() + "'";
        }
    }
    if (schema.contains("properties") && doc.is_object()) {
        for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it) {
            if (doc.contains(it.key())) {
                std::string err = validate_node(doc[it.key()], it.value(), path + "/" + it.key());
                if (!err.empty()) return err;
            }
        }
    }
    if (schema.contains("items") && doc.is_array()) {
        for (std::size_t i = 0; i < doc.size(); ++i) {
            std::string err =
                validate_node(doc[i], schema["items"], path + "[" + std::to_string(i) + "]");
            if (!err.empty()) return err;
        }
    }
    return "";
}

} // namespace

std::string validate_against_schema(const nlohmann::json& doc, const nlohmann::json& schema) {
    return validate_node(doc, schema, "$");
}

nlohmann::json report_schema() {
    static const char* text = R"JSON(
{
  "type": "object",
  "required": ["tool", "kind", "config", "normalization_note", "totals", "bins",
               "deviation", "constants", "measure_variants"],
  "properties": {
    "tool": {"type": "string"},
    "kind": {"type": "string"},
    "config": {
      "type": "object",
      "required": ["p", "radius", "real_sectors", "padic_level", "precision", "seed", "threads"],
      "properties": {
        "p": {"type": "integer"},
        "radius": {"type": "integer"},
        "real_sectors": {"type": "integer"},
        "padic_level": {"type": "integer"},
        "precision": {"type": "integer"},
        "seed": {"type": "integer"},
        "threads": {"type": "integer"}
      }
    },
    "normalization_note": {"type": "string"},
    "totals": {
      "type": "object",
      "required": ["vectors", "in_chart", "off_chart", "boundary_ties"],
      "properties": {
        "vectors": {"type": "integer"},
        "in_chart": {"type": "integer"},
        "off_chart": {"type": "integer"},
        "boundary_ties": {"type": "integer"}
      }
    },
    "bins": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["id", "sector", "arc", "count", "empirical", "predicted", "deviation"],
        "properties": {
          "id": {"type": "integer"},
          "sector": {"type": "integer"},
          "arc": {"type": "string"},
          "count": {"type": "integer"},
          "empirical": {"type": "number"},
          "predicted": {"type": "string"},
          "deviation": {"type": "number"}
        }
      }
    },
    "deviation": {
      "type": "object",
      "required": ["max_rel", "mean_rel"],
      "properties": {
        "max_rel": {"type": "number"},
        "mean_rel": {"type": "number"}
      }
    },
    "constants": {
      "type": "object",
      "required": ["decay_exponent_upper_bound", "asserted"],
      "properties": {
        "decay_exponent_upper_bound": {"type": "string"},
        "asserted": {"type": "boolean"}
      }
    },
    "measure_variants": {
      "type": "object",
      "required": ["diag_exponent", "unipotent_coset", "real_density"]
    }
  }
}
)JSON";
    return nlohmann::json::parse(text);
}

} // namespace pdir
