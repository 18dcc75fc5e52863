#include "treepark/harness.hpp"

#include "treepark/io.hpp"

namespace treepark {

nlohmann::json EstimateReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["estimate"] = estimate;
  j["std_error"] = std_error;
  j["replicates"] = replicates;
  if (reference) {
    j["reference"] = *reference;
    j["reference_se"] = reference_se;
  } else if (reference_diverged) {
    j["reference"] = "infinity";
  }
  if (z) j["z"] = *z;
  j["censored"] = censored;
  if (!note.empty()) j["note"] = note;
  return j;
}

bool EstimateReport::in_band(double band) const {
  return !z || std::abs(*z) <= band;
}

void write_experiment_outputs(const RunOptions& opts, const std::string& name,
                              const nlohmann::json& summary,
                              const std::vector<std::string>& csv_header,
                              const std::string& csv_body) {
  if (!opts.out_dir) return;
  write_json_file(*opts.out_dir / (name + ".json"), summary);
  if (!csv_header.empty()) {
    CsvWriter csv(*opts.out_dir / (name + ".csv"), csv_header);
    csv.raw(csv_body);
    csv.close();
  }
}

}  // namespace treepark
