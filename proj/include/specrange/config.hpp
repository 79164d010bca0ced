#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specrange/jointbounds.hpp"
#include "specrange/scan.hpp"

namespace specrange {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw sample table referenced by region constraints; hulls are built per
/// constraint direction when the region is assembled.
struct EnvelopeTable {
  std::vector<std::pair<double, double>> samples;
  bool unbounded = false;
};

struct ConstraintConfig {
  enum class Type { Relation, Domination };
  Type type = Type::Relation;
  int target = 0;
  ScalarConstraint::Dir dir = ScalarConstraint::Dir::Le;  // relation only
  double offset = 0.0;                                    // relation only
  double gamma = 0.0;                                     // domination only
  std::vector<std::pair<int, std::string>> terms;         // axis, envelope id
};

struct RegionConfig {
  std::vector<Interval> axes;
  std::vector<ConstraintConfig> constraints;
};

struct TraceRay {
  Complex from;
  Complex to;
};

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  std::vector<double> values() const;
};

struct FamilyConfig {
  std::string slope;      // expression in w (the family parameter)
  std::string intercept;  // expression in w
  std::vector<GridSpec> s_ranges;
  GridSpec alpha;
};

struct EnvelopeJob {
  std::string table;  // envelope table id to hull and dump
  std::string kind = "upper";
  std::optional<FamilyConfig> family;
};

struct OracleJob {
  std::vector<std::string> matrix_files;
  int samples = 1000;
  std::vector<std::string> checks;  // containment | resolvent | joint_range
};

struct RunConfig {
  std::string mode;
  std::string base_dir;  // directory of the config file; input paths resolve here

  std::optional<ProblemSpec> problem;
  std::vector<std::string> problem_sources;  // g first, then f_j (printed form)

  std::optional<RegionConfig> region;
  std::map<std::string, EnvelopeTable> envelopes;

  std::optional<Window> window;
  std::vector<double> eps_levels;
  double tau = kWitnessTol;
  double endpoint_tol = kEndpointTol;
  std::uint64_t seed = 1;
  int threads = 1;
  bool skeleton_flag = false;

  std::string out_csv;
  std::string out_ppm;
  std::string out_table;
  std::string out_report = "report.txt";

  std::vector<TraceRay> rays;
  double trace_level = 0.0;
  std::optional<EnvelopeJob> envelope_job;
  std::optional<OracleJob> oracle_job;
  std::vector<Complex> pseudo_points;
};

RunConfig parse_config(const std::string& json_text);
RunConfig parse_config(const std::string& json_text, const std::string& base_dir);
RunConfig load_config(const std::string& path);

/// Canonical form: sorted keys, every float a %.17g decimal string.
/// parse_config(print_config(c)) reproduces c.
std::string print_config(const RunConfig& config);

/// Region with constraints resolved against the config's envelope tables.
Region build_region(const RunConfig& config);

/// Executes the configured mode, writing outputs under out_dir.
/// Returns 0 on success, 3 when numerical-failure flags were raised.
int run(const RunConfig& config, const std::string& out_dir);

}  // namespace specrange
