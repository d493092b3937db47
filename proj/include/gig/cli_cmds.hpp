#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gig/engine.hpp"

namespace gig {

// Exit-code contract shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kToleranceViolation = 1,
  kIoOrSchemaError = 2,
  kCapacityExceeded = 3,
};

struct GenDataJob {
  std::string kind;  // moons | ovals
  size_t n = 1000;
  double noise = 0.0;
  uint64_t seed = 0;
  std::optional<double> nuisance_mix;
  std::string out_path;
};
int cmd_gen_data(const GenDataJob& job);

struct TrainJob {
  std::string data_path;
  std::string out_model_path;
  std::string report_path;  // optional JSON sidecar
  int n_trees = 25;
  int max_depth = 6;
  double learning_rate = 0.1;
  int min_leaf = 2;
  uint64_t seed = 0;
};
int cmd_train(const TrainJob& job);

struct FitEcdfJob {
  std::string data_path;
  std::string column;  // name or numeric index
  int knots = 64;
  std::string out_path;
};
int cmd_fit_ecdf(const FitEcdfJob& job);

struct ComposeJob {
  std::string spec_path;
  std::string out_path;
};
int cmd_compose(const ComposeJob& job);

struct ExplainJob {
  std::string model_path;
  std::string data_path;
  std::optional<int> baseline_row;  // default: feature-wise median baseline
  std::vector<int> rows;            // empty = all rows
  std::string out_csv;
  std::string out_json;  // optional
  std::string out_svg_dir;  // optional scatter/histogram plots
  EngineConfig config;
  int jobs = 1;
};
int cmd_explain(const ExplainJob& job);

struct AuditJob {
  std::string model_path;
  std::string data_path;
  int n_paths = 20;
  uint64_t seed = 0;
  std::string out_path;  // report JSON; empty = stdout
  EngineConfig config;
};
int cmd_audit(const AuditJob& job);

struct LiftDemoJob {
  double fx = 1.0;
  int n_players = 3;
};
int cmd_lift_demo(const LiftDemoJob& job);

struct BoundariesJob {
  std::string model_path;
  std::string out_path;  // empty = stdout
};
int cmd_boundaries(const BoundariesJob& job);

struct PlotJob {
  std::string attributions_csv;
  std::string data_path;
  std::string out_dir;
};
int cmd_plot(const PlotJob& job);

}  // namespace gig
