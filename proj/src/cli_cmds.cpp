#include "gig/cli_cmds.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "json.hpp"

#include "gig/calibration.hpp"
#include "gig/compose.hpp"
#include "gig/csv.hpp"
#include "gig/datasets.hpp"
#include "gig/log.hpp"
#include "gig/model_json.hpp"
#include "gig/rng.hpp"
#include "gig/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace gig {

namespace {

// maps exceptions onto the documented exit-code contract
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCapacityExceeded;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoOrSchemaError;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoOrSchemaError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoOrSchemaError;
  }
}

Dataset load_dataset(const std::string& path) { return dataset_from_csv(read_csv_file(path)); }

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_text_file(out_path, content);
}

}  // namespace

int cmd_gen_data(const GenDataJob& job) {
  return guarded([&] {
    GenSpec spec;
    spec.n_samples = job.n;
    spec.noise = job.noise;
    spec.seed = job.seed;
    Dataset d;
    if (job.kind == "moons")
      d = gen_moons(spec);
    else if (job.kind == "ovals")
      d = gen_ovals(spec);
    else
      throw SchemaError("unknown dataset kind: " + job.kind);
    if (job.nuisance_mix) d = add_nuisance(d, *job.nuisance_mix, job.seed + 1);
    write_csv_file(dataset_to_csv(d), job.out_path);
    GIG_INFO("wrote %zu rows to %s", d.n_rows(), job.out_path.c_str());
    return kOk;
  });
}

int cmd_train(const TrainJob& job) {
  return guarded([&] {
    Dataset data = load_dataset(job.data_path);
    TrainParams params;
    params.n_trees = job.n_trees;
    params.max_depth = job.max_depth;
    params.learning_rate = job.learning_rate;
    params.min_leaf = job.min_leaf;
    params.seed = job.seed;
    GbmModel model = train_gbm(data, params);

    CompositionGraph graph = single_ensemble_graph(model.ensemble, data.n_features());
    write_model_file(graph, job.out_model_path);

    if (!job.report_path.empty()) {
      json report{{"rounds", model.report.logloss.size()},
                  {"logloss", model.report.logloss},
                  {"accuracy", model.report.accuracy}};
      write_text_file(job.report_path, report.dump(2) + "\n");
    }
    GIG_INFO("trained %d trees, final logloss %.6f", job.n_trees,
             model.report.logloss.empty() ? 0.0 : model.report.logloss.back());
    return kOk;
  });
}

int cmd_fit_ecdf(const FitEcdfJob& job) {
  return guarded([&] {
    CsvTable table = read_csv_file(job.data_path);
    int col = table.column(job.column);
    if (col < 0) {
      try {
        col = std::stoi(job.column);
      } catch (...) {
        throw SchemaError("no column named " + job.column);
      }
    }
    if (col < 0 || col >= static_cast<int>(table.header.size()))
      throw SchemaError("column index out of range");
    std::vector<double> scores;
    scores.reserve(table.rows.size());
    for (const auto& row : table.rows) scores.push_back(parse_double(row[col]));
    EcdfFit fit = fit_ecdf(scores, job.knots);
    write_curve_file(fit.curve, job.out_path);
    GIG_INFO("fitted %zu-knot curve from %zu scores", fit.curve.xs.size(), scores.size());
    return kOk;
  });
}

int cmd_compose(const ComposeJob& job) {
  return guarded([&] {
    json spec = json::parse(read_text_file(job.spec_path));
    fs::path base = fs::path(job.spec_path).parent_path();
    auto resolve = [&](const std::string& p) {
      fs::path fp(p);
      return fp.is_absolute() ? fp.string() : (base / fp).string();
    };
    ComposePlan plan = compose_plan_from_json(
        spec, [&](const std::string& p) { return read_model_file(resolve(p)); },
        [&](const std::string& p) { return read_curve_file(resolve(p)); });
    CompositionGraph graph = build_composed_graph(plan);
    write_model_file(graph, job.out_path);
    GIG_INFO("composed %zu submodels into %s", plan.submodels.size(), job.out_path.c_str());
    return kOk;
  });
}

// ---------------- explain ----------------

namespace {

json attribution_to_json(const Attribution& a) {
  json crossings = json::array();
  for (const auto& [alpha, radix] : a.crossings_used)
    crossings.push_back(json{{"alpha", alpha}, {"radix", radix}});
  return json{{"total", a.total},
              {"zeta_sum", a.zeta_sum},
              {"iota_start", a.iota_start},
              {"iota_end", a.iota_end},
              {"integral", a.integral},
              {"crossings", crossings},
              {"efficiency_residual", a.efficiency_residual},
              {"f_s", a.f_s},
              {"f_e", a.f_e}};
}

void write_explain_plots(const std::string& dir, const Dataset& data,
                         const std::vector<int>& rows, const std::vector<const Attribution*>& atts,
                         const std::vector<std::string>& names) {
  fs::create_directories(dir);
  const int n_features = data.n_features();
  std::vector<std::vector<double>> credit_series(n_features);
  for (int f = 0; f < n_features; ++f) {
    std::vector<ScatterPoint> pts;
    for (size_t k = 0; k < rows.size(); ++k) {
      if (!atts[k]) continue;
      pts.push_back({data.rows[rows[k]][f], atts[k]->total[f], data.labels[rows[k]]});
      credit_series[f].push_back(atts[k]->total[f]);
    }
    std::string svg = scatter_svg(pts, "credit vs " + names[f], names[f], "credit");
    write_text_file(dir + "/scatter_" + names[f] + ".svg", svg);
  }
  write_text_file(dir + "/histograms.svg", histogram_panels_svg(credit_series, names));
}

}  // namespace

int cmd_explain(const ExplainJob& job) {
  return guarded([&] {
    CompositionGraph graph = read_model_file(job.model_path);
    Dataset data = load_dataset(job.data_path);
    if (data.n_features() != graph.n_features)
      throw SchemaError("dataset has " + std::to_string(data.n_features()) +
                        " features, model expects " + std::to_string(graph.n_features));

    FeatureVector baseline;
    if (job.baseline_row) {
      if (*job.baseline_row < 0 || *job.baseline_row >= static_cast<int>(data.n_rows()))
        throw SchemaError("baseline row out of range");
      baseline = data.rows[*job.baseline_row];
    } else {
      baseline = feature_medians(data);
    }

    std::vector<int> rows = job.rows;
    if (rows.empty()) {
      rows.resize(data.n_rows());
      std::iota(rows.begin(), rows.end(), 0);
    }
    for (int r : rows)
      if (r < 0 || r >= static_cast<int>(data.n_rows()))
        throw SchemaError("explain row out of range: " + std::to_string(r));

    std::vector<PathQuery> queries;
    queries.reserve(rows.size());
    for (int r : rows) queries.push_back(PathQuery{baseline, data.rows[r]});
    std::vector<BatchItem> batch = explain_batch(graph, queries, job.config, job.jobs);

    CsvTable out;
    out.header = {"row"};
    for (const auto& name : data.feature_names) out.header.push_back("credit_" + name);
    out.header.insert(out.header.end(), {"efficiency_residual", "f_s", "f_e"});

    json json_rows = json::array();
    bool any_row_error = false;
    bool any_capacity = false;
    bool tolerance_violated = false;
    std::vector<const Attribution*> att_ptrs;
    for (size_t k = 0; k < batch.size(); ++k) {
      const BatchItem& item = batch[k];
      if (!item.attribution) {
        any_row_error = true;
        if (item.error.find("radix") != std::string::npos) any_capacity = true;
        GIG_WARN("row %d failed: %s", rows[k], item.error.c_str());
        json_rows.push_back(json{{"row", rows[k]}, {"error", item.error}});
        att_ptrs.push_back(nullptr);
        continue;
      }
      const Attribution& a = *item.attribution;
      att_ptrs.push_back(&a);
      std::vector<std::string> fields{std::to_string(rows[k])};
      for (double c : a.total) fields.push_back(format_double(c));
      fields.push_back(format_double(a.efficiency_residual));
      fields.push_back(format_double(a.f_s));
      fields.push_back(format_double(a.f_e));
      out.rows.push_back(std::move(fields));

      json jr = attribution_to_json(a);
      jr["row"] = rows[k];
      json_rows.push_back(std::move(jr));
      if (std::abs(a.efficiency_residual) > job.config.efficiency_tol) {
        tolerance_violated = true;
        GIG_WARN("row %d residual %.3g above tolerance %.3g", rows[k], a.efficiency_residual,
                 job.config.efficiency_tol);
      }
    }
    write_csv_file(out, job.out_csv);
    if (!job.out_json.empty()) write_text_file(job.out_json, json_rows.dump(2) + "\n");
    if (!job.out_svg_dir.empty())
      write_explain_plots(job.out_svg_dir, data, rows, att_ptrs, data.feature_names);

    if (any_capacity) return static_cast<int>(kCapacityExceeded);
    if (any_row_error || tolerance_violated) return static_cast<int>(kToleranceViolation);
    return static_cast<int>(kOk);
  });
}

// ---------------- audit ----------------

int cmd_audit(const AuditJob& job) {
  return guarded([&] {
    CompositionGraph graph = read_model_file(job.model_path);
    Dataset data = load_dataset(job.data_path);
    if (data.n_features() != graph.n_features) throw SchemaError("dataset/model arity mismatch");
    if (data.n_rows() < 2) throw SchemaError("audit needs at least 2 rows");

    Rng rng(job.seed);
    Explainer ex(graph, job.config);

    double max_eff = 0.0, max_reflex = 0.0, max_const = 0.0, max_null = 0.0;
    double max_oracle_dev = 0.0;
    size_t corners_checked = 0;
    std::vector<double> max_abs_credit(graph.n_features, 0.0);

    for (int p = 0; p < job.n_paths; ++p) {
      size_t i = rng.below(data.n_rows());
      size_t j = rng.below(data.n_rows());
      if (i == j) j = (j + 1) % data.n_rows();
      PathQuery q{data.rows[i], data.rows[j]};
      AxiomReport rep = axiom_audit(graph, q, job.config);
      max_eff = std::max(max_eff, rep.efficiency_residual);
      max_reflex = std::max(max_reflex, rep.reflexivity_dev);
      max_const = std::max(max_const, rep.constant_var_dev);
      max_null = std::max(max_null, rep.null_var_dev);

      Attribution att = ex.explain(q);
      for (int f = 0; f < graph.n_features; ++f)
        max_abs_credit[f] = std::max(max_abs_credit[f], std::abs(att.total[f]));

      // corner oracle at every crossing of this path
      auto crossings = enumerate_crossings(ex.boundaries(), q);
      double delta = job.config.delta_override.value_or(safe_step(ex.boundaries(), crossings, q));
      for (const Crossing& c : crossings) {
        CornerContext ctx;
        ctx.graph = &graph;
        ctx.crossing = c;
        ctx.delta = delta;
        for (int f : c.features) ctx.travel_signs.push_back(q.e[f] > q.s[f] ? 1 : -1);
        CornerVector z = zeta(ctx);
        CornerVector oracle = shapley_lift_oracle(ctx);
        for (size_t k = 0; k < z.values.size(); ++k) {
          double dev = std::abs(rat_to_double(z.values[k] - oracle.values[k]));
          max_oracle_dev = std::max(max_oracle_dev, dev);
        }
        ++corners_checked;
      }
    }

    json report{{"paths", job.n_paths},
                {"efficiency_max", max_eff},
                {"reflexivity_max", max_reflex},
                {"constant_var_max", max_const},
                {"null_var_max", max_null},
                {"corner_oracle_max", max_oracle_dev},
                {"corners_checked", corners_checked},
                {"max_abs_credit", max_abs_credit},
                {"efficiency_tol", job.config.efficiency_tol}};
    emit(job.out_path, report.dump(2) + "\n");
    return max_eff > job.config.efficiency_tol ? static_cast<int>(kToleranceViolation)
                                               : static_cast<int>(kOk);
  });
}

// ---------------- lift demo ----------------

int cmd_lift_demo(const LiftDemoJob& job) {
  return guarded([&] {
    if (job.n_players < 1 || job.n_players > kMaxRadix)
      throw SchemaError("n_players must be in [1, " + std::to_string(kMaxRadix) + "]");
    Rational fx = rat_from_double(job.fx);
    int n = job.n_players;

    auto print_phi = [&](const char* name, const std::vector<Rational>& phi) {
      std::cout << name << ":\n";
      for (int i = 0; i < n; ++i)
        std::cout << "  player " << (i + 1) << ": " << phi[i].get_str() << " = "
                  << format_double(rat_to_double(phi[i])) << "\n";
    };

    std::cout << "f(x) = " << format_double(job.fx) << ", N = " << n << "\n\n";
    print_phi("empty-set lift (Shapley)", shapley(empty_set_lift(fx, n)));
    print_phi("grand-coalition lift (Shapley)", shapley(grand_lift(fx, n)));

    HalfWeightDemo hw = half_weight_demo_values(fx, n);
    std::cout << "half-weight lift (demonstration values):\n";
    for (int i = 0; i < n; ++i)
      std::cout << "  player " << (i + 1) << ": " << hw.per_player[i].get_str() << " = "
                << format_double(rat_to_double(hw.per_player[i])) << "\n";
    std::cout << "  remainder term: " << hw.correction.get_str() << "\n";
    std::cout << "the half-weight numbers differ from f(x)/N, so the lift choice"
                 " changes the answer\n";
    return kOk;
  });
}

// ---------------- boundaries ----------------

int cmd_boundaries(const BoundariesJob& job) {
  return guarded([&] {
    CompositionGraph graph = read_model_file(job.model_path);
    BoundaryTable table = extract_boundaries(graph);
    json features = json::array();
    for (int f = 0; f < graph.n_features; ++f)
      features.push_back(json{{"feature", f}, {"thresholds", table.thresholds[f]}});
    json out{{"n_features", graph.n_features}, {"features", features}};
    emit(job.out_path, out.dump(2) + "\n");
    return kOk;
  });
}

// ---------------- plot ----------------

int cmd_plot(const PlotJob& job) {
  return guarded([&] {
    CsvTable att = read_csv_file(job.attributions_csv);
    Dataset data = load_dataset(job.data_path);
    if (att.rows.empty()) throw SchemaError("attribution CSV has no rows");
    int row_col = att.column("row");
    if (row_col < 0) throw SchemaError("attribution CSV lacks a 'row' column");

    std::vector<int> feat_cols;
    std::vector<std::string> names;
    for (size_t c = 0; c < att.header.size(); ++c)
      if (att.header[c].rfind("credit_", 0) == 0) {
        feat_cols.push_back(static_cast<int>(c));
        names.push_back(att.header[c].substr(7));
      }
    if (names.size() != static_cast<size_t>(data.n_features()))
      throw SchemaError("attribution CSV and dataset disagree on features");

    fs::create_directories(job.out_dir);
    std::vector<std::vector<double>> credit_series(names.size());
    for (size_t f = 0; f < names.size(); ++f) {
      std::vector<ScatterPoint> pts;
      for (const auto& row : att.rows) {
        int r = static_cast<int>(parse_double(row[row_col]));
        if (r < 0 || r >= static_cast<int>(data.n_rows()))
          throw SchemaError("attribution row index out of dataset range");
        double credit = parse_double(row[feat_cols[f]]);
        pts.push_back({data.rows[r][f], credit, data.labels[r]});
        credit_series[f].push_back(credit);
      }
      write_text_file(job.out_dir + "/scatter_" + names[f] + ".svg",
                      scatter_svg(pts, "credit vs " + names[f], names[f], "credit"));
    }
    write_text_file(job.out_dir + "/histograms.svg",
                    histogram_panels_svg(credit_series, names));
    return kOk;
  });
}

}  // namespace gig
