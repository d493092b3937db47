#pragma once

#include <string>

#include "json.hpp"

#include "gig/model.hpp"

namespace gig {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Model file schema (docs/model-format.md), version 1.
nlohmann::json model_to_json(const CompositionGraph& g);
CompositionGraph model_from_json(const nlohmann::json& j);

void write_model_file(const CompositionGraph& g, const std::string& path);
CompositionGraph read_model_file(const std::string& path);

nlohmann::json curve_to_json(const PiecewiseLinearCurve& c);
PiecewiseLinearCurve curve_from_json(const nlohmann::json& j);
void write_curve_file(const PiecewiseLinearCurve& c, const std::string& path);
PiecewiseLinearCurve read_curve_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace gig
