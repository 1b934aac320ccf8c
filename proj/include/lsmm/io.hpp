#pragma once

#include <string>
#include <vector>

#include "lsmm/analysis.hpp"
#include "lsmm/generator.hpp"
#include "lsmm/types.hpp"

namespace lsmm {

// All floating-point output is rendered with 17 significant digits so files
// round-trip bit-exactly through parse/serialize cycles.
std::string format_double(double v);

struct SpecReadResult {
    InterpolationSpec spec;
    std::size_t completed_conjugates = 0;  // points added to close the spec
};

StateSpace parse_model(const std::string& text);
StateSpace read_model(const std::string& path);
std::string serialize_model(const Matrix& A, const Vector& B, const RowVector& C);
inline std::string serialize_model(const StateSpace& sys) {
    return serialize_model(sys.A, sys.B, sys.C);
}
inline std::string serialize_model(const ReducedModel& model) {
    return serialize_model(model.F, model.G, model.H);
}
void write_model(const std::string& path, const StateSpace& sys);
void write_model(const std::string& path, const ReducedModel& model);

SpecReadResult parse_spec(const std::string& text);
SpecReadResult read_spec(const std::string& path);
std::string serialize_spec(const InterpolationSpec& spec);

void write_frequency_csv(const std::string& path, const FrequencyResponse& response);
void write_relative_error_csv(const std::string& path, const RelativeErrorResponse& response);
void write_timeseries_csv(const std::string& path, const SimulationResult& sim);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace lsmm
