#include "lsmm/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lsmm {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DimensionMismatch("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DimensionMismatch("cannot open file for writing: " + path);
    out << content;
}

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw DimensionMismatch("input is not valid JSON");
    return j;
}

double as_number(const json& j, const char* what) {
    if (!j.is_number()) throw DimensionMismatch(std::string(what) + " must be a number");
    return j.get<double>();
}

void append_row(std::string& out, const RowVector& row) {
    out += "[";
    for (Eigen::Index i = 0; i < row.size(); ++i) {
        if (i) out += ", ";
        out += format_double(row(i));
    }
    out += "]";
}

}  // namespace

StateSpace parse_model(const std::string& text) {
    json j = parse_json(text);
    if (!j.is_object() || !j.contains("A") || !j.contains("B") || !j.contains("C"))
        throw DimensionMismatch("model JSON must contain A, B and C");
    const json& ja = j["A"];
    if (!ja.is_array() || ja.empty()) throw DimensionMismatch("A must be a non-empty 2-D array");
    const auto n = static_cast<Eigen::Index>(ja.size());

    StateSpace sys;
    sys.A.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const json& row = ja[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            throw DimensionMismatch("A must be square");
        for (Eigen::Index c = 0; c < n; ++c)
            sys.A(r, c) = as_number(row[static_cast<std::size_t>(c)], "A entry");
    }
    const json& jb = j["B"];
    const json& jc = j["C"];
    if (!jb.is_array() || static_cast<Eigen::Index>(jb.size()) != n)
        throw DimensionMismatch("B must be a flat array of length n");
    if (!jc.is_array() || static_cast<Eigen::Index>(jc.size()) != n)
        throw DimensionMismatch("C must be a flat array of length n");
    sys.B.resize(n);
    sys.C.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        sys.B(i) = as_number(jb[static_cast<std::size_t>(i)], "B entry");
        sys.C(i) = as_number(jc[static_cast<std::size_t>(i)], "C entry");
    }
    sys.validate();
    return sys;
}

StateSpace read_model(const std::string& path) { return parse_model(read_text_file(path)); }

std::string serialize_model(const Matrix& A, const Vector& B, const RowVector& C) {
    std::string out = "{\n  \"A\": [";
    for (Eigen::Index r = 0; r < A.rows(); ++r) {
        if (r) out += ", ";
        append_row(out, A.row(r));
    }
    out += "],\n  \"B\": ";
    append_row(out, B.transpose());
    out += ",\n  \"C\": ";
    append_row(out, C);
    out += "\n}\n";
    return out;
}

void write_model(const std::string& path, const StateSpace& sys) {
    write_text_file(path, serialize_model(sys));
}

void write_model(const std::string& path, const ReducedModel& model) {
    write_text_file(path, serialize_model(model));
}

SpecReadResult parse_spec(const std::string& text) {
    json j = parse_json(text);
    if (!j.is_object() || !j.contains("points") || !j["points"].is_array() || j["points"].empty())
        throw DimensionMismatch("spec JSON must contain a non-empty points array");

    SpecReadResult out;
    for (const json& jp : j["points"]) {
        if (!jp.is_object() || !jp.contains("re") || !jp.contains("im"))
            throw DimensionMismatch("each point needs re and im fields");
        SpecPoint p;
        p.s = Complex(as_number(jp["re"], "re"), as_number(jp["im"], "im"));
        p.order = 0;
        if (jp.contains("order")) {
            double k = as_number(jp["order"], "order");
            if (k < 0 || k != std::floor(k))
                throw DimensionMismatch("order must be a non-negative integer");
            p.order = static_cast<int>(k);
        }
        out.spec.points.push_back(p);
    }

    // Close the spec under conjugation when callers list only one half of a pair.
    std::vector<SpecPoint>& pts = out.spec.points;
    const std::size_t given = pts.size();
    for (std::size_t i = 0; i < given; ++i) {
        if (std::abs(pts[i].s.imag()) <= 0.5 * kDuplicateTol) continue;
        bool matched = false;
        for (std::size_t k = 0; k < pts.size(); ++k)
            if (k != i && std::abs(pts[k].s - std::conj(pts[i].s)) <= kDuplicateTol) matched = true;
        if (!matched) {
            pts.push_back(SpecPoint{std::conj(pts[i].s), pts[i].order});
            ++out.completed_conjugates;
        }
    }
    out.spec.validate();
    return out;
}

SpecReadResult read_spec(const std::string& path) { return parse_spec(read_text_file(path)); }

std::string serialize_spec(const InterpolationSpec& spec) {
    std::string out = "{\n  \"points\": [\n";
    for (std::size_t i = 0; i < spec.points.size(); ++i) {
        const SpecPoint& p = spec.points[i];
        out += "    {\"re\": " + format_double(p.s.real()) + ", \"im\": " + format_double(p.s.imag()) +
               ", \"order\": " + std::to_string(p.order) + "}";
        if (i + 1 < spec.points.size()) out += ",";
        out += "\n";
    }
    out += "  ]\n}\n";
    return out;
}

void write_frequency_csv(const std::string& path, const FrequencyResponse& response) {
    std::string out = "omega,re,im,abs\n";
    for (std::size_t k = 0; k < response.grid.size(); ++k) {
        const Complex& v = response.values[k];
        out += format_double(response.grid[k]) + "," + format_double(v.real()) + "," +
               format_double(v.imag()) + "," + format_double(std::abs(v)) + "\n";
    }
    write_text_file(path, out);
}

void write_relative_error_csv(const std::string& path, const RelativeErrorResponse& response) {
    std::string out = "omega,rel_error\n";
    for (std::size_t k = 0; k < response.response.grid.size(); ++k)
        out += format_double(response.response.grid[k]) + "," +
               format_double(response.response.values[k].real()) + "\n";
    write_text_file(path, out);
}

void write_timeseries_csv(const std::string& path, const SimulationResult& sim) {
    std::string out = "t,e,e_ss_pred\n";
    for (std::size_t k = 0; k < sim.t.size(); ++k)
        out += format_double(sim.t[k]) + "," + format_double(sim.e(static_cast<Eigen::Index>(k))) +
               "," + format_double(sim.e_ss_pred(static_cast<Eigen::Index>(k))) + "\n";
    write_text_file(path, out);
}

}  // namespace lsmm
