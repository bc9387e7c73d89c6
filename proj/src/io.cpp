#include "fcp/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fcp/error.hpp"

namespace fcp::io {

namespace {

[[noreturn]] void parse_error(const std::string& source, std::size_t line, const std::string& what) {
    throw Error(ErrorKind::Parse, source + ":" + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

bool parse_number(std::string_view text, double& out) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size() && !text.empty();
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return ec == std::errc() ? std::string(buffer, ptr) : std::string("nan");
}

CurveTable parse_curve_csv(std::istream& in, const std::string& source) {
    CurveTable table;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_number = 0;
    std::size_t width = 0;

    while (std::getline(in, line)) {
        ++line_number;
        const std::string_view view = trim(line);
        if (view.empty()) continue;
        const auto fields = split(view);

        if (rows.empty() && !table.grid_points && fields.front().starts_with("t=")) {
            std::vector<double> points;
            for (std::size_t c = 0; c < fields.size(); ++c) {
                double t = 0.0;
                if (!fields[c].starts_with("t=") || !parse_number(fields[c].substr(2), t)) {
                    parse_error(source, line_number, "bad grid header field " + std::to_string(c + 1) + " '" +
                                                         std::string(fields[c]) + "'");
                }
                points.push_back(t);
            }
            for (std::size_t c = 0; c < points.size(); ++c) {
                if (points[c] < 0.0 || points[c] > 1.0 || (c > 0 && !(points[c] > points[c - 1]))) {
                    parse_error(source, line_number, "grid header must be strictly increasing within [0,1]");
                }
            }
            width = points.size();
            table.grid_points = std::move(points);
            continue;
        }

        if (width == 0) width = fields.size();
        if (fields.size() != width) {
            parse_error(source, line_number,
                        "expected " + std::to_string(width) + " columns, found " + std::to_string(fields.size()));
        }
        std::vector<double> row(width);
        for (std::size_t c = 0; c < width; ++c) {
            if (!parse_number(fields[c], row[c]) || !std::isfinite(row[c])) {
                parse_error(source, line_number,
                            "column " + std::to_string(c + 1) + ": not a finite number '" + std::string(fields[c]) + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        parse_error(source, line_number, "no curve rows");
    }

    table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < width; ++c) {
            table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
        }
    }
    return table;
}

CurveTable read_curve_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Parse, "cannot open " + path.string());
    }
    return parse_curve_csv(in, path.string());
}

void write_curve_csv(std::ostream& out, const Matrix& values, const SampleGrid* header) {
    if (header) {
        for (std::size_t j = 0; j < header->size(); ++j) {
            out << (j ? "," : "") << "t=" << format_double(header->point(j));
        }
        out << '\n';
    }
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            out << (j ? "," : "") << format_double(values(i, j));
        }
        out << '\n';
    }
}

void write_curve_csv(const std::filesystem::path& path, const Matrix& values, const SampleGrid* header) {
    std::ostringstream out;
    write_curve_csv(out, values, header);
    write_text_file(path, out.str());
}

PairedFunctionalSample load_paired_sample(const std::filesystem::path& x_path, const std::filesystem::path& y_path) {
    CurveTable x = read_curve_csv(x_path);
    CurveTable y = read_curve_csv(y_path);
    if (x.values.rows() != y.values.rows() || x.values.cols() != y.values.cols()) {
        throw Error(ErrorKind::Parse, "shape mismatch: " + x_path.string() + " is " + std::to_string(x.values.rows()) +
                                          "x" + std::to_string(x.values.cols()) + ", " + y_path.string() + " is " +
                                          std::to_string(y.values.rows()) + "x" + std::to_string(y.values.cols()));
    }
    if (x.grid_points && y.grid_points && *x.grid_points != *y.grid_points) {
        throw Error(ErrorKind::Parse, "grid headers of " + x_path.string() + " and " + y_path.string() + " differ");
    }
    const auto& points = x.grid_points ? x.grid_points : y.grid_points;
    const std::size_t size = static_cast<std::size_t>(x.values.cols());
    GridPtr grid = points ? std::make_shared<const SampleGrid>(SampleGrid::from_points(*points))
                          : make_uniform_grid(size);
    return {std::move(grid), std::move(x.values), std::move(y.values)};
}

void write_cusum_csv(const std::filesystem::path& path, const CusumField& field) {
    write_curve_csv(path, field.values(), &field.grid());
}

Json to_json(const TestResult& result) {
    const auto& d = result.diagnostics;
    return Json{
        {"norm", std::string(to_string(result.norm))},
        {"statistic", result.statistic},
        {"critical_value", result.critical_value},
        {"p_value", result.p_value},
        {"reject", result.reject},
        {"significant", result.reject},
        {"change_index", result.change_index},
        {"change_fraction", result.change_fraction},
        {"change_percent", 100.0 * result.change_fraction},
        {"n", result.n},
        {"m_used", result.m_used},
        {"explained_fraction", result.explained_fraction},
        {"diagnostics",
         Json{{"bandwidth", d.bandwidth},
              {"max_lag", d.max_lag},
              {"window", std::string(to_string(d.window))},
              {"trace", d.trace},
              {"negative_eigenvalue_mass", d.negative_mass},
              {"truncation_target_reached", d.truncation_target_reached},
              {"top_eigenvalues", d.top_eigenvalues}}},
    };
}

Json to_json(const TestConfig& config) {
    Json out{
        {"norm", std::string(to_string(config.norm))},
        {"rho", config.rho},
        {"replications", config.replications},
        {"seed", config.seed},
        {"window", std::string(to_string(config.window))},
        {"truncation_fraction", config.truncation_fraction},
        {"z_resolution", config.z_resolution},
    };
    out["bandwidth"] = config.bandwidth ? Json(*config.bandwidth) : Json(nullptr);
    out["max_lag"] = config.max_lag ? Json(*config.max_lag) : Json(nullptr);
    return out;
}

Json to_json(const DgpConfig& config) {
    Json alternative{{"kind", config.alternative.label()}};
    if (config.alternative.kind == Alternative::Kind::Scaled) {
        alternative["delta"] = config.alternative.delta;
    }
    return Json{
        {"n", config.n},
        {"grid_size", config.grid_size},
        {"design", std::string(to_string(config.design))},
        {"alternative", alternative},
        {"change_fraction", config.change_fraction},
        {"basis_size", config.basis_size},
        {"ar_coef", config.ar_coef},
        {"sigma", config.sigma},
        {"iid_coef_sd", config.iid_coef_sd},
        {"burn_in", config.burn_in},
        {"seed", config.seed},
    };
}

Json to_json(const StudyCell& cell) {
    return Json{
        {"n", cell.n},
        {"setting", cell.alternative.setting()},
        {"alternative", cell.alternative.label()},
        {"design", std::string(to_string(cell.design))},
        {"rejection_rate_sup", cell.rejection_rate_sup},
        {"rejection_rate_l2", cell.rejection_rate_l2},
        {"replications", cell.replications},
        {"seed", cell.seed},
    };
}

Json eigensystem_to_json(const EigenSystem& eigs) {
    Json functions = Json::array();
    for (Eigen::Index l = 0; l < eigs.eigenfunctions.cols(); ++l) {
        const Vector column = eigs.eigenfunctions.col(l);
        functions.push_back(std::vector<double>(column.data(), column.data() + column.size()));
    }
    return Json{
        {"grid", eigs.grid->points()},
        {"eigenvalues", std::vector<double>(eigs.eigenvalues.data(), eigs.eigenvalues.data() + eigs.eigenvalues.size())},
        {"eigenfunctions", functions},
        {"trace", eigs.trace},
        {"negative_eigenvalue_mass", eigs.negative_mass},
        {"m", eigs.m},
        {"explained_fraction", eigs.explained_fraction},
    };
}

EigenSystem eigensystem_from_json(const Json& doc) {
    try {
        EigenSystem eigs;
        const auto points = doc.at("grid").get<std::vector<double>>();
        eigs.grid = std::make_shared<const SampleGrid>(SampleGrid::from_points(points));
        const auto values = doc.at("eigenvalues").get<std::vector<double>>();
        const auto functions = doc.at("eigenfunctions").get<std::vector<std::vector<double>>>();
        if (functions.size() != values.size()) {
            throw Error(ErrorKind::Parse, "eigensystem: eigenvalue and eigenfunction counts differ");
        }
        const auto size = static_cast<Eigen::Index>(points.size());
        eigs.eigenvalues = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
        eigs.eigenfunctions.resize(size, static_cast<Eigen::Index>(values.size()));
        for (std::size_t l = 0; l < functions.size(); ++l) {
            if (functions[l].size() != points.size()) {
                throw Error(ErrorKind::Parse, "eigensystem: eigenfunction " + std::to_string(l) + " has wrong length");
            }
            eigs.eigenfunctions.col(static_cast<Eigen::Index>(l)) = Eigen::Map<const Vector>(functions[l].data(), size);
        }
        for (std::size_t l = 0; l < values.size(); ++l) {
            if (!(values[l] >= 0.0) || (l > 0 && values[l] > values[l - 1])) {
                throw Error(ErrorKind::Parse, "eigensystem: eigenvalues must be nonnegative and descending");
            }
        }
        eigs.trace = doc.at("trace").get<double>();
        eigs.negative_mass = doc.value("negative_eigenvalue_mass", 0.0);
        eigs.m = doc.value("m", std::size_t{0});
        eigs.explained_fraction = doc.value("explained_fraction", 0.0);
        return eigs;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("eigensystem: ") + e.what());
    }
}

void write_study_csv(std::ostream& out, const std::vector<StudyCell>& cells) {
    out << "n,setting,design,norm,rate,replications\n";
    for (const auto& cell : cells) {
        const std::string prefix =
            std::to_string(cell.n) + "," + cell.alternative.setting() + "," + std::string(to_string(cell.design)) + ",";
        out << prefix << "l2," << format_double(cell.rejection_rate_l2) << "," << cell.replications << '\n';
        out << prefix << "sup," << format_double(cell.rejection_rate_sup) << "," << cell.replications << '\n';
    }
}

Json study_to_json(const std::vector<StudyCell>& cells) {
    Json rows = Json::array();
    for (const auto& cell : cells) {
        rows.push_back(to_json(cell));
    }
    return Json{{"cells", rows}};
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
    }
    out << contents;
    if (!out) {
        throw Error(ErrorKind::InvalidArgument, "write failed for " + path.string());
    }
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Parse, "cannot open " + path.string());
    }
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
}

}  // namespace fcp::io
