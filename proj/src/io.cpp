#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include "funclearn/errors.hpp"
#include "funclearn/experiment.hpp"

namespace funclearn {

namespace {

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string sanitize(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<int> parse_int_list(const std::string& value, const std::string& key) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw ConfigError("bad integer '" + item + "' in key " + key);
        }
    }
    return out;
}

double parse_double(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad number '" + value + "' for key " + key);
    }
}

int parse_int(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad integer '" + value + "' for key " + key);
    }
}

} // namespace

static const char* kResultHeader =
    "scenario,method,sample_size,machines,repetition,estimation_error,prediction_error,iterations,"
    "converged,wall_time_seconds,error";

void write_csv(const std::vector<ResultRow>& rows, const std::string& path, const CsvOptions& options) {
    std::ofstream out(path);
    if (!out) throw IoError("write_csv: cannot open " + path);
    out << kResultHeader << "\n";
    for (const ResultRow& r : rows) {
        out << r.scenario << ',' << r.method << ',' << r.sample_size << ',' << r.machines << ','
            << r.repetition << ',';
        if (r.failed()) {
            out << ",,0,0,0," << sanitize(r.error);
        } else {
            const double t = options.zero_wall_time ? 0.0 : r.wall_time_seconds;
            out << fmt6(r.estimation_error) << ',' << fmt6(r.prediction_error) << ',' << r.iterations << ','
                << (r.converged ? 1 : 0) << ',' << fmt6(t) << ',';
        }
        out << "\n";
    }
    if (!out) throw IoError("write_csv: write failed for " + path);
}

void write_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_csv: cannot open " + path);
    out << "scenario,method,sample_size,machines,count,failed,estimation_error_mean,estimation_error_std,"
           "prediction_error_mean,prediction_error_std,wall_time_mean,wall_time_std,iterations_mean\n";
    for (const SummaryRow& s : rows) {
        out << s.scenario << ',' << s.method << ',' << s.sample_size << ',' << s.machines << ',' << s.count
            << ',' << s.failed << ',' << fmt6(s.estimation_error_mean) << ',' << fmt6(s.estimation_error_std)
            << ',' << fmt6(s.prediction_error_mean) << ',' << fmt6(s.prediction_error_std) << ','
            << fmt6(s.wall_time_mean) << ',' << fmt6(s.wall_time_std) << ',' << fmt6(s.iterations_mean)
            << "\n";
    }
    if (!out) throw IoError("write_csv: write failed for " + path);
}

std::vector<ResultRow> read_result_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_result_csv: cannot open " + path);

    std::string line;
    if (!std::getline(in, line) || trim(line) != kResultHeader) {
        throw IoError("read_result_csv: unexpected header in " + path);
    }

    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 11) {
            throw IoError("read_result_csv: expected 11 fields, got " +
                                     std::to_string(f.size()) + " in " + path);
        }
        ResultRow r;
        r.scenario = f[0];
        r.method = f[1];
        r.sample_size = parse_int(f[2], "sample_size");
        r.machines = parse_int(f[3], "machines");
        r.repetition = parse_int(f[4], "repetition");
        r.error = f[10];
        if (r.failed()) {
            r.estimation_error = std::numeric_limits<double>::quiet_NaN();
            r.prediction_error = std::numeric_limits<double>::quiet_NaN();
        } else {
            r.estimation_error = parse_double(f[5], "estimation_error");
            r.prediction_error = parse_double(f[6], "prediction_error");
            r.iterations = parse_int(f[7], "iterations");
            r.converged = parse_int(f[8], "converged") != 0;
            r.wall_time_seconds = parse_double(f[9], "wall_time_seconds");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

ExperimentSpec parse_spec(std::istream& in) {
    ExperimentSpec spec;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value, got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "scenario") {
            spec.scenario = scenario_from_string(value);
        } else if (key == "method") {
            spec.method = method_from_string(value);
        } else if (key == "sample_sizes") {
            spec.sample_sizes = parse_int_list(value, key);
        } else if (key == "machine_counts") {
            spec.machine_counts = parse_int_list(value, key);
        } else if (key == "repetitions") {
            spec.repetitions = parse_int(value, key);
        } else if (key == "master_seed") {
            try {
                spec.master_seed = std::stoull(value);
            } catch (const std::exception&) {
                throw ConfigError("bad integer '" + value + "' for key master_seed");
            }
        } else if (key == "sigma") {
            spec.sigma = parse_double(value, key);
        } else if (key == "unlabeled_multiplier") {
            spec.unlabeled_multiplier = parse_double(value, key);
        } else if (key == "test_size") {
            spec.test_size = parse_int(value, key);
        } else if (key == "grid_size") {
            spec.grid_size = parse_int(value, key);
        } else if (key == "gamma0") {
            if (value == "auto")
                spec.fit.gamma0.reset();
            else
                spec.fit.gamma0 = parse_double(value, key);
        } else if (key == "mu") {
            spec.fit.mu = parse_double(value, key);
        } else if (key == "tol") {
            spec.fit.tol = parse_double(value, key);
        } else if (key == "tol_ref_size") {
            spec.fit.tol_ref_size = parse_double(value, key);
        } else if (key == "max_iter") {
            spec.fit.max_iter = parse_int(value, key);
        } else if (key == "fixed_iterations") {
            const int v = parse_int(value, key);
            if (v == 0)
                spec.fit.fixed_iterations.reset();
            else
                spec.fit.fixed_iterations = v;
        } else if (key == "fixed_iteration_exponent") {
            spec.fixed_iteration_exponent = parse_double(value, key);
        } else if (key == "lambda") {
            spec.ridge.lambda = parse_double(value, key);
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    return spec;
}

ExperimentSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse_spec(in);
}

namespace {

struct SeriesKey {
    std::string method;
    int machines;

    bool operator<(const SeriesKey& o) const {
        return std::tie(method, machines) < std::tie(o.method, o.machines);
    }
};

double log_floor(double v) { return std::pow(10.0, std::floor(std::log10(v))); }

} // namespace

void write_svg(const std::vector<SummaryRow>& rows, const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("write_svg: no rows");

    std::map<SeriesKey, std::vector<const SummaryRow*>> series;
    double x_min = 1e300, x_max = 0, y_min = 1e300, y_max = 0;
    for (const SummaryRow& s : rows) {
        if (!(s.prediction_error_mean > 0.0) || !std::isfinite(s.prediction_error_mean)) continue;
        series[{s.method, s.machines}].push_back(&s);
        x_min = std::min(x_min, static_cast<double>(s.sample_size));
        x_max = std::max(x_max, static_cast<double>(s.sample_size));
        const double lo = std::max(s.prediction_error_mean - s.prediction_error_std,
                                   s.prediction_error_mean * 0.1);
        y_min = std::min(y_min, lo);
        y_max = std::max(y_max, s.prediction_error_mean + s.prediction_error_std);
    }
    if (series.empty()) throw std::invalid_argument("write_svg: no positive prediction errors to plot");
    if (x_min == x_max) x_max = x_min * 2;
    y_min = log_floor(y_min);
    y_max = std::pow(10.0, std::ceil(std::log10(y_max)));

    const double width = 720, height = 520;
    const double left = 80, right = 170, top = 30, bottom = 60;
    const double plot_w = width - left - right, plot_h = height - top - bottom;
    auto sx = [&](double v) { return left + plot_w * (std::log10(v) - std::log10(x_min)) /
                                              (std::log10(x_max) - std::log10(x_min)); };
    auto sy = [&](double v) { return top + plot_h * (std::log10(y_max) - std::log10(v)) /
                                              (std::log10(y_max) - std::log10(y_min)); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

    std::ofstream out(path);
    if (!out) throw IoError("write_svg: cannot open " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Axes and decade gridlines.
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double d = y_min; d <= y_max * 1.0001; d *= 10.0) {
        const double y = sy(d);
        out << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + plot_w << "\" y2=\"" << y
            << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << fmt6(d)
            << "</text>\n";
    }
    std::vector<double> x_ticks;
    for (const auto& [key, pts] : series) {
        for (const SummaryRow* s : pts) x_ticks.push_back(s->sample_size);
    }
    std::sort(x_ticks.begin(), x_ticks.end());
    x_ticks.erase(std::unique(x_ticks.begin(), x_ticks.end()), x_ticks.end());
    for (double t : x_ticks) {
        const double x = sx(t);
        out << "<line x1=\"" << x << "\" y1=\"" << top + plot_h << "\" x2=\"" << x << "\" y2=\""
            << top + plot_h + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << x << "\" y=\"" << top + plot_h + 20 << "\" text-anchor=\"middle\">"
            << fmt6(t) << "</text>\n";
    }
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15
        << "\" text-anchor=\"middle\">sample size |D|</text>\n";
    out << "<text x=\"18\" y=\"" << top + plot_h / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << top + plot_h / 2
        << ")\">mean prediction error</text>\n";

    int idx = 0;
    double legend_y = top + 10;
    for (const auto& [key, pts] : series) {
        const char* color = palette[idx % 8];
        std::vector<const SummaryRow*> sorted = pts;
        std::sort(sorted.begin(), sorted.end(),
                  [](const SummaryRow* a, const SummaryRow* b) { return a->sample_size < b->sample_size; });

        out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (const SummaryRow* s : sorted) out << sx(s->sample_size) << ',' << sy(s->prediction_error_mean) << ' ';
        out << "\"/>\n";
        for (const SummaryRow* s : sorted) {
            const double x = sx(s->sample_size);
            const double hi = s->prediction_error_mean + s->prediction_error_std;
            const double lo = std::max(s->prediction_error_mean - s->prediction_error_std,
                                       s->prediction_error_mean * 0.1);
            out << "<line x1=\"" << x << "\" y1=\"" << sy(lo) << "\" x2=\"" << x << "\" y2=\"" << sy(hi)
                << "\" stroke=\"" << color << "\"/>\n";
            out << "<circle cx=\"" << x << "\" cy=\"" << sy(s->prediction_error_mean)
                << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
        }

        out << "<circle cx=\"" << left + plot_w + 18 << "\" cy=\"" << legend_y << "\" r=\"4\" fill=\""
            << color << "\"/>\n";
        out << "<text x=\"" << left + plot_w + 28 << "\" y=\"" << legend_y + 4 << "\">" << key.method << " [m="
            << key.machines << "]</text>\n";
        legend_y += 18;
        ++idx;
    }
    out << "</svg>\n";
    if (!out) throw IoError("write_svg: write failed for " + path);
}

} // namespace funclearn
