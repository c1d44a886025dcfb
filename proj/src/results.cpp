#include "mlnn/results.hpp"

#include <fstream>
#include <ostream>

#include <json.hpp>

namespace mlnn {

using json = nlohmann::ordered_json;

namespace {

// JSON numbers carry the same six significant digits as the CSVs.
double six(double v) { return std::stod(format_number(v)); }

std::ofstream open(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
    return out;
}

json record_json(const EpochRecord& r) {
    return {{"total", six(r.total)},         {"task", six(r.task)},
            {"contradiction", six(r.contradiction)}, {"reg_T", six(r.reflexive)},
            {"reg_4", six(r.transitive)},    {"reg_S", six(r.symmetric)},
            {"sparsity", six(r.sparsity)}};
}

}  // namespace

std::vector<BoundRow> formula_bounds(const BuiltModel& built, const FixpointResult* fixpoint) {
    const KripkeModel& m = built.model;
    std::vector<BoundRow> rows;
    Tape tape(&m.parameters);
    Evaluator ev(m, built.pool, tape, {built.train.tau});
    for (std::size_t i = 0; i < built.names.size(); ++i) {
        for (StateIndex s = 0; s < m.states.size(); ++s) {
            const Interval b = fixpoint ? fixpoint->bounds.get(built.roots[i], s) : ev.value(built.roots[i], s);
            rows.push_back({built.names[i], m.states.label(s), b});
        }
    }
    return rows;
}

void write_bounds_csv(const std::vector<BoundRow>& rows, std::ostream& out) {
    out << "formula,state,lower,upper\n";
    for (const BoundRow& r : rows) {
        out << r.formula << ',' << r.state << ',' << format_number(r.bounds.lower) << ','
            << format_number(r.bounds.upper) << '\n';
    }
}

void write_accessibility_csv(const BuiltModel& built, std::ostream& out) {
    const KripkeModel& m = built.model;
    out << "relation,from";
    for (const auto& label : m.states.labels()) out << ',' << label;
    out << '\n';
    for (const auto& [name, rel] : m.relations) {
        const Matrix<double> a = rel.values(m.parameters);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            out << name << ',' << m.states.label(i);
            for (std::size_t j = 0; j < a.cols(); ++j) out << ',' << format_number(a(i, j));
            out << '\n';
        }
    }
}

void save_results(const BuiltModel& built, const RunReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        auto out = open(dir / "bounds.csv");
        write_bounds_csv(formula_bounds(built, report.fixpoint), out);
    }
    {
        auto out = open(dir / "accessibility.csv");
        write_accessibility_csv(built, out);
    }
    if (report.history) {
        auto out = open(dir / "history.csv");
        report.history->write_csv(out);
    }

    json s;
    s["schema"] = "mlnn-results/1";
    s["command"] = report.command;
    s["states"] = built.model.states.labels();
    s["bounds_source"] = report.fixpoint ? "fixpoint" : "upward";
    if (report.fixpoint) {
        s["fixpoint"] = {{"converged", report.fixpoint->converged},
                         {"iterations", report.fixpoint->iterations},
                         {"last_change", six(report.fixpoint->last_change)}};
    }
    if (report.history) {
        json t;
        t["epochs"] = report.history->epochs.size();
        if (!report.history->epochs.empty()) t["first"] = record_json(report.history->epochs.front());
        t["final"] = record_json(report.history->final);
        s["training"] = std::move(t);
    }
    json metrics = json::object();
    for (const auto& [k, v] : report.metrics) metrics[k] = six(v);
    s["metrics"] = std::move(metrics);
    if (!report.notes.empty()) s["notes"] = report.notes;
    auto out = open(dir / "summary.json");
    out << s.dump(2) << '\n';
}

}  // namespace mlnn
