#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mlnn/experiments.hpp"

using namespace mlnn;
namespace fs = std::filesystem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_diverged = 1;
constexpr int exit_input = 2;

std::string fmt(double v) { return format_number(v); }
std::string fmt(Interval b) { return "[" + fmt(b.lower) + ", " + fmt(b.upper) + "]"; }

void print_bounds(const std::vector<BoundRow>& rows) {
    for (const BoundRow& r : rows) std::cout << "  " << r.formula << "[" << r.state << "] = " << fmt(r.bounds) << '\n';
}

void print_matrix(const std::string& name, const KripkeModel& m) {
    const Matrix<double> a = m.relations.at(name).values(m.parameters);
    std::cout << name << ":\n";
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::cout << "  " << m.states.label(i);
        for (std::size_t j = 0; j < a.cols(); ++j) std::cout << ' ' << fmt(a(i, j));
        std::cout << '\n';
    }
}

void print_training(const TrainHistory& h) {
    const EpochRecord& first = h.epochs.front();
    std::cout << "epochs: " << h.epochs.size() << '\n'
              << "loss: " << fmt(first.total) << " -> " << fmt(h.final.total) << '\n'
              << "contradiction: " << fmt(first.contradiction) << " -> " << fmt(h.final.contradiction) << '\n';
}

void print_fixpoint(const FixpointResult& fp) {
    std::cout << "fixpoint: " << (fp.converged ? "converged" : "NOT converged") << " after " << fp.iterations
              << " iterations (last change " << fmt(fp.last_change) << ")\n";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_check(const std::string& path) {
    const ModelSpec spec = load_spec(path);
    const BuiltModel b = build(spec);
    std::cout << "ok: " << b.model.states.size() << " states, " << b.model.propositions.size() << " propositions, "
              << b.model.relations.size() << " relations, " << b.names.size() << " formulas, " << b.axioms.size()
              << " axioms\n";
    return exit_ok;
}

int cmd_infer(const std::string& path, const std::string& out) {
    const BuiltModel b = build(load_spec(path));
    const FixpointResult fp =
        run_to_fixpoint(b.model, b.pool, b.roots, b.axioms, {b.train.tau}, b.train.inference);
    print_fixpoint(fp);
    print_bounds(formula_bounds(b, &fp));
    if (!out.empty()) {
        RunReport report{"infer", nullptr, &fp, {}, {}};
        save_results(b, report, out);
        std::cout << "results: " << out << '\n';
    }
    return fp.converged ? exit_ok : exit_diverged;
}

int cmd_train(const std::string& path, const std::string& out, std::optional<std::uint64_t> seed) {
    ModelSpec spec = load_spec(path);
    if (seed) spec.train.seed = *seed;
    BuiltModel b = build(spec);
    const auto t0 = std::chrono::steady_clock::now();
    const TrainHistory h = train(b.model, b.pool, b.objective(), b.train);
    const double elapsed = seconds_since(t0);
    print_training(h);
    for (const auto& [name, rel] : b.model.relations) {
        if (rel.learnable() && b.model.states.size() <= 32) print_matrix(name, b.model);
    }
    print_bounds(formula_bounds(b));
    if (!out.empty()) {
        RunReport report{"train", &h, nullptr, {{"seconds", elapsed}}, {{"bounds", "upward evaluation after training"}}};
        save_results(b, report, out);
        std::cout << "results: " << out << '\n';
    }
    return exit_ok;
}

struct ScenarioArgs {
    std::string name;
    RingOptions ring;
    bool learnable_heirs = false;
    std::string out;
    std::string save_spec_path;
};

ModelSpec scenario_spec(const ScenarioArgs& a) {
    if (a.name == "royal") return scenario_royal_succession(a.learnable_heirs);
    if (a.name == "toy") return scenario_epistemic_toy();
    return scenario_ring(a.ring);
}

int cmd_scenario(const ScenarioArgs& a) {
    if (!a.save_spec_path.empty()) {
        write_spec(scenario_spec(a), a.save_spec_path);
        std::cout << "spec: " << a.save_spec_path << '\n';
    }
    const auto t0 = std::chrono::steady_clock::now();

    if (a.name == "royal") {
        const RoyalOutcome r = run_royal(a.learnable_heirs);
        if (r.history) print_training(*r.history);
        print_fixpoint(r.fixpoint);
        auto verdict = [](const std::optional<bool>& v) { return v ? (*v ? "true" : "false") : "undetermined"; };
        std::cout << "necessarily_alive_W[w_Present] = " << fmt(r.alive_W) << '\n'
                  << "necessarily_alive_H[w_Present] = " << fmt(r.alive_H) << '\n'
                  << "isHeir_W[w_Present] = " << fmt(r.heir_W) << "  crisp: " << verdict(r.oracle_heir_W) << '\n'
                  << "isHeir_H[w_Present] = " << fmt(r.heir_H) << "  crisp: " << verdict(r.oracle_heir_H) << '\n'
                  << "crisp models: " << r.oracle_models << '\n';
        if (!a.out.empty()) {
            RunReport report{"scenario royal", r.history ? &*r.history : nullptr, &r.fixpoint,
                             {{"seconds", seconds_since(t0)}}, {}};
            save_results(r.built, report, a.out);
            std::cout << "results: " << a.out << '\n';
        }
        return r.fixpoint.converged ? exit_ok : exit_diverged;
    }

    if (a.name == "toy") {
        const ToyOutcome t = run_epistemic_toy();
        print_training(t.history);
        print_matrix("epistemic", t.built.model);
        print_bounds(formula_bounds(t.built));
        if (!a.out.empty()) {
            RunReport report{"scenario toy", &t.history, nullptr, {{"seconds", seconds_since(t0)}},
                             {{"bounds", "upward evaluation after training"}}};
            save_results(t.built, report, a.out);
            std::cout << "results: " << a.out << '\n';
        }
        return exit_ok;
    }

    const RingOutcome r = run_ring(a.ring);
    const double elapsed = seconds_since(t0);
    print_training(r.history);
    const std::size_t n = a.ring.n;
    std::cout << "structure_mse: " << fmt(r.mse) << '\n'
              << "contradiction: " << fmt(r.contradiction) << '\n'
              << "trust[a0->a1]: " << fmt(r.learned(0, 1)) << '\n'
              << "trust[a0->a2]: " << fmt(r.learned(0, 2 % n)) << '\n'
              << "seconds: " << fmt(elapsed) << '\n';
    if (!a.out.empty()) {
        RunReport report{"scenario ring", &r.history, nullptr,
                         {{"structure_mse", r.mse}, {"contradiction", r.contradiction}, {"seconds", elapsed}},
                         {{"bounds", "upward evaluation after training"}}};
        save_results(r.built, report, a.out);
        std::cout << "results: " << a.out << '\n';
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Modal logical neural networks: soft Kripke semantics with learnable accessibility"};
    app.require_subcommand(1);

    std::string model_path, out;
    std::optional<std::uint64_t> seed;

    auto* check = app.add_subcommand("check", "Validate a model file");
    check->add_option("model", model_path, "Model file (JSON)")->required();

    auto* infer = app.add_subcommand("infer", "Propagate bounds to a fixed point");
    infer->add_option("model", model_path, "Model file (JSON)")->required();
    infer->add_option("--out", out, "Results directory");

    auto* trn = app.add_subcommand("train", "Learn accessibility and proposition values");
    trn->add_option("model", model_path, "Model file (JSON)")->required();
    trn->add_option("--out", out, "Results directory");
    trn->add_option("--seed", seed, "Override the model's seed");

    ScenarioArgs sc;
    auto* scen = app.add_subcommand("scenario", "Run a built-in scenario");
    scen->add_option("name", sc.name, "royal, toy or ring")->required()->check(CLI::IsMember({"royal", "toy", "ring"}));
    scen->add_option("--n", sc.ring.n, "Ring size")->check(CLI::Range(3, 1000));
    scen->add_option("--k", sc.ring.k, "Top-k links kept per row");
    scen->add_option("--tau", sc.ring.tau, "Temperature")->check(CLI::PositiveNumber);
    scen->add_option("--epochs", sc.ring.epochs, "Ring training epochs");
    scen->add_option("--lr", sc.ring.learning_rate, "Ring learning rate")->check(CLI::PositiveNumber);
    scen->add_option("--seed", sc.ring.seed, "Ring seed");
    scen->add_flag("--fixed-r", sc.ring.fixed_r, "Frozen random trust relation");
    scen->add_flag("--learnable-heirs", sc.learnable_heirs, "Royal: train the heir propositions");
    scen->add_option("--out", sc.out, "Results directory");
    scen->add_option("--save-spec", sc.save_spec_path, "Also write the scenario as a model file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }

    try {
        if (*check) return cmd_check(model_path);
        if (*infer) return cmd_infer(model_path, out);
        if (*trn) return cmd_train(model_path, out, seed);
        return cmd_scenario(sc);
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_diverged;
    }
}
