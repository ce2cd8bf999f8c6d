#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "swarmtrust/io.hpp"
#include "swarmtrust/pso.hpp"
#include "swarmtrust/scenario.hpp"
#include "swarmtrust/sim.hpp"

// Exit codes: 0 success, 1 I/O failure, 2 parse/domain/config error.

namespace {

struct AggregateArgs {
    std::string input_path;
    swarmtrust::pso::Config config;
    std::string trace_path;
    std::string out_dir = ".";
};

struct SimulateArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::string out_dir = ".";
};

int cmd_aggregate(const AggregateArgs& args) {
    const auto recommendations = swarmtrust::load_recommendations(args.input_path);
    const auto result = swarmtrust::pso::aggregate(recommendations, args.config);
    std::cout << swarmtrust::fmt_real(result.trust_weight) << '\n';
    if (!args.trace_path.empty()) {
        std::filesystem::path trace_path(args.trace_path);
        if (trace_path.is_relative()) {
            trace_path = std::filesystem::path(args.out_dir) / trace_path;
        }
        std::error_code ec;
        std::filesystem::create_directories(trace_path.parent_path(), ec);
        swarmtrust::write_trace(result.trace, trace_path.string());
    }
    return 0;
}

int cmd_simulate(const SimulateArgs& args) {
    swarmtrust::sim::Config config = swarmtrust::load_scenario(args.config_path);
    if (args.seed_override) {
        config.seed = *args.seed_override;
    }
    std::error_code ec;
    std::filesystem::create_directories(args.out_dir, ec);
    if (ec) {
        throw swarmtrust::IoError("cannot create output directory: " + args.out_dir);
    }
    const auto result = swarmtrust::sim::run(config);
    const auto events_path = (std::filesystem::path(args.out_dir) / "events.csv").string();
    const auto metrics_path = (std::filesystem::path(args.out_dir) / "metrics.txt").string();
    swarmtrust::sim::write_events(result.events, events_path);
    swarmtrust::sim::write_metrics(result.metrics, metrics_path);
    swarmtrust::sim::write_metrics(result.metrics, std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acquaintance-reported trust aggregation and open-world cloud admission simulator"};
    app.require_subcommand(1);

    AggregateArgs aggregate_args;
    CLI::App* aggregate = app.add_subcommand(
        "aggregate", "Aggregate a recommendation CSV into one trust weight");
    aggregate->add_option("input", aggregate_args.input_path, "Recommendation CSV file")
        ->required();
    aggregate->add_option("--seed", aggregate_args.config.seed, "Random seed (default 0)");
    aggregate->add_option("--c1", aggregate_args.config.c1, "Nostalgia coefficient (default 1.4)");
    aggregate->add_option("--c2", aggregate_args.config.c2, "Envy coefficient (default 1.6)");
    aggregate->add_option("--epsilon", aggregate_args.config.epsilon,
                          "Convergence tolerance (default 0.01)");
    aggregate->add_option("--max-iterations", aggregate_args.config.max_iterations,
                          "Iteration budget (default 100)");
    aggregate->add_option("--trace", aggregate_args.trace_path,
                          "Write the per-iteration trace CSV here");
    aggregate->add_option("--out", aggregate_args.out_dir,
                          "Directory relative trace paths resolve against (default .)");

    SimulateArgs simulate_args;
    std::uint64_t seed_flag = 0;
    CLI::App* simulate =
        app.add_subcommand("simulate", "Run a scenario and write the event log and metrics");
    simulate->add_option("config", simulate_args.config_path, "Scenario key=value file")
        ->required();
    CLI::Option* seed_option =
        simulate->add_option("--seed", seed_flag, "Override the scenario seed");
    simulate->add_option("--out", simulate_args.out_dir, "Output directory (default .)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (aggregate->parsed()) {
            return cmd_aggregate(aggregate_args);
        }
        if (*seed_option) {
            simulate_args.seed_override = seed_flag;
        }
        return cmd_simulate(simulate_args);
    } catch (const swarmtrust::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const swarmtrust::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
