#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "skewlab/errors.hpp"
#include "skewlab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"skewlab: fiber sets, thickness, unstable slopes and dimension "
                 "estimates for overlapping skew products"};

    skewlab::RunOptions opts;
    app.add_option("command", opts.command,
                   "one of: validate fiber thickness overlap omega cone dimension "
                   "census full-report")
        ->required();
    app.add_option("--config", opts.config_path, "config file (key = value lines)");
    double alpha = 0.0;
    auto* alpha_opt = app.add_option("--alpha", alpha, "parameter of the built-in config");
    app.add_option("--itinerary", opts.itineraries, "base itinerary over {1,2}; repeatable");
    app.add_option("--depth", opts.depth, "fiber recursion depth");
    app.add_option("--seed", opts.seed, "seed for all sampling");
    app.add_option("--samples", opts.samples, "census sample count");
    app.add_option("--out", opts.out_dir, "output directory");
    app.add_option("--format", opts.format, "json or csv preference for reports");
    double y = 0.0;
    auto* y_opt = app.add_option("--y", y, "fiber coordinate for the omega command");
    app.add_option("--choices1", opts.choices1, "first preimage branch sequence");
    app.add_option("--choices2", opts.choices2, "second preimage branch sequence");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : skewlab::kExitInputError;
    }
    if (alpha_opt->count() > 0) opts.alpha = alpha;
    if (y_opt->count() > 0) opts.y = y;

    try {
        return skewlab::run_command(opts, std::cout);
    } catch (const skewlab::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return skewlab::kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return skewlab::kExitInputError;
    }
}
