// Entry point for the rlnc-offload tool. Argument handling only; the
// commands themselves live in rlncoff/cli.hpp so tests can call them
// without spawning a process.
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <boost/program_options.hpp>

#include "rlncoff/cli.hpp"

namespace po = boost::program_options;

namespace {

void print_usage(std::ostream& out) {
    out << "usage: rlnc-offload <command> [options]\n"
           "\n"
           "commands:\n"
           "  sweep         evaluate the configured parameter grid and write a CSV\n"
           "  validate      run analytic-vs-simulation checks on the configured scenario\n"
           "  offload-demo  offload a file through the simulated corridor end to end\n"
           "\n"
           "run 'rlnc-offload <command> --help' for the command's options\n";
}

}  // namespace

int main(int argc, char** argv) {
    using rlncoff::cli::kExitOk;
    using rlncoff::cli::kExitUsage;
    try {
        if (argc < 2) {
            std::cerr << "error: missing command (sweep | validate | offload-demo)\n";
            print_usage(std::cerr);
            return kExitUsage;
        }
        const std::string command = argv[1];
        if (command == "--help" || command == "-h" || command == "help") {
            print_usage(std::cout);
            return kExitOk;
        }

        std::string config_path, out_path, input_path;
        po::options_description opts("options");
        opts.add_options()
            ("help,h", "show this help")
            ("config", po::value<std::string>(&config_path)->value_name("PATH")->required(),
             "scenario configuration file")
            ("trials", po::value<std::size_t>()->value_name("N"),
             "override the configured trial count")
            ("seed", po::value<std::uint64_t>()->value_name("N"),
             "override the configured RNG seed");

        po::positional_options_description positionals;
        if (command == "sweep") {
            opts.add_options()
                ("out", po::value<std::string>(&out_path)->value_name("PATH")->required(),
                 "output CSV path");
        } else if (command == "offload-demo") {
            opts.add_options()
                ("input", po::value<std::string>(&input_path)->value_name("FILE")->required(),
                 "file to offload (positional)");
            positionals.add("input", 1);
        } else if (command != "validate") {
            std::cerr << "error: unknown command '" << command << "'\n";
            print_usage(std::cerr);
            return kExitUsage;
        }

        po::variables_map vm;
        po::store(po::command_line_parser(std::vector<std::string>(argv + 2, argv + argc))
                      .options(opts)
                      .positional(positionals)
                      .run(),
                  vm);
        if (vm.count("help")) {
            std::cout << "usage: rlnc-offload " << command
                      << (command == "offload-demo" ? " FILE" : "") << " [options]\n"
                      << opts;
            return kExitOk;
        }
        po::notify(vm);

        rlncoff::cli::Overrides overrides;
        if (vm.count("trials")) overrides.trials = vm["trials"].as<std::size_t>();
        if (vm.count("seed")) overrides.seed = vm["seed"].as<std::uint64_t>();

        if (command == "sweep")
            return rlncoff::cli::cmd_sweep(config_path, out_path, overrides, std::cout,
                                           std::cerr);
        if (command == "validate")
            return rlncoff::cli::cmd_validate(config_path, overrides, std::cout, std::cerr);
        return rlncoff::cli::cmd_offload_demo(input_path, config_path, overrides, std::cout,
                                              std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
