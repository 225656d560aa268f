#include <cstdlib>
#include <iostream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dqkit/cli.hpp"

int main(int argc, char** argv) {
    auto logger = spdlog::stderr_color_mt("dqkit");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("DQKIT_LOG")) spdlog::set_level(spdlog::level::from_str(level));

    std::vector<std::string> args(argv + 1, argv + argc);
    return dqkit::cli::run(args, std::cout, std::cerr);
}
