#include <cstdlib>
#include <iostream>

#include "mwb/cli.hpp"

int main(int argc, char** argv) {
    mwb::CliEnvironment environment;
    if (const char* store = std::getenv("MWB_STORE"); store != nullptr && *store != '\0') {
        environment.default_store = store;
    }
    std::vector<std::string> args(argv + 1, argv + argc);
    return mwb::run_cli(args, std::cout, std::cerr, environment);
}
