#include "nld/cli.hpp"

int main(int argc, char** argv) {
    return nld::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
