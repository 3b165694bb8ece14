#include "pdab/cli.hpp"

int main(int argc, char** argv) {
    return pdab::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
