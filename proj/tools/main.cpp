#include "dnlat/cli.hpp"

int main(int argc, char** argv) {
    return dnlat::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
