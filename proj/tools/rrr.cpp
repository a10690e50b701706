#include <iostream>

#include "rrr/cli/commands.hpp"

int main(int argc, char** argv)
{
    return rrr::cli::run_cli(argc, argv, std::cout, std::cerr);
}
