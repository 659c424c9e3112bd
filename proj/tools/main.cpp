#include "cli.hpp"

#include <iostream>

auto main(int argc, char * argv[]) -> int
{
    return cosetcsp_cli::run_cli(argc, argv, std::cout, std::cerr);
}
