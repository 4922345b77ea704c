#include <iostream>

#include "racetrack/cli.hpp"

int main(int argc, char** argv) { return racetrack::cli::dispatch(argc, argv, std::cout, std::cerr); }
