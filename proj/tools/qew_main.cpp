#include <iostream>

#include "qew/cli.hpp"

int main(int argc, char** argv) { return qew::cli::run(argc, argv, std::cout, std::cerr); }
