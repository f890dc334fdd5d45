#include <iostream>

#include "sosched/cli.hpp"

int main(int argc, char** argv) { return sosched::cli::main_entry(argc, argv, {std::cout, std::cerr}); }
