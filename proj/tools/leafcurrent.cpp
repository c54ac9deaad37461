#include <iostream>

#include "leafcurrent/commands.hpp"

int main(int argc, char** argv) { return leafcurrent::cli_main(argc, argv, std::cout, std::cerr); }
