#include <iostream>

#include "neatduel/commands.hpp"

int main(int argc, char** argv) { return neatduel::cli::run(argc, argv, std::cout, std::cerr); }
