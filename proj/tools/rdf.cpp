#include <iostream>

#include "rdf/cli_app.hpp"

int main(int argc, char** argv) { return rdf::run_cli(argc, argv, std::cout, std::cerr); }
