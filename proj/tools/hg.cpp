#include <iostream>

#include "hg/gateway.hpp"

int main(int argc, char** argv) { return hg::gateway::run_cli(argc, argv, std::cout, std::cerr); }
