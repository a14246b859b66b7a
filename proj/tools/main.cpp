#include <iostream>

#include <ttinherit/cli.hpp>

int main(int argc, char** argv) { return ttinherit::run_cli(argc, argv, std::cout, std::cerr); }
