#include "gapmm/cli.hpp"

int main(int argc, char** argv) { return gapmm::run_cli(argc, argv); }
