#include "market/cli.hpp"

int main(int argc, char** argv) { return market::run_cli(argc, argv); }
