#include "nullwave/cli.hpp"

int main(int argc, char** argv) { return nullwave::run_cli(argc, argv); }
