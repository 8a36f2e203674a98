#include "halfspace/cli.hpp"

int main(int argc, char** argv) { return halfspace::cli::run(argc, argv); }
