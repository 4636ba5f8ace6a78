#include "specminer/cli.hpp"

int main(int argc, char** argv) { return specminer::cli::run(argc, argv); }
