#include "yspec/cli.hpp"

int main(int argc, char** argv) { return yspec::cli::run(argc, argv); }
