#include "cli.hpp"

int main(int argc, char** argv) { return ccopt::cli::main_entry(argc, argv); }
