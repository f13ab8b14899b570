#include "lawsmells/cli.hpp"

int main(int argc, char** argv) { return lawsmells::cli::run(argc, argv); }
