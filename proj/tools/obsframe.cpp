#include "obsframe/cli.hpp"

int main(int argc, char** argv) { return obsframe::cli::run(argc, argv); }
