#include "cli.hpp"

int main(int argc, char** argv) { return gmot::cli::run(argc, argv); }
