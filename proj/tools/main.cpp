#include "hesvs/cli.hpp"

int main(int argc, char** argv) { return hesvs::cli::run(argc, argv); }
