#include "borcherds/cli.hpp"

int main(int argc, char** argv) { return borcherds::cli::run(argc, argv); }
