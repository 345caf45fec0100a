#include "cli/commands.hpp"

int main(int argc, char** argv) { return cartan::cli::run(argc, argv); }
