#include "commands.hpp"

int main(int argc, char** argv) { return toggle::cli::run(argc, argv); }
