#include "rabi/cli.hpp"

int main(int argc, char** argv) { return rabi::cli::main(argc, argv); }
