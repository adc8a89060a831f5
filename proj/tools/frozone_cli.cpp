#include "frozone/cli_io.hpp"

int main(int argc, char** argv) { return frozone::cli_main(argc, argv); }
