#include "hsplab/scenario.hpp"

int main(int argc, char** argv) { return hsplab::cli_main(argc, argv); }
