#include "roughlab/lab.hpp"

int main(int argc, char** argv) { return roughlab::lab::cli_main(argc, argv); }
