#include "dlcfar/commands.hpp"

int main(int argc, char** argv) { return dlcfar::run_cli(argc, argv); }
