#include "quarticlab/commands.hpp"

int main(int argc, char** argv) { return qlab::run(argc, argv); }
