#include "adaptrand/cli.hpp"

int main(int argc, char** argv) { return adaptrand::cli::main(argc, argv); }
