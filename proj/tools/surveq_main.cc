#include "surveq/cli.h"

int main(int argc, char** argv) { return surveq::cli::Main(argc, argv); }
