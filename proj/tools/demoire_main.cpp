#include "vdm/pipeline.hpp"

int main(int argc, char** argv) { return vdm::cli_main(argc, argv); }
