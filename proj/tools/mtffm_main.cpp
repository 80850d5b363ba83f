#include "mtffm/cli.hpp"

int main(int argc, char** argv)
{
    return mtffm::cli::dispatch(argc, argv);
}
