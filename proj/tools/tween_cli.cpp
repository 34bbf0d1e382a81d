#include <tween/cli.hpp>

int main(int argc, char** argv)
{
    return tween::cli::main(argc, argv);
}
