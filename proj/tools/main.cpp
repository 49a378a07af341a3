#include <iostream>

#include "commands.hpp"
#include "graphprobe/error.hpp"

int main(int argc, char** argv) {
  graphprobe::cli::Cli cli;
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    cli.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return cli.app().exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli.app().exit(e);
  } catch (const CLI::CallForVersion& e) {
    return cli.app().exit(e);
  } catch (const CLI::ParseError& e) {
    cli.app().exit(e);
    return 2;
  }
  try {
    return cli.execute(std::cout);
  } catch (const graphprobe::cli::UsageError& e) {
    std::cerr << "graphprobe: usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "graphprobe: error: " << e.what() << '\n';
    return 1;
  }
}
