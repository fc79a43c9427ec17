#ifndef FCSLAB_CLI_HPP
#define FCSLAB_CLI_HPP

namespace fcslab {

// Exit codes: 0 success (verify: all checks pass), 1 failed checks or
// runtime error, 2 configuration error, 3 resource cap exceeded.
int run_cli(int argc, const char* const* argv);

}  // namespace fcslab

#endif
