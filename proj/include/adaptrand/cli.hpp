#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace adaptrand::cli {

enum ExitCode : int {
    kOk = 0,
    kValidationError = 1,
    kRuntimeError = 2,
    kVerificationFailed = 3,
};

/// Default output directory when --out is absent.
inline constexpr const char* kOutDirEnv = "ADAPTRAND_OUT";

/// Entry point; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace adaptrand::cli
