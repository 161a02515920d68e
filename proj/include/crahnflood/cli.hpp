#pragma once

namespace crahn {

// Full CLI entry point (parsing, dispatch, error -> exit-code mapping);
// the binary's main() forwards here so tests can drive it in-process.
int cli_main(int argc, const char* const* argv);

}  // namespace crahn
