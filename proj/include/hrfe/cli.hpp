#pragma once

namespace hrfe {

// Entry point behind the `hrfe` binary: synth / estimate / bench / report.
// Returns the process exit code.
int cli_main(int argc, char** argv);

}  // namespace hrfe
