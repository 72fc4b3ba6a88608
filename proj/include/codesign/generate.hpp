#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "codesign/session.hpp"

// Headless pipeline run shared by the CLI and the acceptance harness.
namespace codesign::gateway {

enum ExitCode : int {
    kExitDone = 0,
    kExitConfig = 2,
    kExitStageFailure = 3,
    kExitUnplaceable = 4,
    kExitOther = 5,
};

struct GenerateArgs {
    RoomSpec room;
    session::Mode mode = session::Mode::Auto;
    session::SessionOptions options;
    /// The session lands in out_dir / room.output_name (or "session" when unnamed).
    std::filesystem::path out_dir = "out";
    /// Scripted answers for manual mode, consumed in order.
    std::vector<session::Decision> decisions;
    /// Remove an existing session directory first.
    bool force = false;
    double px_per_m = 80.0;
};

struct GenerateResult {
    std::filesystem::path session_dir;
    std::vector<std::filesystem::path> exports;
    session::Stage stage = session::Stage::Selection;
};

/// [{"accept": false, "feedback": "..."}, {"accept": true}, ...]
std::vector<session::Decision> decisions_from_json(const Json& j);

/// Runs the three stages and the optimization; progress lines go to `log`.
/// Throws the module exceptions; exit_code_for maps them.
GenerateResult generate(const GenerateArgs& args, session::Services services, std::ostream& log);

int exit_code_for(const std::exception& e);

}  // namespace codesign::gateway
