#pragma once

// Placeholder during bring-up; replaced by the full subcommand front end.
namespace hypermin {
inline int cli_main(int, char**) { return 0; }
}  // namespace hypermin
