#pragma once

#include <iosfwd>

namespace cosetcsp_cli
{
    /// Exit codes: 0 success or accept, 1 negative verdict, 2 input error,
    /// 3 budget or cap exceeded, 4 internal assertion failure.
    auto run_cli(int argc, const char * const * argv, std::ostream & out, std::ostream & err) -> int;
}
