#ifndef FUNNEL_CLI_HPP
#define FUNNEL_CLI_HPP

namespace funnel::cli {

// Exit codes: 0 success, 2 no verifiable local box, 3 schema/parse/usage
// errors, 4 uncertified or unavailable decoded bits.
int run(int argc, const char* const* argv);

} // namespace funnel::cli

#endif
