/*!
 *  Copyright (c) 2026 by Contributors
 * \file cli.h
 * \brief The dslguide command line: generate, validate, expect, mask, experiment and serve.
 *
 * Exit codes: 0 success, 1 runtime failure or failed experiment, 2 usage error or unknown
 * grammar, 3 generation budget exhausted.
 */
#ifndef DSLGUIDE_HARNESS_CLI_H_
#define DSLGUIDE_HARNESS_CLI_H_

#include <iosfwd>

namespace dslguide {
namespace harness {

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
           std::istream& in);

}  // namespace harness
}  // namespace dslguide

#endif  // DSLGUIDE_HARNESS_CLI_H_
