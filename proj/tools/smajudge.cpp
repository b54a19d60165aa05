// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#include "smajudge/cli/app.hpp"

int main(int argc, char** argv) { return smajudge::cli::run_cli(argc, argv); }
