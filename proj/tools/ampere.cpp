// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#include "ampere/cli.hpp"

int main(int argc, char** argv) { return ampere::run_cli(argc, argv); }
