// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/cli.hpp"

int main(int argc, char** argv) { return qpureb::cli::run(argc, argv); }
