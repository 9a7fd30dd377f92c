// SPDX-License-Identifier: Apache-2.0
//
// mimo-recon: MIMO channel correlation reconstruction and simulation library
// Copyright (C) 2026 The mimo-recon authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MIMO_RECON_HPP
#define MIMO_RECON_HPP

#include "mimo_recon/chgen.hpp"
#include "mimo_recon/corrmodels.hpp"
#include "mimo_recon/error.hpp"
#include "mimo_recon/fft.hpp"
#include "mimo_recon/matcore.hpp"
#include "mimo_recon/metrics.hpp"
#include "mimo_recon/parallel.hpp"
#include "mimo_recon/recon.hpp"
#include "mimo_recon/rng.hpp"
#include "mimo_recon/tfa.hpp"
#include "mimo_recon/version.hpp"

#endif
