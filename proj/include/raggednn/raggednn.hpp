// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header: the full ragged graph-learning stack.
#pragma once

#include "raggednn/adjacency.hpp"
#include "raggednn/ad/grad_check.hpp"
#include "raggednn/ad/tape.hpp"
#include "raggednn/data/batching.hpp"
#include "raggednn/data/dataset.hpp"
#include "raggednn/data/synthetic.hpp"
#include "raggednn/graph.hpp"
#include "raggednn/kernels.hpp"
#include "raggednn/matrix.hpp"
#include "raggednn/nn/layer_gradcheck.hpp"
#include "raggednn/nn/model.hpp"
#include "raggednn/ragged.hpp"
#include "raggednn/random.hpp"
#include "raggednn/train/checkpoint.hpp"
#include "raggednn/train/loss.hpp"
#include "raggednn/train/optimizer.hpp"
#include "raggednn/train/trainer.hpp"
