// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "raggednn/errors.hpp"

namespace raggednn {

enum class Task { NodeClassification, GraphClassification, GraphRegression };

inline Task task_from_string(const std::string& s) {
    if (s == "node_classification") return Task::NodeClassification;
    if (s == "graph_classification") return Task::GraphClassification;
    if (s == "graph_regression") return Task::GraphRegression;
    throw ConfigError("task: unknown value '" + s +
                      "' (node_classification|graph_classification|graph_regression)");
}

inline std::string task_to_string(Task t) {
    switch (t) {
        case Task::NodeClassification: return "node_classification";
        case Task::GraphClassification: return "graph_classification";
        case Task::GraphRegression: return "graph_regression";
    }
    return "?";
}

inline bool is_graph_task(Task t) { return t != Task::NodeClassification; }

} // namespace raggednn
