"""MCP tool definitions for the continual-learning testbed"""

from mcp.types import Tool


def get_tool_definitions():
    """Get all MCP tool definitions"""
    return [
        Tool(
            name="clreg_compute_metrics",
            description="Compute final ACC, mean ACC, BWT and FWT from a train-test accuracy matrix",
            inputSchema={
                "type": "object",
                "properties": {
                    "matrix": {
                        "type": "array",
                        "items": {"type": "array", "items": {"type": "number"}},
                        "description": "T x T accuracies; row i is measured after training task i"
                    },
                    "baseline": {
                        "type": "array",
                        "items": {"type": "number"},
                        "description": "Accuracy of the untrained model on each task (needed for FWT)"
                    }
                },
                "required": ["matrix"]
            }
        ),
        Tool(
            name="clreg_generate_stream",
            description="Generate a synthetic subject stream and summarise each subject with its Bayes accuracy",
            inputSchema={
                "type": "object",
                "properties": {
                    "stream": {
                        "type": "object",
                        "description": "Stream knobs (D, K, n_subjects, n_train, n_test, shift_angle, drift_scale, noise_sigma, ...)"
                    },
                    "bayes_samples": {
                        "type": "integer",
                        "description": "Monte-Carlo samples for the Bayes accuracy (default: 20000)",
                        "default": 20000
                    }
                },
                "required": []
            }
        ),
        Tool(
            name="clreg_run_sequence",
            description="Train one strategy over a synthetic stream and return its metrics",
            inputSchema={
                "type": "object",
                "properties": {
                    "config": {
                        "type": "object",
                        "description": "Run configuration (stream, model, optimizer, epochs, strategy, lam, ...)"
                    },
                    "seed": {
                        "type": "integer",
                        "description": "Run seed (default: first configured seed)"
                    }
                },
                "required": ["config"]
            }
        ),
        Tool(
            name="clreg_macro_f1",
            description="Macro F1 from a K x K confusion matrix (rows true, columns predicted)",
            inputSchema={
                "type": "object",
                "properties": {
                    "confusion": {
                        "type": "array",
                        "items": {"type": "array", "items": {"type": "integer"}},
                        "description": "Confusion counts"
                    }
                },
                "required": ["confusion"]
            }
        ),
    ]
