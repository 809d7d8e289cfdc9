"""MCP server exposing metrics, stream generation and training runs"""

import json
import logging
from typing import List

from mcp.server import Server
from mcp.types import TextContent

from ..errors import ClregError
from ..metrics import AccuracyMatrix, ConfusionCounts, bwt, final_acc, fwt, learning_curve, macro_f1, mean_acc
from ..runner.config import config_from_dict
from ..runner.reports import metrics_document
from ..runner.training import run_sequence
from ..stream.generator import StreamSpec, bayes_accuracy, generate_stream
from ..utils.serialization import to_jsonable
from .tools import get_tool_definitions

logger = logging.getLogger(__name__)


def _text(payload: dict) -> List[TextContent]:
    return [TextContent(type="text", text=json.dumps(to_jsonable(payload), indent=2))]


def _error(message: str, **context) -> List[TextContent]:
    return _text({"error": message, **context, "ok": False})


class ClregMCPServer:
    """MCP server for the continual-learning testbed"""

    def __init__(self):
        self.server = Server("clreg")
        self._setup_tools()

    def _setup_tools(self):
        """Register all MCP tools"""

        @self.server.list_tools()
        async def list_tools():
            return get_tool_definitions()

        @self.server.call_tool()
        async def call_tool(name: str, arguments: dict) -> List[TextContent]:
            """Handle tool calls"""

            if name == "clreg_compute_metrics":
                return self._handle_compute_metrics(arguments)

            elif name == "clreg_generate_stream":
                return self._handle_generate_stream(arguments)

            elif name == "clreg_run_sequence":
                return self._handle_run_sequence(arguments)

            elif name == "clreg_macro_f1":
                return self._handle_macro_f1(arguments)

            else:
                return [TextContent(type="text", text=f"Unknown tool: {name}")]

    def _handle_compute_metrics(self, arguments: dict) -> List[TextContent]:
        """Handle clreg_compute_metrics tool call"""
        try:
            M = AccuracyMatrix(arguments["matrix"], arguments.get("baseline"))
        except (ClregError, ValueError) as e:
            return _error(f"Invalid accuracy matrix: {e}")

        result = {"T": M.T, "final_acc": final_acc(M), "mean_acc": mean_acc(M),
                  "learning_curve": learning_curve(M), "ok": True}
        for name, metric in (("bwt", bwt), ("fwt", fwt)):
            try:
                result[name] = metric(M)
            except ClregError as e:
                result[name] = None
                result[f"{name}_error"] = str(e)
        return _text(result)

    def _handle_generate_stream(self, arguments: dict) -> List[TextContent]:
        """Handle clreg_generate_stream tool call"""
        try:
            spec = StreamSpec(**arguments.get("stream", {}))
            stream, holdout = generate_stream(spec)
        except (ClregError, TypeError) as e:
            return _error(f"Invalid stream spec: {e}")

        samples = int(arguments.get("bayes_samples", 20000))
        held_ids = {task.id for task in holdout}
        subjects = [
            {
                "id": task.id,
                "n_train": len(task.train),
                "n_test": len(task.test),
                "bayes_accuracy": bayes_accuracy(task, n=samples, seed=task.id),
                "holdout": task.id in held_ids,
            }
            for task in sorted([*stream, *holdout], key=lambda t: t.id)
        ]
        return _text({
            "order": [task.id for task in stream],
            "holdout": [task.id for task in holdout],
            "subjects": subjects,
            "ok": True,
        })

    def _handle_run_sequence(self, arguments: dict) -> List[TextContent]:
        """Handle clreg_run_sequence tool call"""
        try:
            config = config_from_dict(arguments["config"])
            artifacts = run_sequence(config, arguments.get("seed"))
        except ClregError as e:
            return _error(str(e), kind=type(e).__name__)

        return _text({**metrics_document(artifacts), "matrix": artifacts.matrix.R, "ok": True})

    def _handle_macro_f1(self, arguments: dict) -> List[TextContent]:
        """Handle clreg_macro_f1 tool call"""
        try:
            counts = ConfusionCounts(arguments["confusion"])
            return _text({"macro_f1": macro_f1(counts), "total": counts.total, "ok": True})
        except (ClregError, ValueError) as e:
            return _error(f"Invalid confusion matrix: {e}")

    async def run(self):
        """Run the MCP server"""
        from mcp.server.stdio import stdio_server

        async with stdio_server() as (read_stream, write_stream):
            logger.info("clreg MCP server starting...")
            await self.server.run(
                read_stream,
                write_stream,
                self.server.create_initialization_options()
            )
