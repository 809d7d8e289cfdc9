"""Integration tests for actual MCP protocol communication"""

import json
import sys

import pytest

pytest.importorskip("mcp")

from mcp import ClientSession, StdioServerParameters  # noqa: E402
from mcp.client.stdio import stdio_client  # noqa: E402

SERVER_PARAMS = StdioServerParameters(command=sys.executable, args=["-m", "clreg", "serve"])


async def _call(name, arguments):
    async with stdio_client(SERVER_PARAMS) as (read, write):
        async with ClientSession(read, write) as session:
            await session.initialize()
            result = await session.call_tool(name, arguments)
            return result.content[0].text


@pytest.mark.integration
@pytest.mark.asyncio
class TestMCPProtocolIntegration:
    """Test clreg through the MCP protocol (not mocked)"""

    async def test_mcp_server_startup_and_tools(self):
        """Test server starts and lists tools"""
        async with stdio_client(SERVER_PARAMS) as (read, write):
            async with ClientSession(read, write) as session:
                await session.initialize()
                tools = await session.list_tools()

        assert sorted(t.name for t in tools.tools) == [
            "clreg_compute_metrics",
            "clreg_generate_stream",
            "clreg_macro_f1",
            "clreg_run_sequence",
        ]

    async def test_mcp_compute_metrics(self):
        """Test metrics of a three-task matrix"""
        data = json.loads(await _call("clreg_compute_metrics", {
            "matrix": [[0.8, 0.2, 0.3], [0.7, 0.9, 0.4], [0.6, 0.8, 0.9]],
            "baseline": [0.3, 0.3, 0.3],
        }))

        assert data["ok"] is True
        assert data["final_acc"] == pytest.approx(2.3 / 3)
        assert data["bwt"] == pytest.approx(-0.15)
        assert data["fwt"] == pytest.approx(0.0)

    async def test_mcp_compute_metrics_invalid(self):
        """Test out-of-range accuracies come back as an error document"""
        data = json.loads(await _call("clreg_compute_metrics", {"matrix": [[1.5]]}))

        assert data["ok"] is False
        assert "error" in data

    async def test_mcp_generate_stream(self):
        """Test stream summary over the protocol"""
        data = json.loads(await _call("clreg_generate_stream", {
            "stream": {"D": 4, "K": 3, "n_subjects": 5, "n_train": 40, "n_test": 20, "seed": 2},
            "bayes_samples": 1000,
        }))

        assert data["ok"] is True
        assert len(data["order"]) + len(data["holdout"]) == 5
        assert len(data["subjects"]) == 5

    async def test_mcp_run_sequence(self):
        """Test a short training run over the protocol"""
        config = {
            "stream": {"D": 4, "K": 3, "n_subjects": 3, "n_train": 40, "n_test": 20,
                       "holdout_frac": 0.0, "seed": 5},
            "model": {"hidden": [6]},
            "epochs": 1,
            "batch_size": 20,
            "strategy": "ewc",
            "lam": 1.0,
            "n_fisher": 20,
        }
        data = json.loads(await _call("clreg_run_sequence", {"config": config}))

        assert data["ok"] is True
        assert data["strategy"] == "ewc"
        assert len(data["matrix"]) == 3

    async def test_mcp_macro_f1(self):
        """Test macro F1 over the protocol"""
        data = json.loads(await _call("clreg_macro_f1", {"confusion": [[1, 0, 0], [0, 0, 0], [0, 0, 9]]}))

        assert data["macro_f1"] == pytest.approx(2.0 / 3.0)
        assert data["total"] == 10

    async def test_mcp_unknown_tool(self):
        """Test calling an unknown tool"""
        text = await _call("clreg_nothing", {})

        assert "Unknown tool" in text
