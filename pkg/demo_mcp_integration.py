#!/usr/bin/env python3
"""
clreg MCP Server - Integration Demo

Starts `python -m clreg serve` as a subprocess and drives every tool
through an MCP client session.
"""

import asyncio
import json
import sys

from mcp import ClientSession, StdioServerParameters
from mcp.client.stdio import stdio_client

SMALL_STREAM = {"D": 8, "K": 3, "n_subjects": 5, "n_train": 120, "n_test": 60, "seed": 1}


def banner(title: str):
    print("=" * 80)
    print(title)
    print("=" * 80)


async def demo_mcp_tools():
    """Demonstrate MCP server integration"""

    server_params = StdioServerParameters(command=sys.executable, args=["-m", "clreg", "serve"])

    banner("clreg MCP Server Integration Demo")
    print("\nConnecting to MCP server...")

    async with stdio_client(server_params) as (read, write):
        async with ClientSession(read, write) as session:
            await session.initialize()
            print("✅ Connected to MCP server\n")

            print("-" * 80)
            print("Available MCP Tools:")
            print("-" * 80)
            tools = await session.list_tools()
            for tool in tools.tools:
                print(f"  • {tool.name}: {tool.description}")
            print()

            banner("Demo 1: Metrics of a hand-written accuracy matrix")
            result = await session.call_tool("clreg_compute_metrics", {
                "matrix": [[0.8, 0.2, 0.3], [0.7, 0.9, 0.4], [0.6, 0.8, 0.9]],
                "baseline": [0.3, 0.3, 0.3],
            })
            data = json.loads(result.content[0].text)
            print(f"   ACC: {data['final_acc']:.4f}  BWT: {data['bwt']:+.4f}  FWT: {data['fwt']:+.4f}")
            print()

            banner("Demo 2: Metrics of a single task (BWT/FWT undefined)")
            result = await session.call_tool("clreg_compute_metrics", {"matrix": [[0.7]]})
            data = json.loads(result.content[0].text)
            print(f"   BWT: {data['bwt']}  reason: {data.get('bwt_error')}")
            print()

            banner("Demo 3: Generate a synthetic subject stream")
            result = await session.call_tool("clreg_generate_stream", {
                "stream": SMALL_STREAM,
                "bayes_samples": 5000,
            })
            data = json.loads(result.content[0].text)
            print(f"   Training order: {data['order']}  held out: {data['holdout']}")
            for subject in data["subjects"]:
                print(f"   subject {subject['id']}: Bayes accuracy {subject['bayes_accuracy']:.3f}")
            print()

            banner("Demo 4: Naive vs EWC on the same stream")
            for strategy, lam in (("naive", 0.0), ("ewc", 5.0)):
                result = await session.call_tool("clreg_run_sequence", {
                    "config": {
                        "stream": SMALL_STREAM,
                        "model": {"hidden": [16]},
                        "epochs": 5,
                        "strategy": strategy,
                        "lam": lam,
                        "n_fisher": 100,
                    },
                })
                data = json.loads(result.content[0].text)
                print(f"   {strategy:<6} ACC {data['final_acc']:.4f}  BWT {data['bwt']:+.4f}")
            print()

            banner("Demo 5: Invalid configuration")
            result = await session.call_tool("clreg_run_sequence", {"config": {"strategy": "lwf"}})
            data = json.loads(result.content[0].text)
            print(f"❌ {data['kind']}: {data['error']}")
            print()

            banner("Demo 6: Macro F1 from a confusion matrix")
            result = await session.call_tool("clreg_macro_f1", {"confusion": [[8, 2, 0], [1, 7, 2], [0, 3, 7]]})
            data = json.loads(result.content[0].text)
            print(f"   Macro F1: {data['macro_f1']:.4f} over {data['total']} samples")
            print()

            banner("✅ MCP Integration Demo Complete")


if __name__ == "__main__":
    asyncio.run(demo_mcp_tools())
