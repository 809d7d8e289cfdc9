"""MCP server for the continual-learning testbed"""

from .mcp_server import ClregMCPServer

__all__ = ['ClregMCPServer']
