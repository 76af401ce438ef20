#!/usr/bin/env python3
"""
Launch the SparseBench API with uvicorn after a configuration check.

    python start_server.py [--host HOST] [--port PORT] [--reload]
"""

import argparse
import sys
from typing import List, Optional

import uvicorn

from config import API_HOST, API_PORT, get_logger, get_runtime_config, validate_config

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sparsebench-server", description="Run the SparseBench API")
    parser.add_argument("--host", default=API_HOST)
    parser.add_argument("--port", type=int, default=API_PORT)
    parser.add_argument("--reload", action="store_true", help="Restart on code changes (development)")
    return parser


def main(argv: Optional[List[str]] = None):
    args = build_parser().parse_args(argv)

    is_valid, error = validate_config()
    if not is_valid:
        logger.error(f"❌ {error}")
        sys.exit(1)

    runtime = get_runtime_config()
    logger.info(f"🚀 SparseBench API on http://{args.host}:{args.port} "
                f"(threads={runtime['threads']}, budget={runtime['budget_seconds']:g}s per k)")
    logger.info(f"📖 Docs: http://{args.host}:{args.port}/docs")

    try:
        uvicorn.run("backend.main:app", host=args.host, port=args.port, reload=args.reload)
    except KeyboardInterrupt:
        logger.info("👋 Server stopped")


if __name__ == "__main__":
    main()
