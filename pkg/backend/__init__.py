# backend/__init__.py

# FastAPI app exposing the solvers and the simulation harness.
