"""Semantic control for deterministic particle effects.

Layers, bottom to top: a parameter catalog (`catalog`), a deterministic
particle engine (`engine`), a synchronized three-level control tree
(`tree`), an LLM generation pipeline (`prompts`, `schemas`, `pipeline`,
`provider`), and a session service plus CLI on top (`service`, `cli`).
"""

__version__ = "0.1.0"
